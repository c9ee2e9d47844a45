#pragma once

#include <vector>

#include "whf/gamma.hpp"
#include "whf/test_function.hpp"

namespace whf {

struct ResolventOptions {
  // Target cell width on [0, last breakpoint]; every breakpoint is a cell edge.
  double cell_width = 1.0 / 64.0;
  int min_cells_per_segment = 8;
  // Combine the solves at widths w and w/2 to cancel the leading O(w) error.
  bool richardson = true;
};

// F = int_0^inf P_y h dy for a piecewise-constant model, obtained by solving
// (Gamma F)(s) = -h(s). Past the last breakpoint the coefficients are
// constant and F is the constant-coefficient resolvent. Before it, F' is
// taken piecewise constant on cells and the first-kind Volterra equation
//   int_s^inf F'(r) gamma(s, r) dr = -h(s)
// is collocated at cell midpoints and solved by back substitution.
class Resolvent {
 public:
  Resolvent(const GammaKernel& k, const TestFunction& h, ResolventOptions opts = {});

  double operator()(double s) const { return fn_(s); }
  // F with its piecewise-constant derivative, usable as a test function.
  const TestFunction& function() const { return fn_; }
  const std::vector<double>& edges() const { return edges_; }
  // Largest change at the edges between the two Richardson levels.
  double richardson_change() const { return richardson_change_; }

 private:
  struct Solution {
    std::vector<double> F;  // at edges
  };
  Solution solve(const GammaKernel& k, const TestFunction& h, const TestFunction& terminal,
                 const std::vector<double>& edges) const;

  std::vector<double> edges_;
  std::vector<double> values_;
  double richardson_change_ = 0.0;
  TestFunction fn_;
};

}  // namespace whf
