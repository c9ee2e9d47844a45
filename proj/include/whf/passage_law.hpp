#pragma once

#include <vector>

#include "whf/closed_form.hpp"
#include "whf/coefficients.hpp"
#include "whf/quadrature.hpp"
#include "whf/test_function.hpp"

namespace whf {

// Law of the passage time tau^sign_{sign ell}(s) for a piecewise-constant
// model, built by conditioning on the position at successive breakpoints.
// Within a segment everything is closed form; each crossed breakpoint adds
// one quadrature dimension over the surviving position.
class PassageLaw {
 public:
  PassageLaw(const CoefficientModel& model, Sign sign, QuadratureSpec quad = {},
             int max_breakpoints = 3);

  // P(tau > t).
  double tail(double s, double ell, double t) const;
  // Density of tau at t > s.
  double density(double s, double ell, double t) const;
  // E f(tau) with f(inf) = 0.
  double expect(double s, double ell, const TestFunction& f) const;

  // Model of the process whose up-passage is being computed (mirrored for
  // the minus sign).
  const CoefficientModel& oriented_model() const { return model_; }
  const QuadratureSpec& quad() const { return quad_; }
  int max_breakpoints() const { return max_breakpoints_; }

 private:
  ConstCoeff segment(double s) const;
  void check_cap(double s, double t) const;
  // Upper end of the surviving-distance integral for a segment of length T.
  double survival_extent(ConstCoeff c, double ell, double T) const;
  double expect_terminal(ConstCoeff c, double s, double ell, const TestFunction& f,
                         double horizon) const;
  double expect_crossing(ConstCoeff c, double s, double ell, const TestFunction& f, double b) const;

  CoefficientModel model_;
  QuadratureSpec quad_;
  int max_breakpoints_;
};

// Survival probabilities P(tau+_w(b) > t) on a grid of distances w, for any
// number of breakpoints, from a Crank-Nicolson solve of the backward
// equation. Used when the recursion would exceed its breakpoint cap.
class LatticeSurvival {
 public:
  LatticeSurvival(const CoefficientModel& oriented_model, double b, double t, int nx = 4000,
                  int nt = 4000);
  double operator()(double w) const;
  double extent() const { return extent_; }

 private:
  double extent_;
  double dx_;
  std::vector<double> u_;  // u_[i] = survival at distance i*dx
};

}  // namespace whf
