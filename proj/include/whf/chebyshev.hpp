#pragma once

#include <functional>
#include <vector>

namespace whf {

// Chebyshev interpolant on [a, b] through the first-kind Chebyshev points.
class Chebyshev {
 public:
  Chebyshev() = default;
  Chebyshev(const std::function<double(double)>& f, double a, double b, int n);

  double operator()(double x) const;
  Chebyshev derivative() const;

  double lo() const { return a_; }
  double hi() const { return b_; }
  // Size of the trailing coefficients, a cheap proxy for interpolation error.
  double tail_magnitude() const;
  const std::vector<double>& coefficients() const { return c_; }

  // Interpolation nodes for a degree n - 1 fit on [a, b].
  static std::vector<double> nodes(double a, double b, int n);
  static Chebyshev from_values(const std::vector<double>& values, double a, double b);

 private:
  double a_ = 0.0;
  double b_ = 1.0;
  std::vector<double> c_;
};

}  // namespace whf
