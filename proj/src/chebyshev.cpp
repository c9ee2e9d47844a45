#include "whf/chebyshev.hpp"

#include <cmath>
#include <numbers>

#include "whf/errors.hpp"

namespace whf {

std::vector<double> Chebyshev::nodes(double a, double b, int n) {
  std::vector<double> x(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    const double theta = std::numbers::pi * (k + 0.5) / n;
    x[static_cast<std::size_t>(k)] = 0.5 * (a + b) + 0.5 * (b - a) * std::cos(theta);
  }
  return x;
}

Chebyshev Chebyshev::from_values(const std::vector<double>& values, double a, double b) {
  if (!(b > a) || values.empty()) throw DomainError("Chebyshev fit needs a < b and values");
  const int n = static_cast<int>(values.size());
  Chebyshev out;
  out.a_ = a;
  out.b_ = b;
  out.c_.assign(values.size(), 0.0);
  for (int j = 0; j < n; ++j) {
    double sum = 0.0;
    for (int k = 0; k < n; ++k) {
      sum += values[static_cast<std::size_t>(k)] * std::cos(std::numbers::pi * j * (k + 0.5) / n);
    }
    out.c_[static_cast<std::size_t>(j)] = (j == 0 ? 1.0 : 2.0) * sum / n;
  }
  return out;
}

Chebyshev::Chebyshev(const std::function<double(double)>& f, double a, double b, int n) {
  if (n < 1) throw DomainError("Chebyshev fit needs at least one node");
  std::vector<double> values;
  for (double x : nodes(a, b, n)) values.push_back(f(x));
  *this = from_values(values, a, b);
}

double Chebyshev::operator()(double x) const {
  // Clenshaw recurrence.
  const double y = (2.0 * x - a_ - b_) / (b_ - a_);
  double b1 = 0.0, b2 = 0.0;
  for (std::size_t j = c_.size(); j-- > 1;) {
    const double tmp = 2.0 * y * b1 - b2 + c_[j];
    b2 = b1;
    b1 = tmp;
  }
  return y * b1 - b2 + (c_.empty() ? 0.0 : c_[0]);
}

Chebyshev Chebyshev::derivative() const {
  Chebyshev d;
  d.a_ = a_;
  d.b_ = b_;
  const std::size_t n = c_.size();
  if (n <= 1) {
    d.c_ = {0.0};
    return d;
  }
  d.c_.assign(n - 1, 0.0);
  // c'_{j-1} = c'_{j+1} + 2 j c_j, scaled by the interval map.
  std::vector<double> cd(n + 1, 0.0);
  for (std::size_t j = n - 1; j >= 1; --j) {
    cd[j - 1] = cd[j + 1] + 2.0 * static_cast<double>(j) * c_[j];
    if (j == 1) break;
  }
  cd[0] *= 0.5;
  const double scale = 2.0 / (b_ - a_);
  for (std::size_t j = 0; j + 1 < n; ++j) d.c_[j] = cd[j] * scale;
  return d;
}

double Chebyshev::tail_magnitude() const {
  double m = 0.0;
  const std::size_t n = c_.size();
  for (std::size_t j = n > 3 ? n - 3 : 0; j < n; ++j) m = std::max(m, std::abs(c_[j]));
  return m;
}

}  // namespace whf
