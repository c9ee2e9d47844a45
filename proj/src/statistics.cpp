#include "whf/statistics.hpp"

#include <algorithm>
#include <cmath>

#include "whf/errors.hpp"
#include "whf/parallel.hpp"

namespace whf {

Estimate mean_estimate(const std::vector<double>& x) {
  Estimate e;
  e.n = x.size();
  if (x.empty()) return e;
  e.value = pairwise_sum(x) / static_cast<double>(x.size());
  if (x.size() > 1) e.std_error = std::sqrt(sample_variance(x) / static_cast<double>(x.size()));
  return e;
}

double sample_variance(const std::vector<double>& x) {
  if (x.size() < 2) return 0.0;
  const double m = pairwise_sum(x) / static_cast<double>(x.size());
  std::vector<double> d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = (x[i] - m) * (x[i] - m);
  return pairwise_sum(d) / static_cast<double>(x.size() - 1);
}

double kolmogorov_q(double lambda) {
  if (lambda < 0.2) return 1.0;
  double sum = 0.0;
  double sign = 1.0;
  for (int k = 1; k <= 100; ++k) {
    const double term = sign * std::exp(-2.0 * k * k * lambda * lambda);
    sum += term;
    if (std::abs(term) < 1e-16) break;
    sign = -sign;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

KsResult ks_two_sample(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw DomainError("two-sample KS needs nonempty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0.0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  return {d, kolmogorov_q((ne + 0.12 + 0.11 / ne) * d)};
}

double ks_distance(std::vector<double> x, const std::function<double(double)>& cdf) {
  if (x.empty()) throw DomainError("KS distance needs a nonempty sample");
  std::sort(x.begin(), x.end());
  const double n = static_cast<double>(x.size());
  double d = 0.0;
  std::size_t i = 0;
  while (i < x.size()) {
    std::size_t j = i;
    while (j < x.size() && x[j] == x[i]) ++j;
    const double f = cdf(x[i]);
    d = std::max({d, std::abs(f - static_cast<double>(i) / n), std::abs(f - static_cast<double>(j) / n)});
    i = j;
  }
  return d;
}

}  // namespace whf
