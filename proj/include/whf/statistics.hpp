#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace whf {

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  std::size_t n = 0;
};

// Sample mean and standard error of the mean, summed pairwise in index order.
Estimate mean_estimate(const std::vector<double>& x);
double sample_variance(const std::vector<double>& x);

struct KsResult {
  double statistic;
  double p_value;
};

// Kolmogorov limiting survival function Q(lambda) = 2 sum (-1)^{k-1} e^{-2 k^2 lambda^2}.
double kolmogorov_q(double lambda);
// Two-sample Kolmogorov-Smirnov test with the Stephens small-sample correction.
KsResult ks_two_sample(std::vector<double> a, std::vector<double> b);
// sup_x |F_n(x) - F(x)| for a continuous reference CDF, checked on both
// sides of every jump of the empirical CDF.
double ks_distance(std::vector<double> x, const std::function<double(double)>& cdf);

}  // namespace whf
