#pragma once

#include <cmath>
#include <numbers>

namespace whf {

inline constexpr double kInvSqrt2Pi = 0.3989422804014326779399460599343819;

inline double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

// Standard normal CDF through erfc, accurate in both tails.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

// log Phi(x). For x below -30 erfc underflows soon, so the Mills-ratio
// asymptotic series takes over; its truncation error there is below 1e-12.
inline double log_normal_cdf(double x) {
  if (x > -30.0) {
    return std::log(normal_cdf(x));
  }
  const double z = 1.0 / (x * x);
  const double series = 1.0 - z * (1.0 - 3.0 * z * (1.0 - 5.0 * z * (1.0 - 7.0 * z)));
  return -0.5 * x * x - std::log(-x) + std::log(kInvSqrt2Pi) + std::log(series);
}

}  // namespace whf
