#include "whf/closed_form.hpp"

#include <cmath>
#include <numbers>

#include "whf/errors.hpp"
#include "whf/normal.hpp"

namespace whf {

namespace {

constexpr double kExpUnderflow = 745.0;

// exp(a) * Phi(b) without overflowing exp(a) or underflowing Phi(b).
double exp_times_cdf(double a, double b) {
  const double lg = a + log_normal_cdf(b);
  return lg < -kExpUnderflow ? 0.0 : std::exp(lg);
}

}  // namespace

ConstCoeff::ConstCoeff(double v_, double sigma_) : v(v_), sigma(sigma_) {
  if (!std::isfinite(v) || !std::isfinite(sigma) || !(sigma > 0.0)) {
    throw DomainError("constant coefficients need finite v and sigma > 0");
  }
}

double tail_prob_up(ConstCoeff c, double ell, double dt) {
  if (!(dt > 0.0)) throw DomainError("tail_prob_up needs dt > 0");
  if (ell <= 0.0) return 0.0;
  const double sd = c.sigma * std::sqrt(dt);
  const double first = normal_cdf((ell - c.v * dt) / sd);
  const double second = exp_times_cdf(2.0 * c.v * ell / (c.sigma * c.sigma), -(ell + c.v * dt) / sd);
  const double p = first - second;
  return p < 0.0 ? 0.0 : (p > 1.0 ? 1.0 : p);
}

double tail_prob_down(ConstCoeff c, double ell, double dt) { return tail_prob_up(c.mirrored(), ell, dt); }

double passage_density_up(ConstCoeff c, double ell, double r) {
  if (!(r > 0.0) || !(ell > 0.0)) throw DomainError("passage_density_up needs ell > 0 and r > 0");
  const double d = ell - c.v * r;
  const double expo = d * d / (2.0 * c.sigma * c.sigma * r);
  if (expo > kExpUnderflow) return 0.0;
  return ell / (c.sigma * std::sqrt(2.0 * std::numbers::pi * r * r * r)) * std::exp(-expo);
}

double passage_density_down(ConstCoeff c, double ell, double r) {
  return passage_density_up(c.mirrored(), ell, r);
}

double joint_survival_density(ConstCoeff c, double ell, double dt, double y) {
  if (!(dt > 0.0)) throw DomainError("joint_survival_density needs dt > 0");
  if (!(y <= ell)) throw DomainError("joint_survival_density needs y <= ell");
  // The density vanishes on the absorbing level; ell - w can round to ell.
  if (y == ell) return 0.0;
  const double var = c.sigma * c.sigma * dt;
  const double d1 = y - c.v * dt;
  const double d2 = 2.0 * ell - y + c.v * dt;
  const double e1 = -d1 * d1 / (2.0 * var);
  const double e2 = 2.0 * c.v * ell / (c.sigma * c.sigma) - d2 * d2 / (2.0 * var);
  // e1 >= e2 whenever y < ell; factor out the larger exponent.
  const double val = std::exp(e1) * -std::expm1(e2 - e1);
  return val / std::sqrt(2.0 * std::numbers::pi * var);
}

double gamma_const(ConstCoeff c, double dt, Sign sign) {
  if (!(dt > 0.0)) throw DomainError("gamma_const needs dt > 0");
  const ConstCoeff o = c.oriented(sign);
  const double s2 = o.sigma * o.sigma;
  const double head = std::numbers::sqrt2 / std::sqrt(std::numbers::pi * s2 * dt) *
                      std::exp(-o.v * o.v * dt / (2.0 * s2));
  return head - 2.0 * o.v / s2 * normal_cdf(-(o.v / o.sigma) * std::sqrt(dt));
}

double gamma_total_const(ConstCoeff c, double dt) {
  if (!(dt > 0.0)) throw DomainError("gamma_total_const needs dt > 0");
  const double s2 = c.sigma * c.sigma;
  const double head = 2.0 * std::numbers::sqrt2 / std::sqrt(std::numbers::pi * s2 * dt) *
                      std::exp(-c.v * c.v * dt / (2.0 * s2));
  // 2 Phi(x) - 1 = erf(x / sqrt 2), computed without cancellation.
  return head + 2.0 * c.v / s2 * std::erf(c.v * std::sqrt(dt) / (c.sigma * std::numbers::sqrt2));
}

double survival_level_derivative(ConstCoeff c, double dt, double w) {
  if (!(dt > 0.0)) throw DomainError("survival_level_derivative needs dt > 0");
  if (w <= 0.0) return 0.0;
  const double s2 = c.sigma * c.sigma;
  const double d = w + c.v * dt;
  const double expo = d * d / (2.0 * s2 * dt);
  if (expo > kExpUnderflow) return 0.0;
  return 2.0 * w / (s2 * c.sigma * std::sqrt(2.0 * std::numbers::pi * dt * dt * dt)) * std::exp(-expo);
}

std::pair<double, double> tail_envelope_bounds(double v_inf, double sigma_lo, double sigma_hi,
                                               double ell, double dt) {
  if (!(sigma_lo > 0.0) || !(sigma_hi >= sigma_lo) || !(v_inf >= 0.0)) {
    throw DomainError("tail_envelope_bounds needs 0 < sigma_lo <= sigma_hi and v_inf >= 0");
  }
  if (!(dt > 0.0)) throw DomainError("tail_envelope_bounds needs dt > 0");
  const double drift = v_inf / (sigma_lo * sigma_lo);
  const double lower = tail_prob_up({drift, 1.0}, ell, sigma_hi * sigma_hi * dt);
  const double upper = tail_prob_up({-drift, 1.0}, ell, sigma_lo * sigma_lo * dt);
  return {lower, upper};
}

double laplace_exponent(ConstCoeff c, double rate, Sign sign) {
  if (!(rate > 0.0)) throw DomainError("laplace_exponent needs rate > 0");
  const double s2 = c.sigma * c.sigma;
  const double a = sign_value(sign) * c.v / s2;
  return a - std::sqrt(c.v * c.v / (s2 * s2) + 2.0 * rate / s2);
}

double composed_passage_density(ConstCoeff c, double k, double ell, double t) {
  if (!(t > 0.0) || !(k > 0.0) || !(ell > 0.0)) {
    throw DomainError("composed_passage_density needs k, ell, t > 0");
  }
  const double s2 = c.sigma * c.sigma;
  const double m = k + ell;
  const double expo = (k - ell) * c.v / s2 - m * m / (2.0 * s2 * t) - c.v * c.v * t / (2.0 * s2);
  if (expo < -kExpUnderflow) return 0.0;
  return m / (c.sigma * std::sqrt(2.0 * std::numbers::pi * t * t * t)) * std::exp(expo);
}

}  // namespace whf
