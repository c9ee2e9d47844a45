#include <doctest.h>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <numbers>

#include "whf/closed_form.hpp"
#include "whf/normal.hpp"
#include "whf/operators.hpp"

using whf::ConstCoeff;
using whf::Sign;

namespace {

// Inverse Gaussian first-passage density written out independently.
double ig_density(double v, double sigma, double ell, double t) {
  const double log_d = std::log(ell / sigma) - 0.5 * std::log(2.0 * std::numbers::pi) - 1.5 * std::log(t) -
                      (ell - v * t) * (ell - v * t) / (2.0 * sigma * sigma * t);
  return std::exp(log_d);
}

}  // namespace

TEST_CASE("tail probability equals the integrated passage density") {
  boost::math::quadrature::exp_sinh<double> es;
  for (auto [v, sigma, ell, dt] : {std::tuple{1.0, 1.0, 0.5, 0.7}, {-0.5, 2.0, 1.0, 0.3}, {0.0, 1.0, 0.2, 2.0}}) {
    auto f = [&](double r) { return ig_density(v, sigma, ell, dt + r); };
    // A negative drift leaves mass exp(2 v ell / sigma^2) short of one at infinity.
    const double defect = v < 0.0 ? -std::expm1(2.0 * v * ell / (sigma * sigma)) : 0.0;
    const double ref = es.integrate(f) + defect;
    CHECK(whf::tail_prob_up({v, sigma}, ell, dt) == doctest::Approx(ref).epsilon(1e-9));
    CHECK(whf::passage_density_up({v, sigma}, ell, dt) == doctest::Approx(ig_density(v, sigma, ell, dt)));
    CHECK(whf::tail_prob_down({v, sigma}, ell, dt) == doctest::Approx(whf::tail_prob_up({-v, sigma}, ell, dt)));
  }
  // Frozen from a 30-digit evaluation.
  CHECK(whf::tail_prob_up({1.0, 1.0}, 0.5, 0.7) == doctest::Approx(0.199633381330402).epsilon(1e-13));
  CHECK(whf::tail_prob_up({1.0, 1.0}, 0.0, 0.7) == 0.0);
}

TEST_CASE("gamma is the small-level limit of the scaled tail") {
  for (auto [v, sigma, dt] : {std::tuple{1.0, 1.0, 1.0}, {-1.0, 2.0, 0.3}, {0.5, 0.5, 2.0}}) {
    const ConstCoeff c{v, sigma};
    const double h = 1e-4;
    const double r1 = whf::tail_prob_up(c, h, dt) / h;
    const double r2 = whf::tail_prob_up(c, 2 * h, dt) / (2 * h);
    CHECK(whf::gamma_const(c, dt, Sign::Plus) == doctest::Approx(2 * r1 - r2).epsilon(1e-6));
  }
}

TEST_CASE("gamma total at (v, sigma, dt) = (1, 1, 1)") {
  // Frozen from a 30-digit evaluation of the non-cancelling sum.
  CHECK(whf::gamma_total_const({1.0, 1.0}, 1.0) == doctest::Approx(2.33326188235074519).epsilon(1e-14));
}

TEST_CASE("Laplace exponent matches the generator on an exponential") {
  boost::math::quadrature::exp_sinh<double> es;
  for (auto [v, sigma, rate] : {std::tuple{1.0, 1.0, 1.0}, {-1.0, 2.0, 0.5}, {0.0, 1.0, 2.0}}) {
    for (Sign sg : {Sign::Plus, Sign::Minus}) {
      const ConstCoeff c{v, sigma};
      auto f = [&](double t) { return -rate * std::exp(-rate * t) * whf::gamma_const(c, t, sg); };
      const double ref = es.integrate(f);
      CHECK(whf::laplace_exponent(c, rate, sg) == doctest::Approx(ref).epsilon(1e-8));
    }
  }
}

TEST_CASE("the Laplace exponents solve the quadratic") {
  for (auto [v, sigma, c] : {std::tuple{1.0, 1.0, 1.0}, {-0.5, 1.5, 0.5}, {2.0, 0.5, 2.0}}) {
    for (Sign sg : {Sign::Plus, Sign::Minus}) {
      const double lam = whf::laplace_exponent({v, sigma}, c, sg);
      const double res = 0.5 * sigma * sigma * lam * lam - whf::sign_value(sg) * v * lam - c;
      CHECK(std::abs(res) < 1e-12 * (1.0 + c));
    }
  }
}

TEST_CASE("closed-form composed density equals the convolution") {
  boost::math::quadrature::tanh_sinh<double> ts;
  const double v = 0.7, sigma = 1.3, k = 0.4, ell = 0.6, t = 1.1;
  auto conv = [&](double r) {
    if (r <= 0.0 || r >= t) return 0.0;
    return ig_density(v, sigma, k, r) * ig_density(-v, sigma, ell, t - r);
  };
  const double ref = ts.integrate(conv, 0.0, t);
  CHECK(whf::composed_passage_density({v, sigma}, k, ell, t) == doctest::Approx(ref).epsilon(1e-9));
  const auto chk = whf::composed_density_check({v, sigma}, k, ell, t);
  CHECK(chk.convolution_value == doctest::Approx(ref).epsilon(1e-7));
}

TEST_CASE("envelope bounds bracket constant-coefficient tails") {
  const auto [lo, hi] = whf::tail_envelope_bounds(1.0, 1.0, 1.0, 0.3, 0.8);
  const double t = whf::tail_prob_up({1.0, 1.0}, 0.3, 0.8);
  CHECK(lo <= t + 1e-15);
  CHECK(t <= hi + 1e-15);
}

TEST_CASE("domain errors") {
  CHECK_THROWS(whf::laplace_exponent({1.0, 1.0}, 0.0, Sign::Plus));
  CHECK_THROWS(whf::composed_passage_density({1.0, 1.0}, 0.0, 1.0, 1.0));
}
