#include <doctest.h>

#include <cmath>

#include "whf/closed_form.hpp"
#include "whf/gamma.hpp"
#include "whf/passage_law.hpp"

using whf::CoefficientModel;
using whf::GammaKernel;
using whf::Sign;

namespace {

double richardson_ratio(const whf::PassageLaw& law, double s, double t) {
  const double h = 2e-3;
  return 2.0 * law.tail(s, h, t) / h - law.tail(s, 2 * h, t) / (2 * h);
}

}  // namespace

TEST_CASE("constant kernel reduces to the closed form") {
  const GammaKernel k(CoefficientModel::constant(0.5, 1.5));
  for (double dt : {0.05, 0.5, 3.0}) {
    CHECK(k.gamma_pm(0.2, 0.2 + dt, Sign::Plus) == doctest::Approx(whf::gamma_const({0.5, 1.5}, dt, Sign::Plus)));
    CHECK(k.gamma_pm(0.2, 0.2 + dt, Sign::Minus) ==
          doctest::Approx(whf::gamma_const({0.5, 1.5}, dt, Sign::Minus)));
  }
}

TEST_CASE("kernel across a breakpoint matches the scaled tail") {
  const auto m = CoefficientModel::one_jump(1.0, -1.0, 1.0, 1.0, 0.5);
  const GammaKernel k(m);
  const whf::PassageLaw plus(m, Sign::Plus), minus(m, Sign::Minus);
  for (auto [s, t] : {std::pair{0.2, 0.8}, {0.4, 1.5}, {0.0, 0.6}}) {
    CHECK(k.gamma_pm(s, t, Sign::Plus) == doctest::Approx(richardson_ratio(plus, s, t)).epsilon(1e-3));
    CHECK(k.gamma_pm(s, t, Sign::Minus) == doctest::Approx(richardson_ratio(minus, s, t)).epsilon(1e-3));
  }
}

TEST_CASE("minus kernel is the plus kernel of the mirrored model") {
  const auto m = CoefficientModel::one_jump(1.0, -0.5, 1.0, 2.0, 0.5);
  const GammaKernel k(m), km(m.mirrored());
  for (auto [s, t] : {std::pair{0.1, 0.3}, {0.3, 0.9}, {0.6, 1.0}}) {
    CHECK(k.gamma_pm(s, t, Sign::Minus) == doctest::Approx(km.gamma_pm(s, t, Sign::Plus)).epsilon(1e-12));
  }
}

TEST_CASE("envelope bounds and monotonicity in t") {
  const GammaKernel k(CoefficientModel::one_jump(1.0, -1.0, 1.0, 2.0, 0.5));
  double prev = INFINITY;
  for (double t = 0.35; t < 2.0; t += 0.15) {
    CHECK(k.bounds_check(0.3, t).pass());
    const double g = k.gamma_total(0.3, t);
    CHECK(g < prev);
    prev = g;
  }
}

TEST_CASE("Volterra residual") {
  const GammaKernel kc(CoefficientModel::constant(1.0, 1.0));
  CHECK(std::abs(kc.volterra_residual(1.0, 0.5)) < 1e-6);
  CHECK(std::abs(kc.volterra_residual(2.0, 0.3)) < 1e-6);
  const GammaKernel kj(CoefficientModel::one_jump(1.0, -1.0, 1.0, 1.0, 0.5));
  CHECK(std::abs(kj.volterra_residual(1.0, 0.6)) < 1e-4);
}

TEST_CASE("invalid times") {
  const GammaKernel k(CoefficientModel::constant(1.0, 1.0));
  CHECK_THROWS(k.gamma_pm(1.0, 0.5, Sign::Plus));
  CHECK_THROWS(k.gamma_pm(-0.1, 0.5, Sign::Plus));
}
