#include <doctest.h>

#include <cmath>

#include "whf/operators.hpp"
#include "whf/resolvent.hpp"

using whf::CoefficientModel;
using whf::TestFunction;

// Reference values of 1/2 int sigma^2 rho(0; s, t) h(t) dt for the one-jump
// model, evaluated with 30-digit quadrature.
TEST_CASE("one-jump resolvent of an exponential") {
  const whf::GammaKernel k(CoefficientModel::one_jump(1.0, -1.0, 1.0, 1.0, 0.5));
  const whf::Resolvent R(k, TestFunction::exponential(1.0));
  CHECK(R(0.0) == doctest::Approx(0.323261462412451).epsilon(1e-4));
  CHECK(R(0.3) == doctest::Approx(0.237792735035206).epsilon(1e-4));
  CHECK(R(0.6) == doctest::Approx(0.158428272916643).epsilon(1e-6));
  CHECK(R.richardson_change() < 1e-2);
}

TEST_CASE("the resolvent inverts the generator") {
  const whf::GammaKernel k(CoefficientModel::one_jump(1.0, -1.0, 1.0, 1.0, 0.5));
  const auto h = TestFunction::exponential(1.0);
  const whf::Resolvent R(k, h);
  for (double s : {0.1, 0.35, 0.7}) {
    CHECK(whf::apply_gamma(k, R.function(), s) == doctest::Approx(-h(s)).epsilon(1e-3));
  }
}

TEST_CASE("composition differs from the resolvent before the jump only") {
  const auto m = CoefficientModel::one_jump(1.0, -1.0, 1.0, 1.0, 0.5);
  const whf::GammaKernel k(m);
  const auto h = TestFunction::exponential(1.0);
  const whf::Resolvent R(k, h);
  const double after = whf::resolvent_by_composition(m, h, 0.6);
  CHECK(after == doctest::Approx(R(0.6)).epsilon(1e-4));
  const double before = whf::resolvent_by_composition(m, h, 0.0);
  CHECK(std::abs(before - R(0.0)) > 0.05);
}
