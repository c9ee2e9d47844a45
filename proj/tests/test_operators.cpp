#include <doctest.h>

#include <cmath>

#include "whf/closed_form.hpp"
#include "whf/errors.hpp"
#include "whf/operators.hpp"

using whf::CoefficientModel;
using whf::Sign;
using whf::TestFunction;

TEST_CASE("passage semigroup on an exponential") {
  const auto m = CoefficientModel::constant(0.8, 1.2);
  const auto h = TestFunction::exponential(1.5);
  for (Sign sg : {Sign::Plus, Sign::Minus}) {
    const double lam = whf::laplace_exponent({0.8, 1.2}, 1.5, sg);
    for (double ell : {0.1, 0.5, 1.0}) {
      const double got = whf::apply_passage_semigroup(m, ell, h, 0.3, sg);
      CHECK(got == doctest::Approx(std::exp(-1.5 * 0.3 + lam * ell)).epsilon(1e-7));
    }
    CHECK(whf::apply_passage_semigroup(m, 0.0, h, 0.3, sg) == h(0.3));
  }
}

TEST_CASE("generator on an exponential is the Laplace exponent") {
  const whf::GammaKernel k(CoefficientModel::constant(-0.4, 0.9));
  const auto h = TestFunction::exponential(0.7);
  for (Sign sg : {Sign::Plus, Sign::Minus}) {
    const double lam = whf::laplace_exponent({-0.4, 0.9}, 0.7, sg);
    CHECK(whf::apply_generator_pm(k, h, 0.5, sg) == doctest::Approx(lam * h(0.5)).epsilon(1e-7));
  }
}

TEST_CASE("constant resolvent of an exponential") {
  const whf::ConstCoeff c{1.0, 1.0};
  const auto h = TestFunction::exponential(1.0);
  const double lp = whf::laplace_exponent(c, 1.0, Sign::Plus);
  const double lm = whf::laplace_exponent(c, 1.0, Sign::Minus);
  const auto R = whf::constant_resolvent(c, h);
  for (double s : {0.0, 0.4, 2.0}) {
    CHECK(R(s) == doctest::Approx(h(s) / (-lp - lm)).epsilon(1e-8));
    CHECK(whf::resolvent_integral(CoefficientModel::constant(1.0, 1.0), h, s) == doctest::Approx(R(s)).epsilon(1e-8));
  }
}

TEST_CASE("homogeneous semigroup composes the two passages") {
  const auto m = CoefficientModel::constant(0.5, 1.0);
  const auto h = TestFunction::exponential(1.0);
  const double ph = whf::apply_homogeneous_semigroup(m, 0.4, h, 0.0);
  const double pc = whf::apply_composed_semigroup(m, 0.4, 0.4, h, 0.0);
  CHECK(ph == doctest::Approx(pc).epsilon(1e-6));
  CHECK_THROWS_AS(whf::apply_homogeneous_semigroup(CoefficientModel::one_jump(1, -1, 1, 1, 0.5), 0.4, h, 0.0),
                  whf::UnsupportedModel);
}

TEST_CASE("positivity and contraction on an indicator") {
  const auto m = CoefficientModel::one_jump(1.0, -1.0, 1.0, 1.0, 0.5);
  const auto f = TestFunction::indicator(1.0);
  for (double ell : {0.05, 0.3, 1.0}) {
    for (double s : {0.0, 0.45, 0.8}) {
      const double p = whf::apply_passage_semigroup(m, ell, f, s, Sign::Plus);
      CHECK(p >= -1e-12);
      CHECK(p <= 1.0 + 1e-12);
    }
  }
}
