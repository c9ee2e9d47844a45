#include <doctest.h>

#include <limits>

#include "whf/coefficients.hpp"
#include "whf/errors.hpp"

using whf::CoefficientModel;

TEST_CASE("cadlag evaluation of a one-jump model") {
  const auto m = CoefficientModel::one_jump(1.0, -1.0, 1.0, 2.0, 0.5);
  CHECK(m.segments() == 2);
  CHECK(m.drift_at(0.0) == 1.0);
  CHECK(m.drift_at(0.4999) == 1.0);
  CHECK(m.drift_at(0.5) == -1.0);
  CHECK(m.sigma_at(0.5) == 2.0);
  CHECK(m.next_breakpoint(0.2) == 0.5);
  CHECK(m.next_breakpoint(0.5) == std::numeric_limits<double>::infinity());
}

TEST_CASE("integrated drift and variance") {
  const auto m = CoefficientModel::one_jump(1.0, -1.0, 1.0, 2.0, 0.5);
  CHECK(m.integrated_drift(0.25, 1.0) == doctest::Approx(0.25 - 0.5));
  CHECK(m.integrated_variance(0.25, 1.0) == doctest::Approx(0.25 + 4.0 * 0.5));
  CHECK(whf::integrated_drift(m, 0.0, 0.5) == doctest::Approx(0.5));
  const auto env = m.envelope();
  CHECK(env.v_inf == 1.0);
  CHECK(env.sigma_lo == 1.0);
  CHECK(env.sigma_hi == 2.0);
}

TEST_CASE("validation rejects malformed models") {
  CHECK_THROWS_AS(CoefficientModel({0.5}, {1.0}, {1.0}), whf::DomainError);
  CHECK_THROWS_AS(CoefficientModel({}, {1.0}, {0.0}), whf::DomainError);
  CHECK_THROWS_AS(CoefficientModel({0.5, 0.5}, {1.0, 2.0, 3.0}, {1.0, 1.0, 1.0}), whf::DomainError);
  CHECK_THROWS_AS(CoefficientModel({-1.0}, {1.0, 2.0}, {1.0, 1.0}), whf::DomainError);
}

TEST_CASE("mirrored and shifted models") {
  const auto m = CoefficientModel({0.5, 1.0}, {1.0, 0.0, -1.0}, {1.0, 2.0, 1.0});
  const auto neg = m.mirrored();
  CHECK(neg.drift_at(0.1) == -1.0);
  CHECK(neg.sigma_at(0.7) == 2.0);
  const auto sh = m.shifted(0.75);
  CHECK(sh.breakpoints().size() == 1);
  CHECK(sh.breakpoints()[0] == doctest::Approx(0.25));
  CHECK(sh.drift_at(0.0) == 0.0);
}

TEST_CASE("text round trip is exact") {
  const auto m = CoefficientModel({0.1, 1.0 / 3.0}, {0.7, -2.5e-7, 1.0}, {1.0, 0.3, 2.0});
  const auto back = CoefficientModel::parse(m.to_string());
  CHECK(back == m);
  for (double x : {0.1, 1.0 / 3.0, 1e-300, -123456.789}) {
    CHECK(whf::parse_double(whf::format_double(x)) == x);
  }
  CHECK_THROWS_AS(whf::parse_double("1.0x"), whf::ConfigError);
}
