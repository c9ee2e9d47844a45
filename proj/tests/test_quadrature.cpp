#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <numbers>

#include "whf/errors.hpp"
#include "whf/quadrature.hpp"

using whf::QuadratureSpec;

TEST_CASE("Gauss-Kronrod integrates high-degree polynomials") {
  QuadratureSpec q;
  q.abs_tol = 1e-14;
  q.rel_tol = 1e-13;
  const double v = whf::integrate([](double x) { return std::pow(x, 30); }, 0.0, 1.0, q);
  CHECK(v == doctest::Approx(1.0 / 31.0).epsilon(1e-13));
}

TEST_CASE("semi-infinite map") {
  QuadratureSpec q;
  q.abs_tol = 1e-13;
  q.rel_tol = 1e-12;
  const double v = whf::integrate_to_infinity([](double x) { return std::exp(-2.0 * x); }, 1.0, q);
  CHECK(v == doctest::Approx(0.5 * std::exp(-2.0)).epsilon(1e-11));
  const double g = whf::integrate_to_infinity([](double x) { return std::exp(-0.5 * x * x); }, 0.0, q);
  CHECK(g == doctest::Approx(std::sqrt(std::numbers::pi / 2.0)).epsilon(1e-11));
}

TEST_CASE("square-root endpoint singularity") {
  auto f = [](double x) { return std::cos(x) / std::sqrt(1.0 - x); };
  QuadratureSpec q;
  q.abs_tol = 1e-12;
  q.rel_tol = 1e-11;
  const double ours = whf::integrate_sqrt_ends(f, 0.0, 1.0, false, true, q);
  // 30-digit reference; tanh-sinh in double precision loses digits in 1 - x.
  CHECK(ours == doctest::Approx(1.4995966097139716937).epsilon(1e-13));
  boost::math::quadrature::tanh_sinh<double> ts;
  CHECK(ours == doctest::Approx(ts.integrate(f, 0.0, 1.0)).epsilon(1e-8));
}

TEST_CASE("split points at a kink") {
  QuadratureSpec q;
  const double splits[] = {0.3};
  const double v = whf::integrate([](double x) { return std::abs(x - 0.3); }, 0.0, 1.0, q, splits);
  CHECK(v == doctest::Approx(0.5 * (0.09 + 0.49)).epsilon(1e-12));
}

TEST_CASE("an unreachable tolerance raises NumericalError") {
  QuadratureSpec q;
  q.abs_tol = 1e-15;
  q.rel_tol = 1e-15;
  q.max_intervals = 1;
  auto rough = [](double x) { return std::sin(1.0 / (x + 1e-3)); };
  CHECK_THROWS_AS(whf::integrate(rough, 0.0, 1.0, q), whf::NumericalError);
}

TEST_CASE("quadrature settings validation") {
  QuadratureSpec q;
  q.abs_tol = -1.0;
  CHECK_THROWS(q.validate());
  QuadratureSpec ok;
  CHECK_NOTHROW(ok.validate());
}
