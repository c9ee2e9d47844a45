#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <complex>

#include "whf/factorize.hpp"
#include "whf/operators.hpp"

using whf::CoefficientModel;
using whf::Payoff;
using whf::Sign;
using whf::TestFunction;

TEST_CASE("constant payoff integrates the test function") {
  const auto m = CoefficientModel::constant(0.0, 1.0);
  const auto h = TestFunction::exponential(1.0);
  CHECK(whf::wh_lhs(m, Payoff::one(), h, 0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(whf::wh_rhs(m, Payoff::one(), h, 0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("odd payoff under a symmetric model") {
  const auto m = CoefficientModel::constant(0.0, 1.0);
  CHECK(std::abs(whf::wh_lhs(m, Payoff::identity(), TestFunction::exponential(1.0), 0.0, 0.0)) < 1e-9);
}

TEST_CASE("payoff above the start leaves only the upward term") {
  const auto m = CoefficientModel::constant(0.5, 1.0);
  const auto h = TestFunction::exponential(1.0);
  const auto u = Payoff::triangle(1.0, 0.5);
  const auto R = whf::constant_resolvent({0.5, 1.0}, h);
  auto up = [&](double ell) { return u(ell) * whf::apply_passage_semigroup(m, ell, R, 0.0, Sign::Plus); };
  const double ref = 2.0 * boost::math::quadrature::gauss_kronrod<double, 31>::integrate(up, 0.5, 1.5, 8, 1e-10);
  CHECK(whf::wh_rhs(m, u, h, 0.0, 0.0) == doctest::Approx(ref).epsilon(1e-6));
}

TEST_CASE("factorization for constant and one-jump models") {
  const auto h = TestFunction::exponential(1.0);
  const auto u = Payoff::gaussian_bump(0.0, 0.5);
  const auto c = CoefficientModel::constant(1.0, 1.0);
  const double lc = whf::wh_lhs(c, u, h, 0.2, 0.3);
  CHECK(whf::wh_rhs(c, u, h, 0.2, 0.3) == doctest::Approx(lc).epsilon(1e-3));
  const auto j = CoefficientModel::one_jump(1.0, -1.0, 1.0, 1.0, 0.5);
  const double lj = whf::wh_lhs(j, u, h, 0.0, 0.0);
  CHECK(whf::wh_rhs(j, u, h, 0.0, 0.0) == doctest::Approx(lj).epsilon(1e-2));
}

TEST_CASE("stopped identity at T = s cancels") {
  whf::SimConfig cfg;
  cfg.n_paths = 1000;
  const auto r = whf::wh_stopped(CoefficientModel::constant(1.0, 1.0), Payoff::gaussian_bump(0.0, 0.5),
                                 TestFunction::exponential(1.0), 0.5, 0.0, 0.5, cfg);
  CHECK(r.pass);
  CHECK(r.lhs == 0.0);
}

TEST_CASE("classical routes agree") {
  const whf::ConstCoeff c{1.0, 1.0};
  const auto u = Payoff::gaussian_bump(0.0, 0.5);
  const double d = whf::classical_direct(c, 1.0, u, 0.0);
  CHECK(whf::classical_factorized(c, 1.0, u, 0.0, true) == doctest::Approx(d).epsilon(1e-6));
  CHECK(whf::classical_factorized(c, 1.0, u, 0.0, false) == doctest::Approx(d).epsilon(1e-6));
  whf::SimConfig cfg;
  cfg.n_paths = 4000;
  cfg.dt = 1e-3;
  const auto res = whf::classical_wh(c, 1.0, u, 0.0, cfg);
  for (const auto& rep : res.reports) CHECK_MESSAGE(rep.pass, rep.identity);
}

TEST_CASE("characteristic function of the killed position") {
  for (double xi : {0.5, 1.0, 2.0}) {
    const std::complex<double> psi(-0.5 * xi * xi, xi);
    CHECK(whf::characteristic_value({1.0, 1.0}, 1.0, xi) == doctest::Approx((1.0 / (1.0 - psi)).real()));
    CHECK(whf::classical_direct({1.0, 1.0}, 1.0, Payoff::cosine(xi), 0.0) ==
          doctest::Approx(whf::characteristic_value({1.0, 1.0}, 1.0, xi)).epsilon(1e-6));
  }
}

TEST_CASE("noisy equation on constant coefficients") {
  const auto r = whf::noisy_wh_residual(CoefficientModel::constant(1.0, 1.0), 1.0, 0.3, Sign::Plus);
  CHECK(r.exact);
  CHECK(std::abs(r.residual) < 1e-12);
  CHECK(r.gamma_h == doctest::Approx((1.0 - std::sqrt(3.0)) * std::exp(-0.3)));
  const auto z = whf::noisy_wh_residual(CoefficientModel::constant(0.0, 1.0), 1.0, 0.0, Sign::Minus);
  CHECK(std::abs(z.residual) < 1e-12);
}

TEST_CASE("noisy equation inside the first segment of a one-jump model") {
  const auto m = CoefficientModel::one_jump(1.0, -1.0, 1.0, 1.0, 0.5);
  for (Sign sg : {Sign::Plus, Sign::Minus}) {
    const auto r = whf::noisy_wh_residual(m, 1.0, 0.2, sg);
    CHECK_FALSE(r.exact);
    CHECK(std::abs(r.residual) < 1e-3);
  }
}

TEST_CASE("report comparison convention") {
  const auto r = whf::VerificationReport::compare("x", 1.0, 1.5, 0.5, "exact");
  CHECK(r.abs_error == 0.5);
  CHECK(r.pass);
  CHECK_FALSE(whf::VerificationReport::compare("x", 1.0, 1.5, 0.49, "exact").pass);
}
