#include <doctest.h>

#include <cmath>
#include <algorithm>
#include <limits>

#include "whf/montecarlo.hpp"
#include "whf/normal.hpp"
#include "whf/rng.hpp"
#include "whf/statistics.hpp"

using whf::CoefficientModel;
using whf::Sign;
using whf::SimConfig;

TEST_CASE("Philox4x32-10 known answer") {
  const auto zero = whf::philox4x32({0, 0, 0, 0}, {0, 0});
  CHECK(zero[0] == 0x6627e8d5u);
  CHECK(zero[1] == 0xe169c58du);
  CHECK(zero[2] == 0xbc57ac4cu);
  CHECK(zero[3] == 0x9b00dbd8u);
}

TEST_CASE("path streams are reproducible and distinct") {
  whf::PathRng a(7, 3), b(7, 3), c(7, 4);
  for (int i = 0; i < 10; ++i) {
    const double x = a.normal();
    CHECK(x == b.normal());
    CHECK(x != c.normal());
  }
}

TEST_CASE("uniform and normal moments") {
  whf::PathRng r(11, 0);
  std::vector<double> u, z;
  for (int i = 0; i < 200000; ++i) {
    u.push_back(r.uniform());
    z.push_back(r.normal());
  }
  for (double x : u) REQUIRE((x > 0.0 && x < 1.0));
  CHECK(whf::mean_estimate(u).value == doctest::Approx(0.5).epsilon(0.005));
  const auto mz = whf::mean_estimate(z);
  CHECK(std::abs(mz.value) < 4 * mz.std_error);
  CHECK(whf::sample_variance(z) == doctest::Approx(1.0).epsilon(0.01));
  CHECK(whf::ks_distance(u, [](double x) { return x; }) < 0.005);
}

TEST_CASE("bridge-corrected maximum on a coarse grid") {
  SimConfig cfg;
  cfg.n_paths = 40000;
  cfg.dt = 0.25;
  cfg.horizon = 1.0;
  const auto e = whf::simulate(CoefficientModel::constant(0.0, 1.0), 0.0, 0.0, cfg);
  const auto tau = whf::first_passage(e, 0.5, Sign::Plus);
  std::vector<double> hit;
  for (double t : tau) hit.push_back(std::isfinite(t) ? 1.0 : 0.0);
  const auto est = whf::mean_estimate(hit);
  const double exact = 2.0 * (1.0 - whf::normal_cdf(0.5));
  CHECK(std::abs(est.value - exact) < 4 * est.std_error);
}

TEST_CASE("strict and non-strict passages agree") {
  SimConfig cfg;
  cfg.n_paths = 2000;
  cfg.dt = 1e-3;
  const auto e = whf::simulate(CoefficientModel::one_jump(1.0, -1.0, 1.0, 1.0, 0.5), 0.0, 0.0, cfg);
  CHECK(whf::first_passage_index(e, 0.3, Sign::Plus) == whf::first_passage_index(e, 0.3, Sign::Plus, true));
  CHECK(whf::first_passage_index(e, -0.3, Sign::Minus) == whf::first_passage_index(e, -0.3, Sign::Minus, true));
}

TEST_CASE("simulation does not depend on the thread count") {
  SimConfig cfg;
  cfg.n_paths = 500;
  cfg.dt = 1e-2;
  cfg.threads = 1;
  const auto m = CoefficientModel::one_jump(1.0, -1.0, 1.0, 2.0, 0.5);
  const auto one = whf::simulate(m, 0.0, 0.0, cfg);
  cfg.threads = 4;
  const auto four = whf::simulate(m, 0.0, 0.0, cfg);
  CHECK(one.positions == four.positions);
}

TEST_CASE("grid contains every breakpoint") {
  const auto g = whf::simulation_grid(CoefficientModel::one_jump(1, -1, 1, 1, 0.333), 0.0, 1.0, 0.1);
  CHECK(std::find(g.begin(), g.end(), 0.333) != g.end());
  CHECK(g.front() == 0.0);
  CHECK(g.back() == doctest::Approx(1.0));
}

TEST_CASE("Kolmogorov distribution and two-sample test") {
  CHECK(whf::kolmogorov_q(1.0) == doctest::Approx(0.269999671677355).epsilon(1e-12));
  CHECK(whf::kolmogorov_q(0.0) == 1.0);
  whf::PathRng r(5, 0);
  std::vector<double> a, b;
  for (int i = 0; i < 3000; ++i) {
    a.push_back(r.normal());
    b.push_back(r.normal() + 0.3);
  }
  CHECK(whf::ks_two_sample(a, b).p_value < 1e-6);
  std::vector<double> c(b.begin(), b.end());
  for (double& x : c) x -= 0.3;
  CHECK(whf::ks_two_sample(a, c).p_value > 1e-3);
}

TEST_CASE("invalid simulation settings") {
  SimConfig cfg;
  cfg.dt = 0.0;
  CHECK_THROWS(cfg.validate());
  cfg.dt = 1e-3;
  cfg.n_paths = 0;
  CHECK_THROWS(cfg.validate());
}
