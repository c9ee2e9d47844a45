#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "whf/cli/config.hpp"
#include "whf/cli/output.hpp"
#include "whf/cli/run.hpp"
#include "whf/errors.hpp"

namespace fs = std::filesystem;
using namespace whf::cli;

namespace {

fs::path fresh_dir(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("whf_test_cli_" + name);
  fs::remove_all(p);
  return p;
}

int run_quiet(std::vector<std::string> args, std::string* err_text = nullptr) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  if (err_text) *err_text = err.str();
  return code;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

}  // namespace

TEST_CASE("config sections and keys") {
  const auto cfg = parse_config(
      "# comment\n"
      "[model]\n"
      "breakpoints = [0.5]\n"
      "v = [1, -1]   ; trailing\n"
      "sigma = [1, 2]\n"
      "[simulation]\n"
      "n_paths = 123\n"
      "dt = 1e-3\n"
      "[experiment]\n"
      "c = 2\n"
      "grid_s = 0:0.5:1\n");
  REQUIRE(cfg.model.has_value());
  CHECK(cfg.model->breakpoints() == std::vector<double>{0.5});
  CHECK(cfg.model->sigma_at(0.7) == 2.0);
  CHECK(cfg.sim.n_paths == std::size_t{123});
  CHECK(cfg.rate == 2.0);
  CHECK(cfg.grid_s.values().size() == 3);
}

TEST_CASE("config errors carry line and column") {
  try {
    parse_config("[simulation]\n  bogus = 1\n");
    FAIL("expected ConfigError");
  } catch (const whf::ConfigError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 3);
  }
  try {
    parse_config("[simulation]\nn_paths = abc\n");
    FAIL("expected ConfigError");
  } catch (const whf::ConfigError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 11);
  }
  CHECK_THROWS_AS(parse_config("[nowhere]\n"), whf::ConfigError);
  CHECK_THROWS_AS(parse_config("[model]\nv = [1, 2]\n"), whf::ConfigError);
  CHECK_THROWS_AS(parse_config("[simulation]\ndt = -1\n"), whf::ConfigError);
}

TEST_CASE("ranges") {
  const auto r = parse_range("0:0.25:1");
  CHECK(r.values() == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
  const auto rel = parse_range("+0.1:+0.1:+0.3");
  CHECK(rel.relative);
  const auto v = rel.values(1.0);
  REQUIRE(v.size() == 3);
  CHECK(v[2] == doctest::Approx(1.3));
  CHECK(parse_range("2").values() == std::vector<double>{2.0});
  CHECK_THROWS_AS(parse_range("1:0:2"), whf::ConfigError);
}

TEST_CASE("model specs") {
  CHECK(parse_model_spec("const:v=2,sigma=0.5") == whf::CoefficientModel::constant(2.0, 0.5));
  CHECK(parse_model_spec("onejump:v0=1,v1=-1,t0=0.5") == whf::CoefficientModel::one_jump(1, -1, 1, 1, 0.5));
  CHECK(parse_model_spec("table1:2").segments() == 4);
  CHECK_THROWS_AS(parse_model_spec("const:q=1"), whf::ConfigError);
}

TEST_CASE("csv escaping") {
  CHECK(csv_escape("plain") == "plain");
  CHECK(csv_escape("a,b") == "\"a,b\"");
  CHECK(csv_escape("say \"hi\"") == "\"say \"\"hi\"\"\"");
}

TEST_CASE("exit codes") {
  const auto dir = fresh_dir("codes");
  CHECK(run_quiet({"--out", dir.string(), "volterra"}) == kPass);
  CHECK(fs::exists(dir / "volterra.csv"));
  CHECK(fs::exists(dir / "manifest_volterra.json"));
  CHECK(run_quiet({"--out", dir.string(), "--tolerance-scale", "1e-300", "volterra"}) == kCheckFailed);
  std::string err;
  CHECK(run_quiet({"--out", dir.string(), "--set", "quadrature.max_intervals=1", "volterra"}, &err) ==
        kNumericalError);
  CHECK(err.find("numerical failure") != std::string::npos);
  CHECK(run_quiet({"--out", dir.string(), "--set", "simulation.nonsense=1", "volterra"}) == kParseError);
  CHECK(run_quiet({"no_such_command"}) == kParseError);
  CHECK(run_quiet({"--out", dir.string(), "--model", "const:v=1,sigma=-1", "volterra"}) == kParseError);
  fs::remove_all(dir);
}

TEST_CASE("repeated runs write identical bytes") {
  const auto a = fresh_dir("det_a"), b = fresh_dir("det_b");
  REQUIRE(run_quiet({"--out", a.string(), "--threads", "1", "gamma"}) == kPass);
  REQUIRE(run_quiet({"--out", b.string(), "--threads", "3", "gamma"}) == kPass);
  int compared = 0;
  for (const auto& entry : fs::directory_iterator(a)) {
    if (entry.path().extension() != ".csv") continue;
    CHECK(slurp(entry.path()) == slurp(b / entry.path().filename()));
    ++compared;
  }
  CHECK(compared > 0);
  fs::remove_all(a);
  fs::remove_all(b);
}
