#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "whf/coefficients.hpp"
#include "whf/montecarlo.hpp"
#include "whf/quadrature.hpp"

namespace whf::cli {

// lo:step:hi inclusive, or a single value. A leading '+' on every part makes
// the values offsets from a base point (used for t relative to s).
struct Range {
  double lo = 0.0;
  double step = 0.0;
  double hi = 0.0;
  bool relative = false;

  std::vector<double> values(double base = 0.0) const;
  std::string to_string() const;
};

Range parse_range(std::string_view text);

// Simulation settings given explicitly; each experiment starts from its own
// defaults and applies these on top.
struct SimOverrides {
  std::optional<std::size_t> n_paths;
  std::optional<double> dt;
  std::optional<std::uint64_t> seed;
  std::optional<double> horizon;
  std::optional<bool> bridge_correction;

  SimConfig apply(SimConfig base) const;
};

struct RunConfig {
  std::optional<CoefficientModel> model;
  QuadratureSpec quad;
  SimOverrides sim;
  std::optional<double> rate;  // killing / test-function rate c
  Range grid_s{0.0, 0.1, 1.0, false};
  Range grid_t{0.05, 0.05, 2.0, true};
  double tolerance_scale = 1.0;
  std::string out_dir;
  bool svg = false;
  int threads = 0;
  // Every accepted setting as "section.key = value", in application order.
  std::vector<std::string> echo;

  void apply(const std::string& section, const std::string& key, const std::string& value);
  // Builds the model from list-form keys and checks every block.
  void finalize();

 private:
  std::optional<std::vector<double>> breakpoints_;
  std::optional<std::vector<double>> v_;
  std::optional<std::vector<double>> sigma_;
};

// Sectioned key = value text; '#' and ';' start comments; unknown sections
// and keys are rejected with their line and column.
RunConfig parse_config(std::string_view text);
RunConfig load_config(const std::string& path);

// const:v=1,sigma=1 | onejump:v0=1,v1=-1,sigma0=1,sigma1=1,t0=0.5 |
// table1:<column> | breakpoints=[..], v=[..], sigma=[..] | path to a config
// file with a [model] section.
CoefficientModel parse_model_spec(std::string_view text);

std::vector<double> parse_list(std::string_view text);

}  // namespace whf::cli
