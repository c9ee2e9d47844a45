#pragma once

#include <string>
#include <vector>

#include "whf/cli/config.hpp"
#include "whf/cli/output.hpp"
#include "whf/factorize.hpp"

namespace whf::cli {

struct ExperimentResult {
  std::string name;
  std::vector<VerificationReport> reports;
  std::vector<Table> tables;
  std::vector<Plot> plots;

  // Failing reports that count towards the exit status.
  std::size_t failures() const;
};

// Subcommand names in the order `all` runs them.
const std::vector<std::string>& experiment_names();

// Runs one experiment. Tolerances are multiplied by cfg.tolerance_scale and
// pass flags recomputed; numerical failures propagate as exceptions.
ExperimentResult run_experiment(const std::string& name, const RunConfig& cfg);

}  // namespace whf::cli
