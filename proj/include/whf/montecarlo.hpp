#pragma once

#include <cstdint>
#include <vector>

#include "whf/closed_form.hpp"
#include "whf/coefficients.hpp"
#include "whf/quadrature.hpp"
#include "whf/statistics.hpp"

namespace whf {

struct SimConfig {
  std::size_t n_paths = 10000;
  double dt = 1e-4;
  std::uint64_t seed = 20240601;
  // Simulated time after the start. Killed simulations ignore it and run to
  // the capped killing time.
  double horizon = 1.0;
  bool bridge_correction = true;
  // 0 means no killing; otherwise paths stop at an independent exponential
  // time of this rate, capped at its 1 - 1e-6 quantile.
  double kill_rate = 0.0;
  int threads = 0;

  void validate() const;
};

// Quantile used to cap exponential killing times.
inline constexpr double kKillQuantile = 1.0 - 1e-6;

// Time grid s, s + dt, s + 2 dt, ... up to s + horizon with every breakpoint
// inserted; grid points closer than 1e-9 dt to a breakpoint snap onto it.
std::vector<double> simulation_grid(const CoefficientModel& model, double s, double horizon, double dt);

struct PathEnsemble {
  CoefficientModel model;
  double s = 0.0;
  double a = 0.0;
  SimConfig cfg;
  std::vector<double> times;     // shared grid
  std::vector<double> step_var;  // integrated variance of each step
  std::vector<double> positions; // n_paths x times.size(), path-major

  std::size_t n_paths() const { return cfg.n_paths; }
  std::size_t n_times() const { return times.size(); }
  const double* path(std::size_t p) const { return positions.data() + p * times.size(); }
};

// Exact Gaussian increments on the breakpoint-aligned grid.
PathEnsemble simulate(const CoefficientModel& model, double s, double a, const SimConfig& cfg);

// First passage above ell (Plus) or below ell (Minus) per path; +inf when no
// passage happens on the grid. With strict = true the strict inequality is
// used (the eta variant). With bridge correction, an intra-step crossing is
// drawn with the Brownian-bridge probability and then recorded at the end of
// that step.
std::vector<double> first_passage(const PathEnsemble& e, double ell, Sign sign, bool strict = false);
// Index into times of each recorded passage (n_times() when none).
std::vector<std::size_t> first_passage_index(const PathEnsemble& e, double ell, Sign sign, bool strict = false);

struct KilledSamples {
  std::vector<double> end;   // X at the killing time
  std::vector<double> max;   // running maximum up to it (includes the start)
  std::vector<double> min;   // running minimum
  std::vector<double> kill;  // killing time
};

// Paths started at (0, a) and stopped at exponential(kill_rate) times, with
// exact bridge extrema within each step when bridge_correction is on.
KilledSamples simulate_killed(const CoefficientModel& model, double a, const SimConfig& cfg);

// E(X_e - max X) - E(min X) at an independent exponential time e.
Estimate table1_statistic(const CoefficientModel& model, const SimConfig& cfg, double kill_rate = 1.0);

// Drift models of the four experiment columns, sigma = 1 throughout.
// Column 0: v = 1, 1: v = -1, 2: 1_[0,1/2] - 1_[1,3/2], 3: cos (piecewise
// constant midpoint values on cells of the given width up to horizon).
CoefficientModel table1_model(int column, double cos_width = 1e-2, double cos_horizon = 14.0);
// Bound on |int (cos - midpoint approximation)| over [0, horizon].
double cosine_bias_bound(double width, double horizon);

// 4 ell times the completed downcrossings of [x - ell, x + ell] by time T.
// With bridge correction the detection levels are pulled inward by the mean
// discrete-monitoring overshoot 0.5826 sigma sqrt(dt).
std::vector<double> downcrossing_local_time(const PathEnsemble& e, double level, double half_width, double T);
// Same estimator on paths streamed without storage; identical numbers to
// simulate() followed by the ensemble version for the same configuration.
std::vector<double> downcrossing_local_time(const CoefficientModel& model, double s, double a, double level,
                                            double half_width, double T, const SimConfig& cfg);

// 1 - (P_{r/2} 1_[0,T])(s), constant coefficients only.
double localtime_cdf_predicted(const CoefficientModel& model, double s, double T, double r,
                               const QuadratureSpec& quad = {});

}  // namespace whf
