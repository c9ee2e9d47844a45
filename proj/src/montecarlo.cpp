#include "whf/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "whf/errors.hpp"
#include "whf/operators.hpp"
#include "whf/parallel.hpp"
#include "whf/rng.hpp"
#include "whf/test_function.hpp"

namespace whf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::uint32_t kIncrementStream = 0;
constexpr std::uint32_t kBridgeStream = 1;

// Sample of the maximum of a Brownian bridge from x0 to x1 with variance var.
inline double bridge_max(double x0, double x1, double var, double u) {
  const double d = x1 - x0;
  return 0.5 * (x0 + x1 + std::sqrt(d * d - 2.0 * var * std::log(u)));
}

inline double bridge_min(double x0, double x1, double var, double u) {
  const double d = x1 - x0;
  return 0.5 * (x0 + x1 - std::sqrt(d * d - 2.0 * var * std::log(u)));
}

}  // namespace

void SimConfig::validate() const {
  if (n_paths < 1) throw ConfigError("simulation needs n_paths >= 1");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ConfigError("simulation needs dt > 0");
  if (!(horizon > 0.0) || !std::isfinite(horizon)) throw ConfigError("simulation needs horizon > 0");
  if (!(kill_rate >= 0.0) || !std::isfinite(kill_rate)) throw ConfigError("kill rate must be >= 0");
}

std::vector<double> simulation_grid(const CoefficientModel& model, double s, double horizon, double dt) {
  if (!(dt > 0.0) || !(horizon > 0.0)) throw ConfigError("grid needs dt > 0 and horizon > 0");
  const double end = s + horizon;
  const auto steps = static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
  const double snap = 1e-9 * dt;
  std::vector<double> bps = model.breakpoints_between(s, end);
  std::vector<double> grid;
  grid.reserve(steps + bps.size() + 1);
  std::size_t b = 0;
  for (std::size_t k = 0; k <= steps; ++k) {
    double t = k == steps ? end : s + static_cast<double>(k) * dt;
    while (b < bps.size() && bps[b] < t - snap) grid.push_back(bps[b++]);
    if (b < bps.size() && std::abs(bps[b] - t) <= snap) t = bps[b++];
    grid.push_back(t);
  }
  return grid;
}

PathEnsemble simulate(const CoefficientModel& model, double s, double a, const SimConfig& cfg) {
  cfg.validate();
  PathEnsemble e{model, s, a, cfg, simulation_grid(model, s, cfg.horizon, cfg.dt), {}, {}};
  const std::size_t nt = e.times.size();
  std::vector<double> mean(nt - 1), sd(nt - 1);
  e.step_var.resize(nt - 1);
  for (std::size_t i = 0; i + 1 < nt; ++i) {
    mean[i] = model.integrated_drift(e.times[i], e.times[i + 1]);
    e.step_var[i] = model.integrated_variance(e.times[i], e.times[i + 1]);
    sd[i] = std::sqrt(e.step_var[i]);
  }
  e.positions.resize(cfg.n_paths * nt);
  parallel_for(cfg.n_paths, cfg.threads, [&](std::size_t p) {
    PathRng rng(cfg.seed, p, kIncrementStream);
    double* x = e.positions.data() + p * nt;
    x[0] = a;
    for (std::size_t i = 0; i + 1 < nt; ++i) x[i + 1] = x[i] + mean[i] + sd[i] * rng.normal();
  });
  return e;
}

std::vector<std::size_t> first_passage_index(const PathEnsemble& e, double ell, Sign sign, bool strict) {
  const std::size_t nt = e.n_times();
  const double o = sign_value(sign);
  std::vector<std::size_t> out(e.n_paths(), nt);
  parallel_for(e.n_paths(), e.cfg.threads, [&](std::size_t p) {
    const double* x = e.path(p);
    // Distance to the level in the passage direction; passage when <= 0.
    auto gap = [&](std::size_t i) { return o * (ell - x[i]); };
    auto passed = [&](double g) { return strict ? g < 0.0 : g <= 0.0; };
    if (passed(gap(0))) {
      out[p] = 0;
      return;
    }
    PathRng rng(e.cfg.seed, p, kBridgeStream);
    for (std::size_t i = 0; i + 1 < nt; ++i) {
      const double g1 = gap(i + 1);
      if (passed(g1)) {
        out[p] = i + 1;
        return;
      }
      if (e.cfg.bridge_correction) {
        const double prob = std::exp(-2.0 * gap(i) * g1 / e.step_var[i]);
        if (rng.uniform() < prob) {
          out[p] = i + 1;
          return;
        }
      }
    }
  });
  return out;
}

std::vector<double> first_passage(const PathEnsemble& e, double ell, Sign sign, bool strict) {
  const auto idx = first_passage_index(e, ell, sign, strict);
  std::vector<double> out(idx.size());
  for (std::size_t p = 0; p < idx.size(); ++p) out[p] = idx[p] < e.n_times() ? e.times[idx[p]] : kInf;
  return out;
}

KilledSamples simulate_killed(const CoefficientModel& model, double a, const SimConfig& cfg) {
  cfg.validate();
  if (!(cfg.kill_rate > 0.0)) throw ConfigError("killed simulation needs kill_rate > 0");
  const double cap = -std::log1p(-kKillQuantile) / cfg.kill_rate;
  const std::vector<double>& bps = model.breakpoints();
  const double snap = 1e-9 * cfg.dt;
  KilledSamples out;
  out.end.resize(cfg.n_paths);
  out.max.resize(cfg.n_paths);
  out.min.resize(cfg.n_paths);
  out.kill.resize(cfg.n_paths);
  parallel_for(cfg.n_paths, cfg.threads, [&](std::size_t p) {
    PathRng rng(cfg.seed, p, kIncrementStream);
    const double kill = std::min(rng.exponential(cfg.kill_rate), cap);
    double t = 0.0, x = a, hi = a, lo = a;
    std::size_t seg = 0;
    while (t < kill) {
      const double k = std::floor(t / cfg.dt + 1e-9);
      double next = (k + 1.0) * cfg.dt;
      if (seg < bps.size() && bps[seg] < next + snap) next = bps[seg];
      next = std::min(next, kill);
      const double h = next - t;
      const double v = model.v_values()[seg];
      const double sig = model.sigma_values()[seg];
      const double var = sig * sig * h;
      const double x1 = x + v * h + std::sqrt(var) * rng.normal();
      if (cfg.bridge_correction) {
        hi = std::max(hi, bridge_max(x, x1, var, rng.uniform()));
        lo = std::min(lo, bridge_min(x, x1, var, rng.uniform()));
      } else {
        hi = std::max(hi, x1);
        lo = std::min(lo, x1);
      }
      x = x1;
      t = next;
      while (seg < bps.size() && bps[seg] <= t) ++seg;
    }
    out.end[p] = x;
    out.max[p] = hi;
    out.min[p] = lo;
    out.kill[p] = kill;
  });
  return out;
}

Estimate table1_statistic(const CoefficientModel& model, const SimConfig& cfg, double kill_rate) {
  SimConfig c = cfg;
  c.kill_rate = kill_rate;
  const KilledSamples k = simulate_killed(model, 0.0, c);
  std::vector<double> d(k.end.size());
  for (std::size_t p = 0; p < d.size(); ++p) d[p] = k.end[p] - k.max[p] - k.min[p];
  return mean_estimate(d);
}

CoefficientModel table1_model(int column, double cos_width, double cos_horizon) {
  switch (column) {
    case 0:
      return CoefficientModel::constant(1.0, 1.0);
    case 1:
      return CoefficientModel::constant(-1.0, 1.0);
    case 2:
      return {{0.5, 1.0, 1.5}, {1.0, 0.0, -1.0, 0.0}, {1.0, 1.0, 1.0, 1.0}};
    case 3: {
      if (!(cos_width > 0.0) || !(cos_horizon > cos_width)) throw ConfigError("bad cosine discretization");
      const auto n = static_cast<std::size_t>(std::ceil(cos_horizon / cos_width));
      std::vector<double> bps, v, sig;
      for (std::size_t i = 0; i < n; ++i) {
        v.push_back(std::cos((static_cast<double>(i) + 0.5) * cos_width));
        sig.push_back(1.0);
        if (i + 1 < n) bps.push_back(static_cast<double>(i + 1) * cos_width);
      }
      return {std::move(bps), std::move(v), std::move(sig)};
    }
    default:
      throw ConfigError("table column must be 0..3");
  }
}

double cosine_bias_bound(double width, double horizon) { return width * width * horizon / 8.0; }

namespace {

// Downcrossing counter fed one position at a time.
struct DowncrossingCounter {
  double upper, lower;
  bool seeking_upper = true;
  std::size_t count = 0;
  void feed(double x) {
    if (seeking_upper) {
      if (x >= upper) seeking_upper = false;
    } else if (x <= lower) {
      ++count;
      seeking_upper = true;
    }
  }
};

// Discrete monitoring overshoots a level by about beta sigma sqrt(dt) with
// beta = -zeta(1/2)/sqrt(2 pi), so the detection levels are moved inward by
// that amount (Broadie, Glasserman and Kou continuity correction).
constexpr double kOvershoot = 0.5825971579390106;

DowncrossingCounter make_counter(const CoefficientModel& model, double level, double half_width,
                                 const SimConfig& cfg) {
  const double shift = cfg.bridge_correction ? kOvershoot * model.envelope().sigma_hi * std::sqrt(cfg.dt) : 0.0;
  return {level + half_width - shift, level - half_width + shift};
}

void check_half_width(const CoefficientModel& model, double half_width, double dt) {
  const double min_width = 5.0 * model.envelope().sigma_hi * std::sqrt(dt);
  if (!(half_width >= min_width)) {
    throw ConfigError("downcrossing half width must be at least 5 sigma sqrt(dt) = " + std::to_string(min_width));
  }
}

}  // namespace

std::vector<double> downcrossing_local_time(const PathEnsemble& e, double level, double half_width, double T) {
  check_half_width(e.model, half_width, e.cfg.dt);
  std::vector<double> out(e.n_paths(), 0.0);
  parallel_for(e.n_paths(), e.cfg.threads, [&](std::size_t p) {
    DowncrossingCounter c = make_counter(e.model, level, half_width, e.cfg);
    const double* x = e.path(p);
    for (std::size_t i = 0; i < e.n_times() && e.times[i] <= T; ++i) c.feed(x[i]);
    out[p] = 4.0 * half_width * static_cast<double>(c.count);
  });
  return out;
}

std::vector<double> downcrossing_local_time(const CoefficientModel& model, double s, double a, double level,
                                            double half_width, double T, const SimConfig& cfg) {
  cfg.validate();
  check_half_width(model, half_width, cfg.dt);
  if (!(T > s)) throw ConfigError("local time horizon must exceed the start");
  const std::vector<double> times = simulation_grid(model, s, T - s, cfg.dt);
  const std::size_t nt = times.size();
  std::vector<double> mean(nt - 1), sd(nt - 1);
  for (std::size_t i = 0; i + 1 < nt; ++i) {
    mean[i] = model.integrated_drift(times[i], times[i + 1]);
    sd[i] = std::sqrt(model.integrated_variance(times[i], times[i + 1]));
  }
  std::vector<double> out(cfg.n_paths, 0.0);
  parallel_for(cfg.n_paths, cfg.threads, [&](std::size_t p) {
    PathRng rng(cfg.seed, p, kIncrementStream);
    DowncrossingCounter c = make_counter(model, level, half_width, cfg);
    double x = a;
    c.feed(x);
    for (std::size_t i = 0; i + 1 < nt; ++i) {
      x = x + mean[i] + sd[i] * rng.normal();
      c.feed(x);
    }
    out[p] = 4.0 * half_width * static_cast<double>(c.count);
  });
  return out;
}

double localtime_cdf_predicted(const CoefficientModel& model, double s, double T, double r,
                               const QuadratureSpec& quad) {
  if (!model.is_constant()) {
    throw UnsupportedModel("the local-time law formula rests on P_ell = P+_ell P-_ell, shown for constant coefficients only");
  }
  if (!(r >= 0.0)) throw DomainError("local time level must be >= 0");
  return 1.0 - apply_homogeneous_semigroup(model, 0.5 * r, TestFunction::indicator(T), s, quad);
}

}  // namespace whf
