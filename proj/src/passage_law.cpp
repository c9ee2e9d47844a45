#include "whf/passage_law.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "whf/errors.hpp"

namespace whf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Split points that resolve the passage-time law of a level at distance ell:
// its mass sits around ell^2 / sigma^2 and, with positive drift, ell / v.
std::vector<double> passage_time_splits(ConstCoeff c, double ell) {
  const double scale = ell * ell / (c.sigma * c.sigma);
  std::vector<double> out;
  for (double m : {0.03, 0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0}) out.push_back(m * scale);
  if (c.v > 0.0) out.push_back(ell / c.v);
  return out;
}

}  // namespace

PassageLaw::PassageLaw(const CoefficientModel& model, Sign sign, QuadratureSpec quad, int max_breakpoints)
    : model_(sign == Sign::Plus ? model : model.mirrored()),
      quad_(quad),
      max_breakpoints_(max_breakpoints) {
  quad_.validate();
}

ConstCoeff PassageLaw::segment(double s) const {
  const std::size_t i = model_.segment_index(s);
  return {model_.v_values()[i], model_.sigma_values()[i]};
}

void PassageLaw::check_cap(double s, double t) const {
  const auto n = static_cast<int>(model_.breakpoints_between(s, t).size());
  if (n > max_breakpoints_) {
    throw UnsupportedModel("passage law recursion is capped at " + std::to_string(max_breakpoints_) +
                           " crossed breakpoints, the request crosses " + std::to_string(n));
  }
}

double PassageLaw::survival_extent(ConstCoeff c, double ell, double T) const {
  return ell - c.v * T + quad_.gaussian_width() * c.sigma * std::sqrt(T);
}

double PassageLaw::tail(double s, double ell, double t) const {
  if (!(s >= 0.0)) throw DomainError("passage time start must be nonnegative");
  if (ell <= 0.0) return t < s ? 1.0 : 0.0;
  if (t <= s) return 1.0;
  const ConstCoeff c = segment(s);
  const double b = model_.next_breakpoint(s);
  if (t <= b) return tail_prob_up(c, ell, t - s);
  check_cap(s, t);
  const double T = b - s;
  const double wmax = survival_extent(c, ell, T);
  if (wmax <= 0.0) return 0.0;
  auto integrand = [&](double w) {
    if (w <= 0.0) return 0.0;
    return joint_survival_density(c, ell, T, ell - w) * tail(b, w, t);
  };
  const double centre = ell - c.v * T;
  const double splits[] = {centre, ell};
  return integrate(integrand, 0.0, wmax, quad_, splits, "multi-segment survival");
}

double PassageLaw::density(double s, double ell, double t) const {
  if (!(s >= 0.0)) throw DomainError("passage time start must be nonnegative");
  if (!(ell > 0.0) || !(t > s)) throw DomainError("passage density needs ell > 0 and t > s");
  const ConstCoeff c = segment(s);
  const double b = model_.next_breakpoint(s);
  if (t <= b) return passage_density_up(c, ell, t - s);
  check_cap(s, t);
  const double T = b - s;
  const double wmax = survival_extent(c, ell, T);
  if (wmax <= 0.0) return 0.0;
  auto integrand = [&](double w) {
    if (w <= 0.0) return 0.0;
    return joint_survival_density(c, ell, T, ell - w) * density(b, w, t);
  };
  const double centre = ell - c.v * T;
  const double splits[] = {centre, ell};
  return integrate(integrand, 0.0, wmax, quad_, splits, "multi-segment passage density");
}

double PassageLaw::expect_terminal(ConstCoeff c, double s, double ell, const TestFunction& f,
                                   double horizon) const {
  if (f.exp_tail && f.exp_tail->from <= s) {
    const auto& e = *f.exp_tail;
    if (e.amplitude == 0.0) return 0.0;
    return e.amplitude * std::exp(-e.rate * s + ell * laplace_exponent(c, e.rate, Sign::Plus));
  }
  if (f.has_derivative()) {
    std::vector<double> splits;
    for (double r : passage_time_splits(c, ell)) splits.push_back(s + r);
    splits.insert(splits.end(), f.jumps.begin(), f.jumps.end());
    if (f.exp_tail) splits.push_back(f.exp_tail->from);
    auto integrand = [&](double t) {
      if (t <= s) return 0.0;
      return f.gf(t) * tail_prob_up(c, ell, t - s);
    };
    const double body = std::isfinite(horizon)
                            ? integrate(integrand, s, horizon, quad_, splits, "passage expectation")
                            : integrate_to_infinity(integrand, s, quad_, splits, 1.0, "passage expectation");
    return f(s) + body;
  }
  std::vector<double> splits = passage_time_splits(c, ell);
  for (double j : f.jumps) splits.push_back(j - s);
  auto integrand = [&](double r) {
    if (r <= 0.0) return 0.0;
    const double p = passage_density_up(c, ell, r);
    return p == 0.0 ? 0.0 : p * f(s + r);
  };
  if (std::isfinite(horizon)) {
    return integrate(integrand, 0.0, horizon - s, quad_, splits, "passage expectation");
  }
  return integrate_to_infinity(integrand, 0.0, quad_, splits, 1.0, "passage expectation");
}

double PassageLaw::expect_crossing(ConstCoeff c, double s, double ell, const TestFunction& f,
                                   double b) const {
  const double T = b - s;
  if (f.has_derivative()) {
    // Integration by parts of E f(tau) 1{tau <= b} against the tail.
    std::vector<double> splits;
    for (double r : passage_time_splits(c, ell)) splits.push_back(s + r);
    splits.insert(splits.end(), f.jumps.begin(), f.jumps.end());
    auto integrand = [&](double t) {
      if (t <= s) return 0.0;
      return f.gf(t) * tail_prob_up(c, ell, t - s);
    };
    const double body = integrate(integrand, s, b, quad_, splits, "crossing mass");
    return f(s) - tail_prob_up(c, ell, T) * f(b) + body;
  }
  std::vector<double> splits = passage_time_splits(c, ell);
  for (double j : f.jumps) splits.push_back(j - s);
  auto integrand = [&](double r) {
    if (r <= 0.0) return 0.0;
    const double p = passage_density_up(c, ell, r);
    return p == 0.0 ? 0.0 : p * f(s + r);
  };
  return integrate(integrand, 0.0, T, quad_, splits, "crossing mass");
}

double PassageLaw::expect(double s, double ell, const TestFunction& f) const {
  if (!(s >= 0.0)) throw DomainError("passage time start must be nonnegative");
  if (ell <= 0.0) return f(s);
  const double horizon = f.support_end ? *f.support_end : kInf;
  if (s > horizon) return 0.0;
  const ConstCoeff c = segment(s);
  const double b = model_.next_breakpoint(s);
  if (b >= horizon) return expect_terminal(c, s, ell, f, horizon);
  check_cap(s, horizon);
  const double T = b - s;
  const double crossing = expect_crossing(c, s, ell, f, b);
  const double wmax = survival_extent(c, ell, T);
  if (wmax <= 0.0) return crossing;
  auto integrand = [&](double w) {
    if (w <= 0.0) return 0.0;
    const double d = joint_survival_density(c, ell, T, ell - w);
    return d == 0.0 ? 0.0 : d * expect(b, w, f);
  };
  const double centre = ell - c.v * T;
  const double splits[] = {centre, ell};
  return crossing + integrate(integrand, 0.0, wmax, quad_, splits, "surviving mass");
}

LatticeSurvival::LatticeSurvival(const CoefficientModel& model, double b, double t, int nx, int nt) {
  if (!(t > b) || nx < 10 || nt < 10) throw DomainError("lattice survival needs t > b and a real grid");
  const Envelope env = model.envelope();
  const double len = t - b;
  extent_ = env.v_inf * len + 10.0 * env.sigma_hi * std::sqrt(len);
  dx_ = extent_ / nx;
  u_.assign(static_cast<std::size_t>(nx) + 1, 1.0);
  u_[0] = 0.0;

  // Time nodes from t back to b, aligned with the breakpoints in between.
  std::vector<double> nodes{t};
  std::vector<double> cuts = model.breakpoints_between(b, t);
  std::reverse(cuts.begin(), cuts.end());
  cuts.push_back(b);
  double hi = t;
  for (double lo : cuts) {
    const int n = std::max(4, static_cast<int>(std::ceil(nt * (hi - lo) / len)));
    for (int k = 1; k <= n; ++k) nodes.push_back(hi - (hi - lo) * k / n);
    hi = lo;
  }

  const std::size_t m = static_cast<std::size_t>(nx) - 1;
  std::vector<double> lower(m), diag(m), upper(m), rhs(m), cprime(m);
  for (std::size_t step = 0; step + 1 < nodes.size(); ++step) {
    const double tau_hi = nodes[step];
    const double tau_lo = nodes[step + 1];
    const double dtau = tau_hi - tau_lo;
    const std::size_t seg = model.segment_index(0.5 * (tau_lo + tau_hi));
    const double v = model.v_values()[seg];
    const double s2 = model.sigma_values()[seg] * model.sigma_values()[seg];
    // Operator in the distance w = level - phi: -v u_w + sigma^2/2 u_ww.
    const double a = 0.5 * s2 / (dx_ * dx_) + v / (2.0 * dx_);
    const double c = 0.5 * s2 / (dx_ * dx_) - v / (2.0 * dx_);
    const double d = -s2 / (dx_ * dx_);
    // Implicit Euler for the first steps damps the corner discontinuity.
    const double theta = step < 4 ? 1.0 : 0.5;
    for (std::size_t i = 0; i < m; ++i) {
      const std::size_t j = i + 1;
      const double lu = a * u_[j - 1] + d * u_[j] + c * u_[j + 1];
      rhs[i] = u_[j] + (1.0 - theta) * dtau * lu;
      lower[i] = -theta * dtau * a;
      diag[i] = 1.0 - theta * dtau * d;
      upper[i] = -theta * dtau * c;
    }
    // Boundary values u(0) = 0 and u(extent) = 1 move to the right side.
    rhs[m - 1] -= upper[m - 1] * 1.0;
    // Thomas algorithm.
    cprime[0] = upper[0] / diag[0];
    rhs[0] = rhs[0] / diag[0];
    for (std::size_t i = 1; i < m; ++i) {
      const double denom = diag[i] - lower[i] * cprime[i - 1];
      cprime[i] = upper[i] / denom;
      rhs[i] = (rhs[i] - lower[i] * rhs[i - 1]) / denom;
    }
    for (std::size_t i = m; i-- > 0;) {
      if (i + 1 < m) rhs[i] -= cprime[i] * rhs[i + 1];
      u_[i + 1] = rhs[i];
    }
  }
}

double LatticeSurvival::operator()(double w) const {
  if (w <= 0.0) return 0.0;
  if (w >= extent_) return 1.0;
  const double x = w / dx_;
  const auto i = static_cast<std::size_t>(x);
  const double frac = x - static_cast<double>(i);
  return u_[i] * (1.0 - frac) + u_[i + 1] * frac;
}

}  // namespace whf
