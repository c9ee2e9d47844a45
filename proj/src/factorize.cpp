#include "whf/factorize.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>

#include "whf/chebyshev.hpp"
#include "whf/errors.hpp"
#include "whf/normal.hpp"
#include "whf/operators.hpp"
#include "whf/parallel.hpp"
#include "whf/passage_law.hpp"
#include "whf/resolvent.hpp"
#include "whf/rng.hpp"

namespace whf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// E u(m + sd Z) for Z standard normal.
double gaussian_expect(const Payoff& u, double m, double sd, const QuadratureSpec& q) {
  if (u.constant) return u(0.0);
  if (!(sd > 0.0)) return u(m);
  const double w = q.gaussian_width();
  const double lo = std::max(-w, (u.lo - m) / sd);
  const double hi = std::min(w, (u.hi - m) / sd);
  if (!(hi > lo)) return 0.0;
  std::vector<double> splits{0.0};
  for (double k : u.kinks) splits.push_back((k - m) / sd);
  auto integrand = [&](double z) { return u(m + sd * z) * normal_pdf(z); };
  return integrate(integrand, lo, hi, q, splits, "Gaussian expectation");
}

std::vector<double> payoff_splits(const Payoff& u, double shift, double orient) {
  std::vector<double> out;
  for (double k : u.kinks) out.push_back(orient * (k - shift));
  return out;
}

ConstCoeff segment_at(const CoefficientModel& m, double t) {
  const std::size_t i = m.segment_index(t);
  return {m.v_values()[i], m.sigma_values()[i]};
}

}  // namespace

VerificationReport VerificationReport::compare(std::string identity, double lhs, double rhs, double tolerance,
                                               std::string method) {
  VerificationReport r;
  r.identity = std::move(identity);
  r.lhs = lhs;
  r.rhs = rhs;
  r.abs_error = std::abs(lhs - rhs);
  r.tolerance = tolerance;
  r.method = std::move(method);
  r.pass = r.abs_error <= r.tolerance;
  return r;
}

Payoff Payoff::gaussian_bump(double centre, double width) {
  Payoff u;
  u.fn = [centre, width](double x) {
    const double z = (x - centre) / width;
    return std::exp(-0.5 * z * z);
  };
  u.lo = centre - 9.0 * width;
  u.hi = centre + 9.0 * width;
  u.kinks = {centre};
  u.name = "gaussian_bump(" + format_double(centre) + "," + format_double(width) + ")";
  return u;
}

Payoff Payoff::triangle(double centre, double half_width) {
  Payoff u;
  u.fn = [centre, half_width](double x) { return std::max(0.0, 1.0 - std::abs(x - centre) / half_width); };
  u.lo = centre - half_width;
  u.hi = centre + half_width;
  u.kinks = {u.lo, centre, u.hi};
  u.name = "triangle(" + format_double(centre) + "," + format_double(half_width) + ")";
  return u;
}

Payoff Payoff::truncated_cos(double xi, int half_periods) {
  Payoff u;
  const double cut = (static_cast<double>(half_periods) + 0.5) * std::numbers::pi / xi;
  u.fn = [xi, cut](double x) { return std::abs(x) <= cut ? std::cos(xi * x) : 0.0; };
  u.lo = -cut;
  u.hi = cut;
  for (int k = -half_periods; k <= half_periods; ++k) u.kinks.push_back(k * std::numbers::pi / xi);
  u.kinks.push_back(-cut);
  u.kinks.push_back(cut);
  u.name = "truncated_cos(" + format_double(xi) + "," + std::to_string(half_periods) + ")";
  return u;
}

Payoff Payoff::cosine(double xi) {
  Payoff u;
  u.fn = [xi](double x) { return std::cos(xi * x); };
  u.name = "cos(" + format_double(xi) + ")";
  return u;
}

Payoff Payoff::one() {
  Payoff u;
  u.fn = [](double) { return 1.0; };
  u.name = "one";
  u.constant = true;
  return u;
}

Payoff Payoff::identity() {
  Payoff u;
  u.fn = [](double x) { return x; };
  u.name = "identity";
  return u;
}

TestFunction resolvent_function(const CoefficientModel& model, const TestFunction& h, const QuadratureSpec& quad) {
  if (model.is_constant()) return constant_resolvent(segment_at(model, 0.0), h, quad);
  const GammaKernel k(model, quad);
  return Resolvent(k, h).function();
}

double wh_lhs(const CoefficientModel& model, const Payoff& u, const TestFunction& h, double s, double a,
              const QuadratureSpec& quad) {
  auto integrand = [&](double t) {
    if (t <= s) return h(s) * model.sigma_at(s) * model.sigma_at(s) * u(a);
    const double m = a + model.integrated_drift(s, t);
    const double sd = std::sqrt(model.integrated_variance(s, t));
    const double sig = model.sigma_at(t);
    const double ht = h(t);
    return ht == 0.0 ? 0.0 : ht * sig * sig * gaussian_expect(u, m, sd, quad);
  };
  std::vector<double> splits = model.breakpoints();
  splits.insert(splits.end(), h.jumps.begin(), h.jumps.end());
  for (double d : {0.1, 1.0, 3.0}) splits.push_back(s + d);
  if (h.support_end) return integrate(integrand, s, *h.support_end, quad, splits, "factorization left side");
  return integrate_to_infinity(integrand, s, quad, splits, 1.0, "factorization left side");
}

double wh_rhs(const CoefficientModel& model, const Payoff& u, const TestFunction& resolvent, double s, double a,
              const QuadratureSpec& quad, bool) {
  double total = 0.0;
  for (Sign sign : {Sign::Plus, Sign::Minus}) {
    const double o = sign_value(sign);
    // u(a + o l) is nonzero for l in [lo, hi].
    const double lo = std::max(0.0, o > 0 ? u.lo - a : a - u.hi);
    const double hi = o > 0 ? u.hi - a : a - u.lo;
    if (!(hi > lo)) continue;
    const PassageLaw law(model, sign, quad);
    auto integrand = [&](double ell) {
      const double w = u(a + o * ell);
      return w == 0.0 ? 0.0 : w * law.expect(s, ell, resolvent);
    };
    std::vector<double> splits = payoff_splits(u, a, o);
    for (double d : {0.1, 0.5, 1.0, 2.0}) splits.push_back(lo + d);
    const double part = std::isfinite(hi) ? integrate(integrand, lo, hi, quad, splits, "factorization right side")
                                          : integrate_to_infinity(integrand, lo, quad, splits, 1.0,
                                                                  "factorization right side");
    total += 2.0 * part;
  }
  return total;
}

double wh_rhs(const CoefficientModel& model, const Payoff& u, const TestFunction& h, double s, double a,
              const QuadratureSpec& quad) {
  return wh_rhs(model, u, resolvent_function(model, h, quad), s, a, quad, true);
}

VerificationReport wh_stopped(const CoefficientModel& model, const Payoff& u, const TestFunction& h, double s,
                              double a, double T, const SimConfig& cfg, const QuadratureSpec& quad) {
  if (!(T >= s)) throw DomainError("stopping time must be >= s");
  cfg.validate();
  const std::string name = "stopped_factorization(T=" + format_double(T) + ",s=" + format_double(s) +
                           ",a=" + format_double(a) + ")";
  const TestFunction R = resolvent_function(model, h, quad);
  const double at_start = wh_rhs(model, u, R, s, a, quad, true);
  if (T == s) {
    // phi_T = a exactly, so the stopped terms are the starting terms.
    const double rhs = at_start - wh_rhs(model, u, R, T, a, quad, true);
    return VerificationReport::compare(name, 0.0, rhs, quad.abs_tol, "exact cancellation at T=s");
  }
  auto lhs_integrand = [&](double t) {
    if (t <= s) return h(s) * model.sigma_at(s) * model.sigma_at(s) * u(a);
    const double m = a + model.integrated_drift(s, t);
    const double sd = std::sqrt(model.integrated_variance(s, t));
    const double sig = model.sigma_at(t);
    return h(t) * sig * sig * gaussian_expect(u, m, sd, quad);
  };
  const double lhs = integrate(lhs_integrand, s, T, quad, model.breakpoints(), "stopped left side");

  // Expectation terms at T: tabulate x -> G(x, T) on the bulk of phi_T.
  const double mean = a + model.integrated_drift(s, T);
  const double sd = std::sqrt(model.integrated_variance(s, T));
  const double lo = mean - 8.0 * sd, hi = mean + 8.0 * sd;
  auto G = [&](double x) { return wh_rhs(model, u, R, T, x, quad, true); };
  const std::vector<double> xs = Chebyshev::nodes(lo, hi, 128);
  std::vector<double> gs(xs.size());
  parallel_for(xs.size(), cfg.threads, [&](std::size_t i) { gs[i] = G(xs[i]); });
  const Chebyshev table = Chebyshev::from_values(gs, lo, hi);
  // Interpolation error measured against direct evaluations in the bulk.
  constexpr int kProbes = 17;
  std::vector<double> probe_err(kProbes);
  parallel_for(kProbes, cfg.threads, [&](std::size_t i) {
    const double x = mean + sd * (-4.0 + 8.0 * (static_cast<double>(i) + 0.37) / kProbes);
    probe_err[i] = std::abs(table(x) - G(x));
  });
  const double interp_err = *std::max_element(probe_err.begin(), probe_err.end());

  std::vector<double> samples(cfg.n_paths);
  parallel_for(cfg.n_paths, cfg.threads, [&](std::size_t p) {
    PathRng rng(cfg.seed, p, 0);
    const double x = mean + sd * rng.normal();
    samples[p] = (x >= lo && x <= hi) ? table(x) : G(x);
  });
  const Estimate stopped = mean_estimate(samples);
  const double rhs = at_start - stopped.value;
  const double tol = 3.0 * stopped.std_error + interp_err + quad.abs_tol;
  return VerificationReport::compare(name, lhs, rhs, tol,
                                     "quadrature lhs; MC n=" + std::to_string(cfg.n_paths) +
                                         " se=" + format_double(stopped.std_error) +
                                         " interp=" + format_double(interp_err));
}

double characteristic_value(ConstCoeff c, double rate, double xi) {
  const double re = rate + 0.5 * c.sigma * c.sigma * xi * xi;
  const double im = c.v * xi;
  return rate * re / (re * re + im * im);
}

double classical_direct(ConstCoeff c, double rate, const Payoff& u, double a, const QuadratureSpec& quad) {
  auto integrand = [&](double t) {
    if (t <= 0.0) return rate * u(a);
    return rate * std::exp(-rate * t) * gaussian_expect(u, a + c.v * t, c.sigma * std::sqrt(t), quad);
  };
  const double splits[] = {0.1 / rate, 1.0 / rate, 5.0 / rate};
  return integrate_to_infinity(integrand, 0.0, quad, splits, 1.0 / rate, "discounted resolvent");
}

double classical_factorized(ConstCoeff c, double rate, const Payoff& u, double a, bool outer_x,
                            const QuadratureSpec& quad) {
  const double lp = laplace_exponent(c, rate, Sign::Plus);
  const double lm = laplace_exponent(c, rate, Sign::Minus);
  const double pre = 2.0 * rate / (c.sigma * c.sigma);
  // Outer variable p with rate lo, inner q with rate li; the payoff argument
  // is a + o (p - q) with o = +1 for outer x and -1 for outer y.
  const double lo_rate = outer_x ? lp : lm;
  const double in_rate = outer_x ? lm : lp;
  const double o = outer_x ? 1.0 : -1.0;
  auto inner = [&](double p) {
    // Need a + o (p - q) inside [u.lo, u.hi].
    double qlo = 0.0, qhi = kInf;
    if (o > 0) {
      qlo = std::max(0.0, a + p - u.hi);
      qhi = a + p - u.lo;
    } else {
      qlo = std::max(0.0, u.lo - a + p);
      qhi = u.hi - a + p;
    }
    if (!(qhi > qlo)) return 0.0;
    auto f = [&](double q) { return std::exp(q * in_rate) * u(a + o * (p - q)); };
    std::vector<double> splits;
    for (double k : u.kinks) splits.push_back(p - o * (k - a));
    splits.push_back(qlo + 1.0 / std::abs(in_rate));
    if (std::isfinite(qhi)) return integrate(f, qlo, qhi, quad, splits, "factorized inner");
    return integrate_to_infinity(f, qlo, quad, splits, 1.0 / std::abs(in_rate), "factorized inner");
  };
  double plo = 0.0;
  if (o > 0 && std::isfinite(u.lo)) plo = std::max(0.0, u.lo - a);
  if (o < 0 && std::isfinite(u.hi)) plo = std::max(0.0, a - u.hi);
  auto outer = [&](double p) { return std::exp(p * lo_rate) * inner(p); };
  std::vector<double> splits;
  for (double k : u.kinks) splits.push_back(o * (k - a));
  splits.push_back(plo + 1.0 / std::abs(lo_rate));
  return pre * integrate_to_infinity(outer, plo, quad, splits, 1.0 / std::abs(lo_rate), "factorized outer");
}

std::vector<ClassicalResult> classical_wh(ConstCoeff c, double rate, const std::vector<Payoff>& payoffs, double a,
                                          const SimConfig& cfg, const QuadratureSpec& quad) {
  SimConfig sc = cfg;
  sc.n_paths = 2 * cfg.n_paths;
  sc.kill_rate = rate;
  // Even paths supply the maximum, odd paths the independent minimum.
  const KilledSamples k = simulate_killed(CoefficientModel::constant(c.v, c.sigma), 0.0, sc);

  std::vector<ClassicalResult> out;
  for (const Payoff& u : payoffs) {
    ClassicalResult r;
    r.direct = classical_direct(c, rate, u, a, quad);
    r.factorized = classical_factorized(c, rate, u, a, true, quad);
    r.factorized_swap = classical_factorized(c, rate, u, a, false, quad);
    std::vector<double> y(cfg.n_paths);
    for (std::size_t p = 0; p < cfg.n_paths; ++p) y[p] = u(a + k.max[2 * p] + k.min[2 * p + 1]);
    r.monte_carlo = mean_estimate(y);

    const std::string tag = u.name + ",a=" + format_double(a);
    r.reports.push_back(VerificationReport::compare("classical_direct_vs_factorized(" + tag + ")", r.direct,
                                                    r.factorized, 1e-3 * std::abs(r.direct),
                                                    "quadrature, relative 1e-3"));
    r.reports.push_back(VerificationReport::compare("classical_order_swap(" + tag + ")", r.factorized,
                                                    r.factorized_swap,
                                                    1e-6 * std::max(1.0, std::abs(r.factorized)),
                                                    "iterated quadrature orders"));
    r.reports.push_back(VerificationReport::compare(
        "classical_mc_extrema(" + tag + ")", r.monte_carlo.value, r.factorized, 3.0 * r.monte_carlo.std_error,
        "MC n=" + std::to_string(cfg.n_paths) + " dt=" + format_double(cfg.dt) +
            " se=" + format_double(r.monte_carlo.std_error)));
    out.push_back(std::move(r));
  }
  return out;
}

ClassicalResult classical_wh(ConstCoeff c, double rate, const Payoff& u, double a, const SimConfig& cfg,
                             const QuadratureSpec& quad) {
  return classical_wh(c, rate, std::vector<Payoff>{u}, a, cfg, quad).front();
}

TestFunction fit_generator_image(const GammaKernel& k, const TestFunction& h, Sign sign, int nodes) {
  const CoefficientModel& model = k.model();
  if (!h.exp_tail) throw DomainError("generator image fit needs an exponential tail");
  const auto& bps = model.breakpoints();
  const double last = bps.empty() ? 0.0 : bps.back();
  if (h.exp_tail->from > last) throw DomainError("exponential tail must start by the last breakpoint");
  const ConstCoeff terminal{model.v_values().back(), model.sigma_values().back()};
  const double lambda = laplace_exponent(terminal, h.exp_tail->rate, sign);

  auto fits = std::make_shared<std::vector<Chebyshev>>();
  auto dfits = std::make_shared<std::vector<Chebyshev>>();
  for (std::size_t i = 0; i < bps.size(); ++i) {
    const double lo = i == 0 ? 0.0 : bps[i - 1];
    const double b = bps[i];
    const double xmax = std::sqrt(b - lo);
    std::vector<double> xs = Chebyshev::nodes(0.0, xmax, nodes);
    std::vector<double> vals(xs.size());
    parallel_for(xs.size(), 0, [&](std::size_t j) { vals[j] = apply_generator_pm(k, h, b - xs[j] * xs[j], sign); });
    fits->push_back(Chebyshev::from_values(vals, 0.0, xmax));
    dfits->push_back(fits->back().derivative());
  }
  auto bp = std::make_shared<const std::vector<double>>(bps);
  auto locate = [bp](double t) {
    return static_cast<std::size_t>(std::upper_bound(bp->begin(), bp->end(), t) - bp->begin());
  };
  TestFunction::Fn f = [=](double t) {
    const std::size_t i = locate(t);
    if (i == bp->size()) return lambda * h(t);
    return (*fits)[i](std::sqrt((*bp)[i] - t));
  };
  TestFunction::Fn g = [=](double t) {
    const std::size_t i = locate(t);
    if (i == bp->size()) return lambda * h.gf(t);
    const double x = std::sqrt((*bp)[i] - t);
    return -(*dfits)[i](x) / (2.0 * x);
  };
  TestFunction out(f, g, std::abs(lambda) * h.K, h.kappa);
  out.jumps = bps;
  out.sqrt_singular = bps;
  ExponentialTail e = *h.exp_tail;
  e.from = last;
  e.amplitude *= lambda;
  out.exp_tail = e;
  return out;
}

NoisyResidual noisy_wh_residual(const CoefficientModel& model, double rate, double s, Sign sign,
                                const QuadratureSpec& quad) {
  if (!(rate > 0.0)) throw DomainError("noisy residual needs rate > 0");
  if (!(s >= 0.0)) throw DomainError("noisy residual needs s >= 0");
  const ConstCoeff c = segment_at(model, s);
  const double o = sign_value(sign);
  const double hs = std::exp(-rate * s);
  const double dh = -rate * hs;
  const double last = model.breakpoints().empty() ? 0.0 : model.breakpoints().back();
  if (s >= last) {
    const double lambda = laplace_exponent(c, rate, sign);
    const double g1 = lambda * hs;
    const double g2 = lambda * lambda * hs;
    return {hs * (-rate - o * c.v * lambda + 0.5 * c.sigma * c.sigma * lambda * lambda), true, g1, g2};
  }
  const GammaKernel k(model, quad);
  const TestFunction h = TestFunction::exponential(rate);
  const double g1 = apply_generator_pm(k, h, s, sign);
  const TestFunction F = fit_generator_image(k, h, sign);
  const double g2 = apply_generator_pm(k, F, s, sign);
  return {dh - o * c.v * g1 + 0.5 * c.sigma * c.sigma * g2, false, g1, g2};
}

VerificationReport increment_law_gap(const CoefficientModel& model, const SimConfig& cfg, double kill_rate,
                                     bool expect_same_law) {
  SimConfig sc = cfg;
  sc.kill_rate = kill_rate;
  const KilledSamples k = simulate_killed(model, 0.0, sc);
  std::vector<double> drawdown, minimum;
  for (std::size_t p = 0; p < k.end.size(); ++p) {
    if (p % 2 == 0) {
      drawdown.push_back(k.end[p] - k.max[p]);
    } else {
      minimum.push_back(k.min[p]);
    }
  }
  const KsResult ks = ks_two_sample(drawdown, minimum);
  const double na = static_cast<double>(drawdown.size()), nb = static_cast<double>(minimum.size());
  const double crit = 1.628 * std::sqrt((na + nb) / (na * nb));  // alpha = 0.01
  const double mean_a = mean_estimate(drawdown).value, mean_b = mean_estimate(minimum).value;
  VerificationReport r;
  r.lhs = mean_a;
  r.rhs = mean_b;
  r.method = "two-sample KS D=" + format_double(ks.statistic) + " p=" + format_double(ks.p_value) +
             " critical(0.01)=" + format_double(crit);
  if (expect_same_law) {
    r.identity = "increment_law_same";
    r.abs_error = ks.statistic;
    r.tolerance = crit;
  } else {
    // The laws should differ: the check passes when D exceeds the critical value.
    r.identity = "increment_law_differs";
    r.abs_error = crit;
    r.tolerance = ks.statistic;
  }
  r.pass = r.abs_error <= r.tolerance;
  return r;
}

}  // namespace whf
