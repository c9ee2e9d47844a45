#include "whf/operators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "whf/errors.hpp"
#include "whf/passage_law.hpp"
#include "whf/resolvent.hpp"

namespace whf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

ConstCoeff only_segment(const CoefficientModel& model, const char* what) {
  if (!model.is_constant()) {
    throw UnsupportedModel(std::string(what) + " is only available for constant coefficients");
  }
  return {model.v_values()[0], model.sigma_values()[0]};
}

ConstCoeff last_segment(const CoefficientModel& model) {
  return {model.v_values().back(), model.sigma_values().back()};
}

double last_breakpoint(const CoefficientModel& model) {
  return model.breakpoints().empty() ? 0.0 : model.breakpoints().back();
}

// Exponential tail of P^sign_ell f once both f is exponential and the
// coefficients have stopped changing.
std::optional<ExponentialTail> propagated_tail(const CoefficientModel& model, double ell, const TestFunction& f,
                                               Sign sign) {
  if (!f.exp_tail) return std::nullopt;
  const auto& e = *f.exp_tail;
  const double lambda = laplace_exponent(last_segment(model), e.rate, sign);
  return ExponentialTail{std::max(e.from, last_breakpoint(model)), e.amplitude * std::exp(ell * lambda), e.rate};
}

}  // namespace

double apply_passage_semigroup(const PassageLaw& law, double ell, const TestFunction& f, double s) {
  if (!(ell >= 0.0)) throw DomainError("passage semigroup needs ell >= 0");
  return law.expect(s, ell, f);
}

double apply_passage_semigroup(const CoefficientModel& model, double ell, const TestFunction& f, double s,
                               Sign sign, const QuadratureSpec& quad) {
  return apply_passage_semigroup(PassageLaw(model, sign, quad), ell, f, s);
}

TestFunction passage_semigroup_function(const CoefficientModel& model, double ell, const TestFunction& f,
                                        Sign sign, const QuadratureSpec& quad) {
  auto law = std::make_shared<PassageLaw>(model, sign, quad);
  TestFunction out([law, ell, f](double s) { return law->expect(s, ell, f); });
  out.support_end = f.support_end;
  out.jumps = f.jumps;
  for (double b : model.breakpoints()) out.jumps.push_back(b);
  out.exp_tail = propagated_tail(model, ell, f, sign);
  out.sup_bound = f.sup_bound;
  out.K = f.K;
  out.kappa = f.kappa;
  return out;
}

double apply_generator_pm(const GammaKernel& k, const TestFunction& f, double s, Sign sign) {
  if (!f.has_derivative()) throw DomainError("generator application needs the derivative g_f");
  if (!(s >= 0.0)) throw DomainError("generator application needs s >= 0");
  const double horizon = f.support_end ? *f.support_end : kInf;
  if (s >= horizon) return 0.0;
  std::vector<double> cuts;
  for (double b : k.model().breakpoints()) cuts.push_back(b);
  cuts.insert(cuts.end(), f.jumps.begin(), f.jumps.end());
  if (f.exp_tail) cuts.push_back(f.exp_tail->from);
  cuts.push_back(s + 1.0);
  cuts = interior_splits(s, horizon, cuts);

  auto singular_at = [&](double x) {
    return std::find(f.sqrt_singular.begin(), f.sqrt_singular.end(), x) != f.sqrt_singular.end();
  };
  // gamma(s, t) ~ (t - s)^{-1/2} at the left end; gf may add (p - t)^{-1/2}
  // singularities at the right end of a piece.
  std::vector<Piece> pieces;
  auto add_piece = [&](double lo, double hi) {
    const bool left = lo == s;
    const bool right = singular_at(hi);
    if (left && right) {
      const double m = 0.5 * (lo + hi);
      pieces.push_back({lo, m, Map::SqrtLeft});
      pieces.push_back({m, hi, Map::SqrtRight});
    } else if (left) {
      pieces.push_back({lo, hi, Map::SqrtLeft});
    } else if (right) {
      pieces.push_back({lo, hi, Map::SqrtRight});
    } else {
      pieces.push_back({lo, hi});
    }
  };
  double lo = s;
  for (double c : cuts) {
    add_piece(lo, c);
    lo = c;
  }
  if (std::isfinite(horizon)) {
    add_piece(lo, horizon);
  } else {
    pieces.push_back({lo, lo, Map::ToInfinity, 1.0});
  }
  auto integrand = [&](double t) {
    if (t <= s) return 0.0;
    const double g = f.gf(t);
    return g == 0.0 ? 0.0 : g * k.gamma_pm(s, t, sign);
  };
  return integrate_pieces_or_throw(integrand, pieces, k.quad(), "generator application");
}

double apply_gamma(const GammaKernel& k, const TestFunction& f, double s) {
  return apply_generator_pm(k, f, s, Sign::Plus) + apply_generator_pm(k, f, s, Sign::Minus);
}

double apply_homogeneous_semigroup(const CoefficientModel& model, double ell, const TestFunction& f, double s,
                                   const QuadratureSpec& quad) {
  const ConstCoeff c = only_segment(model, "the homogeneous semigroup P_ell");
  if (!(ell >= 0.0)) throw DomainError("homogeneous semigroup needs ell >= 0");
  if (ell == 0.0) return f(s);
  const double horizon = f.support_end ? *f.support_end - s : kInf;
  if (horizon < 0.0) return 0.0;
  const double scale = 4.0 * ell * ell / (c.sigma * c.sigma);
  std::vector<double> splits;
  for (double m : {0.03, 0.1, 0.3, 1.0, 3.0, 10.0, 30.0, 100.0}) splits.push_back(m * scale);
  for (double j : f.jumps) splits.push_back(j - s);
  auto integrand = [&](double t) {
    if (t <= 0.0) return 0.0;
    const double q = composed_passage_density(c, ell, ell, t);
    return q == 0.0 ? 0.0 : q * f(s + t);
  };
  if (std::isfinite(horizon)) return integrate(integrand, 0.0, horizon, quad, splits, "homogeneous semigroup");
  return integrate_to_infinity(integrand, 0.0, quad, splits, 1.0, "homogeneous semigroup");
}

double apply_composed_semigroup(const CoefficientModel& model, double k, double ell, const TestFunction& f,
                                double s, const QuadratureSpec& quad) {
  const TestFunction inner = passage_semigroup_function(model, ell, f, Sign::Minus, quad);
  return apply_passage_semigroup(model, k, inner, s, Sign::Plus, quad);
}

TestFunction constant_resolvent(ConstCoeff c, const TestFunction& h, const QuadratureSpec& quad) {
  const double lp = [&] { return h.exp_tail ? laplace_exponent(c, h.exp_tail->rate, Sign::Plus) : 0.0; }();
  if (h.is_exponential()) {
    const auto& e = *h.exp_tail;
    const double lm = laplace_exponent(c, e.rate, Sign::Minus);
    return TestFunction::exponential(e.rate, e.amplitude / (-lp - lm));
  }
  // Resolvent kernel: the y-integral of the composed passage density.
  auto kernel = [c](double u) {
    return c.sigma / (2.0 * std::sqrt(2.0 * std::numbers::pi * u)) *
           std::exp(-c.v * c.v * u / (2.0 * c.sigma * c.sigma));
  };
  auto apply = [c, kernel, quad, h](const TestFunction::Fn& fn, double t) {
    std::vector<Piece> pieces;
    std::vector<double> cuts{1.0};
    for (double j : h.jumps) cuts.push_back(j - t);
    const double horizon = h.support_end ? *h.support_end - t : kInf;
    if (horizon <= 0.0) return 0.0;
    cuts = interior_splits(0.0, horizon, cuts);
    double lo = 0.0;
    for (double x : cuts) {
      pieces.push_back({lo, x, lo == 0.0 ? Map::SqrtLeft : Map::Linear});
      lo = x;
    }
    if (std::isfinite(horizon)) {
      pieces.push_back({lo, horizon, lo == 0.0 ? Map::SqrtLeft : Map::Linear});
    } else {
      pieces.push_back({lo, lo, Map::ToInfinity, 1.0});
    }
    auto integrand = [&](double u) { return u <= 0.0 ? 0.0 : kernel(u) * fn(t + u); };
    return integrate_pieces_or_throw(integrand, pieces, quad, "constant resolvent");
  };
  TestFunction::Fn f = [apply, h](double t) { return apply(h.eval, t); };
  TestFunction::Fn g;
  if (h.has_derivative()) g = [apply, h](double t) { return apply(h.gf, t); };
  TestFunction out(f, g, h.K, h.kappa);
  out.support_end = h.support_end;
  out.jumps = h.jumps;
  if (h.exp_tail) {
    const double lm = laplace_exponent(c, h.exp_tail->rate, Sign::Minus);
    out.exp_tail = ExponentialTail{h.exp_tail->from, h.exp_tail->amplitude / (-lp - lm), h.exp_tail->rate};
  }
  return out;
}

double resolvent_integral(const CoefficientModel& model, const TestFunction& h, double s,
                          const QuadratureSpec& quad) {
  if (model.is_constant()) {
    return constant_resolvent({model.v_values()[0], model.sigma_values()[0]}, h, quad)(s);
  }
  const GammaKernel k(model, quad);
  return Resolvent(k, h)(s);
}

double resolvent_by_composition(const CoefficientModel& model, const TestFunction& h, double s,
                                const QuadratureSpec& quad) {
  auto integrand = [&](double y) { return apply_composed_semigroup(model, y, y, h, s, quad); };
  const double splits[] = {0.05, 0.2, 0.5, 1.0, 2.0};
  return integrate_to_infinity(integrand, 0.0, quad, splits, 1.0, "composition resolvent");
}

ComposedDensity composed_density_check(ConstCoeff c, double k, double ell, double t, const QuadratureSpec& quad) {
  if (!(k > 0.0) || !(ell > 0.0) || !(t > 0.0)) throw DomainError("composed_density_check needs k, ell, t > 0");
  const double s2 = c.sigma * c.sigma;
  const double rk = std::min(0.5 * t, k * k / (3.0 * s2));
  const double rl = std::max(0.5 * t, t - ell * ell / (3.0 * s2));
  const double splits[] = {rk, 0.5 * t, rl};
  auto conv = [&](double r) {
    if (r <= 0.0 || r >= t) return 0.0;
    return passage_density_up(c, k, r) * passage_density_down(c, ell, t - r);
  };
  const double convolution = integrate(conv, 0.0, t, quad, splits, "passage density convolution");
  // The one-index expression as printed, with sigma unsquared in the exponent.
  auto printed = [&](double r) {
    if (r <= 0.0 || r >= t) return 0.0;
    const double expo = -2.0 * ell * ell * t / (2.0 * c.sigma * r * (t - r));
    if (expo < -745.0) return 0.0;
    return std::exp(expo) / std::sqrt(r * r * r * (t - r) * (t - r) * (t - r));
  };
  const double prefactor = ell * ell * std::exp(-c.v * c.v * t / 2.0) / (2.0 * std::numbers::pi * s2);
  const double printed_value = prefactor * integrate(printed, 0.0, t, quad, splits, "printed composite density");
  return {convolution, printed_value, composed_passage_density(c, k, ell, t)};
}

}  // namespace whf
