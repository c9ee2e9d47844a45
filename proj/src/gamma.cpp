#include "whf/gamma.hpp"

#include <cmath>
#include <numbers>

#include "whf/errors.hpp"
#include "whf/normal.hpp"

namespace whf {

const char* method_name(GammaMethod m) {
  switch (m) {
    case GammaMethod::ClosedForm:
      return "closed_form";
    case GammaMethod::Recursive:
      return "recursive";
    case GammaMethod::Lattice:
      return "lattice";
  }
  return "?";
}

GammaKernel::GammaKernel(CoefficientModel model, QuadratureSpec quad, int max_breakpoints)
    : model_(std::move(model)),
      quad_(quad),
      max_breakpoints_(max_breakpoints),
      plus_(model_, Sign::Plus, quad, max_breakpoints),
      minus_(model_, Sign::Minus, quad, max_breakpoints) {}

GammaValue GammaKernel::evaluate(double s, double t, Sign sign) const {
  if (!(s >= 0.0)) throw DomainError("gamma needs s >= 0");
  if (!(s < t)) throw DomainError("gamma needs s < t");
  const PassageLaw& law = this->law(sign);
  const CoefficientModel& m = law.oriented_model();
  const std::size_t i = m.segment_index(s);
  const ConstCoeff c{m.v_values()[i], m.sigma_values()[i]};
  const double b = m.next_breakpoint(s);
  if (t <= b) return {gamma_const(c, t - s, Sign::Plus), GammaMethod::ClosedForm};

  const double T = b - s;
  const double wmax = std::max(0.0, -c.v * T) + quad_.gaussian_width() * c.sigma * std::sqrt(T);
  const int crossed = static_cast<int>(m.breakpoints_between(s, t).size());
  const double centre = -c.v * T;
  const double peak = c.sigma * std::sqrt(T);
  const double splits[] = {centre, peak, centre + peak};
  if (crossed <= max_breakpoints_) {
    auto integrand = [&](double w) {
      const double k = survival_level_derivative(c, T, w);
      return k == 0.0 ? 0.0 : k * law.tail(b, w, t);
    };
    return {integrate(integrand, 0.0, wmax, quad_, splits, "gamma across breakpoints"),
            GammaMethod::Recursive};
  }
  const LatticeSurvival surv(m, b, t);
  auto integrand = [&](double w) {
    const double k = survival_level_derivative(c, T, w);
    return k == 0.0 ? 0.0 : k * surv(w);
  };
  return {integrate(integrand, 0.0, wmax, quad_, splits, "gamma lattice fallback"), GammaMethod::Lattice};
}

double GammaKernel::gamma_total(double s, double t) const {
  return gamma_pm(s, t, Sign::Plus) + gamma_pm(s, t, Sign::Minus);
}

std::pair<double, double> gamma_envelope(const Envelope& env, double dt) {
  const double vi = env.v_inf;
  const double lo2 = env.sigma_lo * env.sigma_lo;
  const double hi2 = env.sigma_hi * env.sigma_hi;
  const double lower = std::numbers::sqrt2 / std::sqrt(std::numbers::pi * hi2 * dt) *
                           std::exp(-hi2 * vi * vi * dt / (2.0 * lo2 * lo2)) -
                       2.0 * vi / lo2 * normal_cdf(-env.sigma_hi * vi * std::sqrt(dt) / lo2);
  const double upper = std::numbers::sqrt2 / std::sqrt(std::numbers::pi * lo2 * dt) *
                           std::exp(-vi * vi * dt / (2.0 * lo2)) +
                       2.0 * vi / lo2 * normal_cdf(vi * std::sqrt(dt) / env.sigma_lo);
  return {lower, upper};
}

GammaBounds GammaKernel::bounds_check(double s, double t) const {
  if (!(s < t)) throw DomainError("bounds_check needs s < t");
  const auto [lower, upper] = gamma_envelope(model_.envelope(), t - s);
  const double gp = gamma_pm(s, t, Sign::Plus);
  const double gm = gamma_pm(s, t, Sign::Minus);
  auto within = [&](double g) {
    const double slack = quad_.abs_tol + quad_.rel_tol * std::abs(g);
    return g >= lower - slack && g <= upper + slack;
  };
  return {lower, upper, gp, gm, within(gp), within(gm)};
}

double marginal_density_at_zero(const CoefficientModel& model, double s, double t) {
  const double m = model.integrated_drift(s, t);
  const double var = model.integrated_variance(s, t);
  if (!(var > 0.0)) throw DomainError("marginal density needs s < t");
  return std::exp(-m * m / (2.0 * var)) / std::sqrt(2.0 * std::numbers::pi * var);
}

double GammaKernel::volterra_residual(double r, double q) const {
  if (!(q > 0.0) || !(q <= r)) throw DomainError("volterra_residual needs 0 < q <= r");
  const double s = r - q;
  // Integrand in z = r - t over (0, q): gamma(r - z, r) rho(s, r - z) sigma^2(r - z).
  auto integrand = [&](double z) {
    if (z <= 0.0 || z >= q) return 0.0;
    const double t = r - z;
    const double sig = model_.sigma_at(t);
    return gamma_total(t, r) * marginal_density_at_zero(model_, s, t) * sig * sig;
  };
  // Breakpoints split the interval; the end pieces carry the square-root singularities.
  std::vector<double> cuts;
  for (double b : model_.breakpoints_between(s, r)) cuts.push_back(r - b);
  std::sort(cuts.begin(), cuts.end());
  std::vector<Piece> pieces;
  const double m = 0.5 * q;
  std::vector<double> nodes{0.0};
  for (double c : cuts) nodes.push_back(c);
  nodes.push_back(q);
  for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
    const double a = nodes[j], b = nodes[j + 1];
    const bool first = j == 0, last = j + 2 == nodes.size();
    if (first && last) {
      pieces.push_back({a, m, Map::SqrtLeft});
      pieces.push_back({m, b, Map::SqrtRight});
    } else if (first) {
      pieces.push_back({a, b, Map::SqrtLeft});
    } else if (last) {
      pieces.push_back({a, b, Map::SqrtRight});
    } else {
      pieces.push_back({a, b});
    }
  }
  return integrate_pieces_or_throw(integrand, pieces, quad_, "volterra integral") - 2.0;
}

double gamma_pm(const GammaKernel& k, double s, double t, Sign sign) { return k.gamma_pm(s, t, sign); }
double gamma_total(const GammaKernel& k, double s, double t) { return k.gamma_total(s, t); }
GammaBounds bounds_check(const GammaKernel& k, double s, double t) { return k.bounds_check(s, t); }
double volterra_residual(const GammaKernel& k, double r, double q) { return k.volterra_residual(r, q); }

}  // namespace whf
