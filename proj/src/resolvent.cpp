#include "whf/resolvent.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

#include "whf/errors.hpp"
#include "whf/operators.hpp"

namespace whf {

namespace {

std::vector<double> make_edges(const CoefficientModel& model, const ResolventOptions& opts, int refine) {
  std::vector<double> edges{0.0};
  double lo = 0.0;
  for (double b : model.breakpoints()) {
    const int n = refine * std::max(opts.min_cells_per_segment,
                                    static_cast<int>(std::ceil((b - lo) / opts.cell_width)));
    for (int k = 1; k <= n; ++k) edges.push_back(k == n ? b : lo + (b - lo) * k / n);
    lo = b;
  }
  return edges;
}

}  // namespace

Resolvent::Solution Resolvent::solve(const GammaKernel& k, const TestFunction& h, const TestFunction& terminal,
                                     const std::vector<double>& edges) const {
  const std::size_t n = edges.size() - 1;
  const double end = edges.back();
  const QuadratureSpec& q = k.quad();
  std::vector<double> mid(n), rhs(n);
  for (std::size_t i = 0; i < n; ++i) mid[i] = 0.5 * (edges[i] + edges[i + 1]);

  // Right-hand side: -h(m) minus the known contribution from [end, inf).
  for (std::size_t i = 0; i < n; ++i) {
    const double m = mid[i];
    auto integrand = [&](double r) {
      const double g = terminal.gf(r);
      return g == 0.0 ? 0.0 : g * k.gamma_total(m, r);
    };
    const double splits[] = {end + 0.1, end + 0.5, end + 1.0, end + 2.0};
    rhs[i] = -h(m) - integrate_to_infinity(integrand, end, q, splits, 1.0, "resolvent boundary term");
  }

  auto cell_weight = [&](std::size_t i, std::size_t j) {
    const double m = mid[i];
    auto kern = [&](double r) { return r <= m ? 0.0 : k.gamma_total(m, r); };
    if (j == i) {
      const Piece p{m, edges[i + 1], Map::SqrtLeft};
      return integrate_pieces_or_throw(kern, std::span<const Piece>(&p, 1), q, "resolvent weight");
    }
    return integrate(kern, edges[j], edges[j + 1], q, {}, "resolvent weight");
  };

  std::vector<double> g(n, 0.0);
  for (std::size_t i = n; i-- > 0;) {
    double acc = rhs[i];
    for (std::size_t j = i + 1; j < n; ++j) acc -= g[j] * cell_weight(i, j);
    g[i] = acc / cell_weight(i, i);
  }
  Solution sol;
  sol.F.assign(n + 1, 0.0);
  sol.F[n] = terminal(end);
  for (std::size_t j = n; j-- > 0;) sol.F[j] = sol.F[j + 1] - g[j] * (edges[j + 1] - edges[j]);
  return sol;
}

Resolvent::Resolvent(const GammaKernel& k, const TestFunction& h, ResolventOptions opts) {
  if (!h.has_derivative()) throw DomainError("resolvent by generator inversion needs g_h");
  const CoefficientModel& model = k.model();
  const ConstCoeff last{model.v_values().back(), model.sigma_values().back()};
  const TestFunction terminal = constant_resolvent(last, h, k.quad());
  if (model.is_constant()) {
    fn_ = terminal;
    return;
  }
  edges_ = make_edges(model, opts, 1);
  Solution coarse = solve(k, h, terminal, edges_);
  values_ = coarse.F;
  if (opts.richardson) {
    const std::vector<double> fine_edges = make_edges(model, opts, 2);
    const Solution fine = solve(k, h, terminal, fine_edges);
    for (std::size_t j = 0; j < edges_.size(); ++j) {
      const double ff = fine.F[2 * j];
      richardson_change_ = std::max(richardson_change_, std::abs(ff - coarse.F[j]));
      values_[j] = 2.0 * ff - coarse.F[j];
    }
  }

  auto edges = std::make_shared<const std::vector<double>>(edges_);
  auto values = std::make_shared<const std::vector<double>>(values_);
  const double end = edges_.back();
  auto locate = [edges](double t) {
    auto it = std::upper_bound(edges->begin(), edges->end(), t);
    return static_cast<std::size_t>(std::max<std::ptrdiff_t>(0, it - edges->begin() - 1));
  };
  TestFunction::Fn f = [=](double t) {
    if (t >= end) return terminal(t);
    const std::size_t j = locate(t);
    const double w = ((*edges)[j + 1] - t) / ((*edges)[j + 1] - (*edges)[j]);
    return (*values)[j] * w + (*values)[j + 1] * (1.0 - w);
  };
  TestFunction::Fn g = [=](double t) {
    if (t >= end) return terminal.gf(t);
    const std::size_t j = locate(t);
    return ((*values)[j + 1] - (*values)[j]) / ((*edges)[j + 1] - (*edges)[j]);
  };
  fn_ = TestFunction(f, g, h.K, h.kappa);
  fn_.jumps = edges_;
  fn_.support_end = h.support_end;
  if (terminal.exp_tail) {
    ExponentialTail e = *terminal.exp_tail;
    e.from = std::max(e.from, end);
    fn_.exp_tail = e;
  }
}

}  // namespace whf
