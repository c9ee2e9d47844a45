#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "whf/errors.hpp"

namespace whf {

struct QuadratureSpec {
  double abs_tol = 1e-8;
  double rel_tol = 1e-6;
  // Maximum bisection depth of any single subinterval.
  int max_depth = 50;
  int max_intervals = 4000;
  // Gaussian tails are cut where the factor drops below tail_cutoff * peak.
  double tail_cutoff = 1e-16;

  void validate() const {
    if (!(abs_tol > 0.0) || !(rel_tol > 0.0) || max_depth < 1 || max_intervals < 1 ||
        !(tail_cutoff > 0.0 && tail_cutoff < 1.0)) {
      throw ConfigError("invalid quadrature spec");
    }
  }

  // Spec with both tolerances multiplied by factor, for nested integrals.
  QuadratureSpec scaled(double factor) const {
    QuadratureSpec q = *this;
    q.abs_tol *= factor;
    q.rel_tol *= factor;
    return q;
  }

  // Number of standard deviations kept on each side of a Gaussian factor.
  double gaussian_width() const { return std::sqrt(-2.0 * std::log(tail_cutoff)); }
};

struct QuadResult {
  double value = 0.0;
  double error = 0.0;
  int evaluations = 0;
  bool converged = true;
};

enum class Map {
  Linear,      // x = t on [a, b]
  SqrtLeft,    // x = a + u^2, removes (x - a)^{-1/2}
  SqrtRight,   // x = b - u^2, removes (b - x)^{-1/2}
  ToInfinity,  // x = a + scale * t / (1 - t) on [a, inf)
};

struct Piece {
  double a;
  double b;  // ignored for ToInfinity
  Map map = Map::Linear;
  double scale = 1.0;
};

namespace detail {

// QUADPACK qk21 abscissae and weights.
inline constexpr double kXgk[11] = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.148874338981631210884826001129720,
    0.000000000000000000000000000000000};
inline constexpr double kWgk[11] = {
    0.011694638867371874278064396062192, 0.032558162307964727478818972459390,
    0.054755896574351996031381300244580, 0.075039674810919952767043140916190,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};
inline constexpr double kWg[5] = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};

struct Interval {
  double lo, hi;
  double value, error, absval;
  int piece;
  int depth;
};

// Integrand after the change of variables of piece p, in its own coordinate.
template <class F>
double mapped(F& f, const Piece& p, double t) {
  switch (p.map) {
    case Map::Linear:
      return f(t);
    case Map::SqrtLeft: {
      if (t == 0.0) return 0.0;
      return 2.0 * t * f(p.a + t * t);
    }
    case Map::SqrtRight: {
      if (t == 0.0) return 0.0;
      return 2.0 * t * f(p.b - t * t);
    }
    case Map::ToInfinity: {
      const double om = 1.0 - t;
      if (om <= 0.0) return 0.0;
      const double x = p.a + p.scale * t / om;
      const double v = f(x);
      return v == 0.0 ? 0.0 : v * p.scale / (om * om);
    }
  }
  return 0.0;
}

inline void coordinate_range(const Piece& p, double& lo, double& hi) {
  switch (p.map) {
    case Map::Linear:
      lo = p.a;
      hi = p.b;
      break;
    case Map::SqrtLeft:
    case Map::SqrtRight:
      lo = 0.0;
      hi = std::sqrt(std::max(0.0, p.b - p.a));
      break;
    case Map::ToInfinity:
      lo = 0.0;
      hi = 1.0;
      break;
  }
}

template <class F>
Interval gk21(F& f, const Piece& p, int piece, double lo, double hi, int depth) {
  const double centr = 0.5 * (lo + hi);
  const double hlgth = 0.5 * (hi - lo);
  const double dhlgth = std::abs(hlgth);
  const double fc = mapped(f, p, centr);
  double resg = 0.0;
  double resk = kWgk[10] * fc;
  double resabs = std::abs(resk);
  double fv1[10], fv2[10];
  for (int j = 0; j < 5; ++j) {
    const int jtw = 2 * j + 1;
    const double absc = hlgth * kXgk[jtw];
    const double f1 = mapped(f, p, centr - absc);
    const double f2 = mapped(f, p, centr + absc);
    fv1[jtw] = f1;
    fv2[jtw] = f2;
    resg += kWg[j] * (f1 + f2);
    resk += kWgk[jtw] * (f1 + f2);
    resabs += kWgk[jtw] * (std::abs(f1) + std::abs(f2));
  }
  for (int j = 0; j < 5; ++j) {
    const int jtwm1 = 2 * j;
    const double absc = hlgth * kXgk[jtwm1];
    const double f1 = mapped(f, p, centr - absc);
    const double f2 = mapped(f, p, centr + absc);
    fv1[jtwm1] = f1;
    fv2[jtwm1] = f2;
    resk += kWgk[jtwm1] * (f1 + f2);
    resabs += kWgk[jtwm1] * (std::abs(f1) + std::abs(f2));
  }
  const double reskh = resk * 0.5;
  double resasc = kWgk[10] * std::abs(fc - reskh);
  for (int j = 0; j < 10; ++j) {
    resasc += kWgk[j] * (std::abs(fv1[j] - reskh) + std::abs(fv2[j] - reskh));
  }
  const double result = resk * hlgth;
  resabs *= dhlgth;
  resasc *= dhlgth;
  double err = std::abs((resk - resg) * hlgth);
  if (resasc != 0.0 && err != 0.0) {
    err = resasc * std::min(1.0, std::pow(200.0 * err / resasc, 1.5));
  }
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (resabs > std::numeric_limits<double>::min() / (50.0 * eps)) {
    err = std::max(eps * 50.0 * resabs, err);
  }
  return {lo, hi, result, err, resabs, piece, depth};
}

}  // namespace detail

// Global adaptive Gauss-Kronrod 10/21 over a union of pieces, each with its
// own change of variables. The interval with the largest error estimate is
// bisected until the total error meets max(abs_tol, rel_tol*|I|), floored at
// the roundoff level 100*eps*int|f|.
template <class F>
QuadResult integrate_pieces(F&& f, std::span<const Piece> pieces, const QuadratureSpec& q) {
  using detail::Interval;
  std::vector<Interval> heap;
  std::vector<Interval> frozen;
  heap.reserve(64);
  auto cmp = [](const Interval& x, const Interval& y) { return x.error < y.error; };
  QuadResult out;
  for (int i = 0; i < static_cast<int>(pieces.size()); ++i) {
    double lo = 0.0, hi = 0.0;
    detail::coordinate_range(pieces[i], lo, hi);
    if (!(hi > lo)) continue;
    heap.push_back(detail::gk21(f, pieces[i], i, lo, hi, 0));
    out.evaluations += 21;
  }
  std::make_heap(heap.begin(), heap.end(), cmp);
  auto totals = [&](double& value, double& error, double& absval) {
    value = error = absval = 0.0;
    for (const auto& iv : heap) value += iv.value, error += iv.error, absval += iv.absval;
    for (const auto& iv : frozen) value += iv.value, error += iv.error, absval += iv.absval;
  };
  constexpr double eps = std::numeric_limits<double>::epsilon();
  double value, error, absval;
  totals(value, error, absval);
  int count = static_cast<int>(heap.size());
  while (true) {
    const double target = std::max({q.abs_tol, q.rel_tol * std::abs(value), 100.0 * eps * absval});
    if (error <= target) {
      out.converged = true;
      break;
    }
    if (heap.empty() || count >= q.max_intervals) {
      out.converged = false;
      break;
    }
    std::pop_heap(heap.begin(), heap.end(), cmp);
    Interval worst = heap.back();
    heap.pop_back();
    const double mid = 0.5 * (worst.lo + worst.hi);
    if (worst.depth >= q.max_depth || !(mid > worst.lo && mid < worst.hi)) {
      frozen.push_back(worst);
      continue;
    }
    const auto& p = pieces[worst.piece];
    Interval left = detail::gk21(f, p, worst.piece, worst.lo, mid, worst.depth + 1);
    Interval right = detail::gk21(f, p, worst.piece, mid, worst.hi, worst.depth + 1);
    out.evaluations += 42;
    ++count;
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    absval += left.absval + right.absval - worst.absval;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), cmp);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), cmp);
    // Running sums drift; refresh them now and then.
    if (count % 64 == 0) totals(value, error, absval);
  }
  totals(value, error, absval);
  out.value = value;
  out.error = error;
  return out;
}

// Throwing front end: NumericalError carries the achieved error estimate.
template <class F>
double integrate_pieces_or_throw(F&& f, std::span<const Piece> pieces, const QuadratureSpec& q,
                                 const char* what) {
  QuadResult r = integrate_pieces(f, pieces, q);
  if (!r.converged) {
    const double target = std::max(q.abs_tol, q.rel_tol * std::abs(r.value));
    throw NumericalError(std::string("quadrature did not converge: ") + what, r.error, target);
  }
  return r.value;
}

// Sorted, deduplicated split points strictly inside (a, b).
inline std::vector<double> interior_splits(double a, double b, std::span<const double> splits) {
  std::vector<double> out;
  for (double x : splits) {
    if (x > a && x < b && std::isfinite(x)) out.push_back(x);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// int_a^b f with optional interior split points (jumps, kinks, peaks).
template <class F>
double integrate(F&& f, double a, double b, const QuadratureSpec& q,
                 std::span<const double> splits = {}, const char* what = "integral") {
  if (!(b > a)) return 0.0;
  std::vector<Piece> pieces;
  double lo = a;
  for (double x : interior_splits(a, b, splits)) {
    pieces.push_back({lo, x});
    lo = x;
  }
  pieces.push_back({lo, b});
  return integrate_pieces_or_throw(f, pieces, q, what);
}

// int_a^inf f; splits are finite points, the last piece is mapped to [0,1).
template <class F>
double integrate_to_infinity(F&& f, double a, const QuadratureSpec& q,
                             std::span<const double> splits = {}, double scale = 1.0,
                             const char* what = "improper integral") {
  std::vector<Piece> pieces;
  double lo = a;
  for (double x : interior_splits(a, std::numeric_limits<double>::infinity(), splits)) {
    pieces.push_back({lo, x});
    lo = x;
  }
  pieces.push_back({lo, lo, Map::ToInfinity, scale});
  return integrate_pieces_or_throw(f, pieces, q, what);
}

// int_a^b f when f has inverse-square-root singularities at chosen ends;
// the interval is halved and each half substituted from its singular end.
template <class F>
double integrate_sqrt_ends(F&& f, double a, double b, bool left, bool right, const QuadratureSpec& q,
                           const char* what = "singular integral") {
  if (!(b > a)) return 0.0;
  std::vector<Piece> pieces;
  const double m = 0.5 * (a + b);
  if (left && right) {
    pieces.push_back({a, m, Map::SqrtLeft});
    pieces.push_back({m, b, Map::SqrtRight});
  } else if (left) {
    pieces.push_back({a, b, Map::SqrtLeft});
  } else if (right) {
    pieces.push_back({a, b, Map::SqrtRight});
  } else {
    pieces.push_back({a, b});
  }
  return integrate_pieces_or_throw(f, pieces, q, what);
}

}  // namespace whf
