#pragma once

#include <utility>

namespace whf {

enum class Sign { Plus, Minus };

inline double sign_value(Sign s) { return s == Sign::Plus ? 1.0 : -1.0; }
inline Sign opposite(Sign s) { return s == Sign::Plus ? Sign::Minus : Sign::Plus; }
inline const char* sign_name(Sign s) { return s == Sign::Plus ? "+" : "-"; }

struct ConstCoeff {
  double v = 0.0;
  double sigma = 1.0;

  ConstCoeff() = default;
  ConstCoeff(double v_, double sigma_);

  // Coefficients of -phi.
  ConstCoeff mirrored() const { return {-v, sigma}; }
  // Coefficients as seen by the passage of the given sign: up-passage of
  // phi for Plus, up-passage of -phi for Minus.
  ConstCoeff oriented(Sign s) const { return s == Sign::Plus ? *this : mirrored(); }
};

// P(tau+_ell(s) > s + dt). Zero when ell <= 0 (already at or above the level).
double tail_prob_up(ConstCoeff c, double ell, double dt);
// Down-passage to distance ell below the start: the up formula with v -> -v.
double tail_prob_down(ConstCoeff c, double ell, double dt);

// First-passage density of tau+_ell - s at elapsed time r.
double passage_density_up(ConstCoeff c, double ell, double r);
double passage_density_down(ConstCoeff c, double ell, double r);

// Density in y of {phi_{s+dt} - a in dy, tau+_ell > s + dt}, y <= ell (zero at y = ell).
double joint_survival_density(ConstCoeff c, double ell, double dt, double y);

// gamma^sign for constant coefficients after elapsed time dt.
double gamma_const(ConstCoeff c, double dt, Sign sign);
// gamma+ + gamma- for constant coefficients.
double gamma_total_const(ConstCoeff c, double dt);

// Partial derivative in the level of the joint survival density at level 0,
// written for w = ell - y > 0: the kernel whose integral against a tail
// probability gives gamma+ across a breakpoint.
double survival_level_derivative(ConstCoeff c, double dt, double w);

// Tail bounds for P(tau+_ell > s + dt) valid for any coefficients inside the
// envelope. Returns (lower, upper).
std::pair<double, double> tail_envelope_bounds(double v_inf, double sigma_lo, double sigma_hi,
                                               double ell, double dt);

// (Gamma^sign h)(0) for h(t) = exp(-rate t).
double laplace_exponent(ConstCoeff c, double rate, Sign sign);

// Exact density of tau+_k followed by an independent tau-_ell (constant
// coefficients), i.e. the convolution of the two passage densities.
double composed_passage_density(ConstCoeff c, double k, double ell, double t);

}  // namespace whf
