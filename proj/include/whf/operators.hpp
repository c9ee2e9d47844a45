#pragma once

#include <utility>

#include "whf/closed_form.hpp"
#include "whf/coefficients.hpp"
#include "whf/gamma.hpp"
#include "whf/quadrature.hpp"
#include "whf/test_function.hpp"

namespace whf {

// (P^sign_ell f)(s) = E f(tau^sign_{sign ell}(s)).
double apply_passage_semigroup(const CoefficientModel& model, double ell, const TestFunction& f, double s,
                               Sign sign, const QuadratureSpec& quad = {});
double apply_passage_semigroup(const PassageLaw& law, double ell, const TestFunction& f, double s);

// (Gamma^sign f)(s) = int_s^inf g_f(t) gamma^sign(s, t) dt.
double apply_generator_pm(const GammaKernel& k, const TestFunction& f, double s, Sign sign);
// (Gamma f)(s) = (Gamma^+ f)(s) + (Gamma^- f)(s).
double apply_gamma(const GammaKernel& k, const TestFunction& f, double s);

// (P_ell f)(s) for constant coefficients, where P_ell = P^+_ell P^-_ell.
// Throws UnsupportedModel for a model with breakpoints.
double apply_homogeneous_semigroup(const CoefficientModel& model, double ell, const TestFunction& f, double s,
                                   const QuadratureSpec& quad = {});

// (P^+_k P^-_ell f)(s) by nesting the two passage expectations; works for any
// model the passage recursion supports.
double apply_composed_semigroup(const CoefficientModel& model, double k, double ell, const TestFunction& f,
                                double s, const QuadratureSpec& quad = {});

// P^sign_ell f as a test function of s (each evaluation is a quadrature).
TestFunction passage_semigroup_function(const CoefficientModel& model, double ell, const TestFunction& f,
                                        Sign sign, const QuadratureSpec& quad = {});

// (int_0^inf P_y h dy)(s). Constant models use the exact y-integrated
// kernel; other models invert the generator (see Resolvent) and rebuild it
// on every call, so prefer Resolvent for repeated evaluation.
double resolvent_integral(const CoefficientModel& model, const TestFunction& h, double s,
                          const QuadratureSpec& quad = {});

// Constant-coefficient resolvent of h as a test function with derivative.
TestFunction constant_resolvent(ConstCoeff c, const TestFunction& h, const QuadratureSpec& quad = {});

// int_0^inf (P^+_y P^-_y h)(s) dy: the composition that coincides with the
// resolvent for constant coefficients only. Reported as a diagnostic.
double resolvent_by_composition(const CoefficientModel& model, const TestFunction& h, double s,
                                const QuadratureSpec& quad = {});

struct ComposedDensity {
  double convolution_value;
  double printed_formula_value;
  double closed_form_value;
};

// Density at t of tau+_k followed by tau-_ell: direct convolution of the two
// passage densities, the printed one-index formula as transcribed, and the
// exact closed form of the convolution.
ComposedDensity composed_density_check(ConstCoeff c, double k, double ell, double t,
                                       const QuadratureSpec& quad = {});

}  // namespace whf
