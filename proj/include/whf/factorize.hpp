#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "whf/closed_form.hpp"
#include "whf/coefficients.hpp"
#include "whf/gamma.hpp"
#include "whf/montecarlo.hpp"
#include "whf/quadrature.hpp"
#include "whf/test_function.hpp"

namespace whf {

struct VerificationReport {
  std::string identity;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_error = 0.0;
  double tolerance = 0.0;
  std::string method;
  bool pass = false;
  // Diagnostic rows do not count towards the exit status.
  bool informational = false;

  static VerificationReport compare(std::string identity, double lhs, double rhs, double tolerance,
                                    std::string method);
};

// A payoff u on the real line. Outside [lo, hi] it vanishes, or is
// negligible for the Gaussian bump; kinks are passed to quadrature.
struct Payoff {
  std::function<double(double)> fn;
  double lo = -std::numeric_limits<double>::infinity();
  double hi = std::numeric_limits<double>::infinity();
  std::vector<double> kinks;
  std::string name;
  bool constant = false;

  double operator()(double x) const { return fn(x); }

  static Payoff gaussian_bump(double centre, double width);
  static Payoff triangle(double centre, double half_width);
  // cos(xi x) on |x - centre| <= half periods, cut where cos vanishes.
  static Payoff truncated_cos(double xi, int half_periods);
  static Payoff cosine(double xi);
  static Payoff one();
  static Payoff identity();
};

// Resolvent int_0^inf P_y h dy as a test function: exact for constant
// coefficients, generator inversion otherwise.
TestFunction resolvent_function(const CoefficientModel& model, const TestFunction& h,
                                const QuadratureSpec& quad = {});

// E int_s^inf u(phi_t(s, a)) h(t) sigma^2(t) dt from the Gaussian marginals.
double wh_lhs(const CoefficientModel& model, const Payoff& u, const TestFunction& h, double s, double a,
              const QuadratureSpec& quad = {});
// 2 int u(a + l)(P+_l R h)(s) dl + 2 int u(a - l)(P-_l R h)(s) dl.
double wh_rhs(const CoefficientModel& model, const Payoff& u, const TestFunction& h, double s, double a,
              const QuadratureSpec& quad = {});
double wh_rhs(const CoefficientModel& model, const Payoff& u, const TestFunction& resolvent, double s,
              double a, const QuadratureSpec& quad, bool resolvent_given);

// Stopped identity at the deterministic time T: the expectation terms at T
// come from Monte Carlo samples of phi_T.
VerificationReport wh_stopped(const CoefficientModel& model, const Payoff& u, const TestFunction& h, double s,
                              double a, double T, const SimConfig& cfg, const QuadratureSpec& quad = {});

struct ClassicalResult {
  double direct;          // route (i)
  double factorized;      // route (ii), outer integral over x
  double factorized_swap; // route (ii), outer integral over y
  Estimate monte_carlo;   // route (iii)
  std::vector<VerificationReport> reports;
};

ClassicalResult classical_wh(ConstCoeff c, double rate, const Payoff& u, double a, const SimConfig& cfg,
                             const QuadratureSpec& quad = {});
// Several payoffs evaluated on one shared set of killed paths.
std::vector<ClassicalResult> classical_wh(ConstCoeff c, double rate, const std::vector<Payoff>& payoffs, double a,
                                          const SimConfig& cfg, const QuadratureSpec& quad = {});
// Re[c / (c - psi(xi))], psi(xi) = i v xi - sigma^2 xi^2 / 2.
double characteristic_value(ConstCoeff c, double rate, double xi);
// Route (i) and route (ii) of E_c u for a payoff, without the MC route.
double classical_direct(ConstCoeff c, double rate, const Payoff& u, double a, const QuadratureSpec& quad = {});
double classical_factorized(ConstCoeff c, double rate, const Payoff& u, double a, bool outer_x,
                            const QuadratureSpec& quad = {});

struct NoisyResidual {
  double residual;
  bool exact;  // eigenrelation used (constant coefficients from s on)
  double gamma_h;
  double gamma2_h;
};

// f'(s) -+ v(s) (Gamma^+- f)(s) + sigma^2(s)/2 ((Gamma^+-)^2 f)(s) for f = e^{-rate t}.
// At a breakpoint the right derivative and right-continuous coefficients are used.
NoisyResidual noisy_wh_residual(const CoefficientModel& model, double rate, double s, Sign sign,
                                const QuadratureSpec& quad = {});

// Gamma^sign h fitted as a test function: exact past the last breakpoint,
// Chebyshev in sqrt(b - t) on each earlier segment ending at b.
TestFunction fit_generator_image(const GammaKernel& k, const TestFunction& h, Sign sign, int nodes = 24);

// Two-sample KS between X_e - max X and min X from disjoint path sets.
VerificationReport increment_law_gap(const CoefficientModel& model, const SimConfig& cfg, double kill_rate = 1.0,
                                     bool expect_same_law = true);

}  // namespace whf
