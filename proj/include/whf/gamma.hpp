#pragma once

#include <string>

#include "whf/closed_form.hpp"
#include "whf/coefficients.hpp"
#include "whf/passage_law.hpp"
#include "whf/quadrature.hpp"

namespace whf {

enum class GammaMethod { ClosedForm, Recursive, Lattice };

const char* method_name(GammaMethod m);

struct GammaValue {
  double value;
  GammaMethod method;
};

struct GammaBounds {
  double lower;
  double upper;
  double gamma_plus;
  double gamma_minus;
  bool plus_ok;
  bool minus_ok;
  bool pass() const { return plus_ok && minus_ok; }
};

// gamma^+/- (s, t) for a piecewise-constant model. Same-segment pairs are
// closed form; across breakpoints the level derivative of the first
// segment's survival density is integrated against the survival probability
// from the first breakpoint on, which is recursive up to the cap and a
// lattice solve beyond it.
class GammaKernel {
 public:
  explicit GammaKernel(CoefficientModel model, QuadratureSpec quad = {}, int max_breakpoints = 3);

  GammaValue evaluate(double s, double t, Sign sign) const;
  double gamma_pm(double s, double t, Sign sign) const { return evaluate(s, t, sign).value; }
  double gamma_total(double s, double t) const;
  GammaBounds bounds_check(double s, double t) const;
  double volterra_residual(double r, double q) const;

  const CoefficientModel& model() const { return model_; }
  const QuadratureSpec& quad() const { return quad_; }
  const PassageLaw& law(Sign sign) const { return sign == Sign::Plus ? plus_ : minus_; }

 private:
  CoefficientModel model_;
  QuadratureSpec quad_;
  int max_breakpoints_;
  PassageLaw plus_;
  PassageLaw minus_;
};

double gamma_pm(const GammaKernel& k, double s, double t, Sign sign);
double gamma_total(const GammaKernel& k, double s, double t);
GammaBounds bounds_check(const GammaKernel& k, double s, double t);
double volterra_residual(const GammaKernel& k, double r, double q);

// Lower and upper envelope of gamma^+/- over (t - s) from the sup-norm of the
// drift and the volatility bounds.
std::pair<double, double> gamma_envelope(const Envelope& env, double dt);

// Centred Gaussian density of phi_t(s) - phi_s at 0 (rho(s, t) in the text).
double marginal_density_at_zero(const CoefficientModel& model, double s, double t);

}  // namespace whf
