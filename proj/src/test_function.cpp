#include "whf/test_function.hpp"

#include <cmath>

#include "whf/errors.hpp"

namespace whf {

TestFunction::TestFunction(Fn f, Fn g, double K_, double kappa_)
    : eval(std::move(f)), gf(std::move(g)), K(K_), kappa(kappa_) {
  if (!eval) throw DomainError("test function needs an evaluator");
}

TestFunction TestFunction::exponential(double rate, double amplitude) {
  if (!(rate > 0.0)) throw DomainError("exponential test function needs rate > 0");
  TestFunction f(
      [rate, amplitude](double t) { return amplitude * std::exp(-rate * t); },
      [rate, amplitude](double t) { return -rate * amplitude * std::exp(-rate * t); },
      std::abs(rate * amplitude), rate);
  f.exp_tail = ExponentialTail{0.0, amplitude, rate};
  f.sup_bound = std::abs(amplitude);
  return f;
}

TestFunction TestFunction::indicator(double T) {
  if (!(T >= 0.0)) throw DomainError("indicator needs T >= 0");
  TestFunction f([T](double t) { return t <= T ? 1.0 : 0.0; });
  f.support_end = T;
  f.jumps = {T};
  f.sup_bound = 1.0;
  return f;
}

TestFunction TestFunction::zero() {
  TestFunction f([](double) { return 0.0; }, [](double) { return 0.0; }, 0.0, 1.0);
  f.exp_tail = ExponentialTail{0.0, 0.0, 1.0};
  f.sup_bound = 0.0;
  return f;
}

}  // namespace whf
