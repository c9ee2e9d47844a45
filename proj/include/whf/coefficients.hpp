#pragma once

#include <span>
#include <string>
#include <vector>

namespace whf {

struct Envelope {
  double v_inf;     // sup |v|
  double sigma_lo;  // inf sigma
  double sigma_hi;  // sup sigma
};

// Piecewise-constant drift and volatility. Segment i covers
// [breakpoints[i-1], breakpoints[i]) with breakpoints[-1] = 0, and the last
// segment covers [breakpoints.back(), inf). Evaluation is cadlag.
class CoefficientModel {
 public:
  CoefficientModel(std::vector<double> breakpoints, std::vector<double> v, std::vector<double> sigma);

  static CoefficientModel constant(double v, double sigma);
  static CoefficientModel one_jump(double v0, double v1, double sigma0, double sigma1, double t0);

  const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
  const std::vector<double>& v_values() const noexcept { return v_; }
  const std::vector<double>& sigma_values() const noexcept { return sigma_; }
  std::size_t segments() const noexcept { return v_.size(); }
  bool is_constant() const noexcept { return breakpoints_.empty(); }

  // Index of the segment containing t (t >= 0).
  std::size_t segment_index(double t) const;
  // Start of segment i and its end (infinity for the last one).
  double segment_start(std::size_t i) const;
  double segment_end(std::size_t i) const;

  double drift_at(double t) const;
  double sigma_at(double t) const;
  double integrated_drift(double s, double t) const;
  double integrated_variance(double s, double t) const;
  Envelope envelope() const;

  // First breakpoint strictly after t, or infinity.
  double next_breakpoint(double t) const;
  // Breakpoints inside the open interval (s, t).
  std::vector<double> breakpoints_between(double s, double t) const;

  // Model of -phi: drift negated, volatility unchanged.
  CoefficientModel mirrored() const;
  // The model seen from time s onward, shifted so that s becomes 0.
  CoefficientModel shifted(double s) const;

  // "breakpoints=[...], v=[...], sigma=[...]" with shortest round-trip decimals.
  std::string to_string() const;
  static CoefficientModel parse(const std::string& text);

  bool operator==(const CoefficientModel&) const = default;

 private:
  std::vector<double> breakpoints_;
  std::vector<double> v_;
  std::vector<double> sigma_;
};

// Free-function forms of the queries.
double drift_at(const CoefficientModel& model, double t);
double integrated_drift(const CoefficientModel& model, double s, double t);
double integrated_variance(const CoefficientModel& model, double s, double t);
Envelope envelope(const CoefficientModel& model);

// Shortest decimal text that parses back to exactly x.
std::string format_double(double x);
// Full-string decimal parse; throws ConfigError on trailing garbage.
double parse_double(std::string_view text);

}  // namespace whf
