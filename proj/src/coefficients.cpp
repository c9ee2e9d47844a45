#include "whf/coefficients.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <limits>

#include "whf/errors.hpp"

namespace whf {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_finite(std::span<const double> xs, const char* name) {
  for (double x : xs) {
    if (!std::isfinite(x)) throw DomainError(std::string(name) + " must be finite");
  }
}

std::string list_text(const std::vector<double>& xs) {
  std::string out = "[";
  for (std::size_t i = 0; i < xs.size(); ++i) {
    if (i) out += ", ";
    out += format_double(xs[i]);
  }
  return out + "]";
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<double> parse_list(std::string_view text) {
  text = trim(text);
  if (text.size() < 2 || text.front() != '[' || text.back() != ']') {
    throw ConfigError("expected a bracketed list, got '" + std::string(text) + "'");
  }
  text = trim(text.substr(1, text.size() - 2));
  std::vector<double> out;
  if (text.empty()) return out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = text.find(',', pos);
    const std::string_view item = text.substr(pos, comma == std::string_view::npos ? text.npos : comma - pos);
    out.push_back(parse_double(item));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

}  // namespace

std::string format_double(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '+') text.remove_prefix(1);
  double x = 0.0;
  auto res = std::from_chars(text.data(), text.data() + text.size(), x);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size() || text.empty()) {
    throw ConfigError("not a decimal number: '" + std::string(text) + "'");
  }
  return x;
}

CoefficientModel::CoefficientModel(std::vector<double> breakpoints, std::vector<double> v,
                                   std::vector<double> sigma)
    : breakpoints_(std::move(breakpoints)), v_(std::move(v)), sigma_(std::move(sigma)) {
  if (v_.size() != breakpoints_.size() + 1 || sigma_.size() != v_.size()) {
    throw DomainError("need exactly one drift and volatility value per segment");
  }
  require_finite(breakpoints_, "breakpoints");
  require_finite(v_, "drift values");
  require_finite(sigma_, "volatility values");
  for (double s : sigma_) {
    if (!(s > 0.0)) throw DomainError("volatility values must be strictly positive");
  }
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    if (!(breakpoints_[i] > 0.0)) throw DomainError("breakpoints must be strictly positive");
    if (i > 0 && !(breakpoints_[i] > breakpoints_[i - 1])) {
      throw DomainError("breakpoints must be strictly increasing");
    }
  }
}

CoefficientModel CoefficientModel::constant(double v, double sigma) { return {{}, {v}, {sigma}}; }

CoefficientModel CoefficientModel::one_jump(double v0, double v1, double sigma0, double sigma1,
                                            double t0) {
  return {{t0}, {v0, v1}, {sigma0, sigma1}};
}

std::size_t CoefficientModel::segment_index(double t) const {
  if (!(t >= 0.0)) throw DomainError("time must be nonnegative");
  return static_cast<std::size_t>(std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t) -
                                  breakpoints_.begin());
}

double CoefficientModel::segment_start(std::size_t i) const {
  return i == 0 ? 0.0 : breakpoints_[i - 1];
}

double CoefficientModel::segment_end(std::size_t i) const {
  return i < breakpoints_.size() ? breakpoints_[i] : kInf;
}

double CoefficientModel::drift_at(double t) const { return v_[segment_index(t)]; }
double CoefficientModel::sigma_at(double t) const { return sigma_[segment_index(t)]; }

double CoefficientModel::integrated_drift(double s, double t) const {
  if (!(s >= 0.0)) throw DomainError("time must be nonnegative");
  if (s > t) throw DomainError("integrated_drift needs s <= t");
  double total = 0.0;
  for (std::size_t i = segment_index(s); i < v_.size(); ++i) {
    const double lo = std::max(s, segment_start(i));
    const double hi = std::min(t, segment_end(i));
    if (hi <= lo) break;
    total += v_[i] * (hi - lo);
  }
  return total;
}

double CoefficientModel::integrated_variance(double s, double t) const {
  if (!(s >= 0.0)) throw DomainError("time must be nonnegative");
  if (s > t) throw DomainError("integrated_variance needs s <= t");
  double total = 0.0;
  for (std::size_t i = segment_index(s); i < v_.size(); ++i) {
    const double lo = std::max(s, segment_start(i));
    const double hi = std::min(t, segment_end(i));
    if (hi <= lo) break;
    total += sigma_[i] * sigma_[i] * (hi - lo);
  }
  return total;
}

Envelope CoefficientModel::envelope() const {
  Envelope e{0.0, sigma_.front(), sigma_.front()};
  for (double v : v_) e.v_inf = std::max(e.v_inf, std::abs(v));
  for (double s : sigma_) {
    e.sigma_lo = std::min(e.sigma_lo, s);
    e.sigma_hi = std::max(e.sigma_hi, s);
  }
  return e;
}

double CoefficientModel::next_breakpoint(double t) const {
  auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
  return it == breakpoints_.end() ? kInf : *it;
}

std::vector<double> CoefficientModel::breakpoints_between(double s, double t) const {
  std::vector<double> out;
  for (double b : breakpoints_) {
    if (b > s && b < t) out.push_back(b);
  }
  return out;
}

CoefficientModel CoefficientModel::mirrored() const {
  std::vector<double> v = v_;
  for (double& x : v) x = -x;
  return {breakpoints_, std::move(v), sigma_};
}

CoefficientModel CoefficientModel::shifted(double s) const {
  const std::size_t first = segment_index(s);
  std::vector<double> bps, v, sig;
  for (std::size_t i = first; i < breakpoints_.size(); ++i) bps.push_back(breakpoints_[i] - s);
  v.assign(v_.begin() + static_cast<std::ptrdiff_t>(first), v_.end());
  sig.assign(sigma_.begin() + static_cast<std::ptrdiff_t>(first), sigma_.end());
  return {std::move(bps), std::move(v), std::move(sig)};
}

std::string CoefficientModel::to_string() const {
  return "breakpoints=" + list_text(breakpoints_) + ", v=" + list_text(v_) +
         ", sigma=" + list_text(sigma_);
}

CoefficientModel CoefficientModel::parse(const std::string& text) {
  // Split on the top-level commas that separate key=value pairs.
  std::vector<std::string_view> parts;
  std::string_view rest(text);
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < rest.size(); ++i) {
    if (rest[i] == '[') ++depth;
    if (rest[i] == ']') --depth;
    if (rest[i] == ',' && depth == 0) {
      parts.push_back(rest.substr(start, i - start));
      start = i + 1;
    }
  }
  parts.push_back(rest.substr(start));
  std::vector<double> bps, v, sig;
  bool have_b = false, have_v = false, have_s = false;
  for (auto part : parts) {
    const auto eq = part.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected key=value in model text");
    const auto key = trim(part.substr(0, eq));
    const auto value = part.substr(eq + 1);
    if (key == "breakpoints") {
      bps = parse_list(value), have_b = true;
    } else if (key == "v") {
      v = parse_list(value), have_v = true;
    } else if (key == "sigma") {
      sig = parse_list(value), have_s = true;
    } else {
      throw ConfigError("unknown model key '" + std::string(key) + "'");
    }
  }
  if (!have_v || !have_s) throw ConfigError("model text needs v and sigma");
  if (!have_b && v.size() != 1) throw ConfigError("model text needs breakpoints");
  try {
    return {std::move(bps), std::move(v), std::move(sig)};
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

double drift_at(const CoefficientModel& model, double t) { return model.drift_at(t); }
double integrated_drift(const CoefficientModel& model, double s, double t) {
  return model.integrated_drift(s, t);
}
double integrated_variance(const CoefficientModel& model, double s, double t) {
  return model.integrated_variance(s, t);
}
Envelope envelope(const CoefficientModel& model) { return model.envelope(); }

}  // namespace whf
