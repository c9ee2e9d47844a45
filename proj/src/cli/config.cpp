#include "whf/cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "whf/errors.hpp"

namespace whf::cli {

namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

double number(std::string_view text, const std::string& what) {
  try {
    return parse_double(trim(text));
  } catch (const std::exception&) {
    throw ConfigError("invalid number '" + std::string(text) + "' for " + what);
  }
}

std::uint64_t unsigned_number(std::string_view text, const std::string& what) {
  text = trim(text);
  std::uint64_t v = 0;
  const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
  if (res.ec != std::errc() || res.ptr != text.data() + text.size()) {
    throw ConfigError("invalid non-negative integer '" + std::string(text) + "' for " + what);
  }
  return v;
}

bool boolean(std::string_view text, const std::string& what) {
  text = trim(text);
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  throw ConfigError("invalid boolean '" + std::string(text) + "' for " + what);
}

std::map<std::string, double> named_values(std::string_view text, const std::string& what) {
  std::map<std::string, double> out;
  if (trim(text).empty()) return out;
  for (auto item : split(text, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected name=value in " + what + ": '" + std::string(item) + "'");
    const std::string name(trim(item.substr(0, eq)));
    if (out.count(name)) throw ConfigError("duplicate '" + name + "' in " + what);
    out[name] = number(item.substr(eq + 1), what + "." + name);
  }
  return out;
}

double take(std::map<std::string, double>& m, const std::string& key, std::optional<double> fallback,
            const std::string& what) {
  const auto it = m.find(key);
  if (it == m.end()) {
    if (fallback) return *fallback;
    throw ConfigError(what + " needs '" + key + "'");
  }
  const double v = it->second;
  m.erase(it);
  return v;
}

void reject_rest(const std::map<std::string, double>& m, const std::string& what) {
  if (!m.empty()) throw ConfigError("unknown parameter '" + m.begin()->first + "' in " + what);
}

}  // namespace

std::vector<double> parse_list(std::string_view text) {
  text = trim(text);
  if (!text.empty() && text.front() == '[') {
    if (text.back() != ']') throw ConfigError("unterminated list '" + std::string(text) + "'");
    text = trim(text.substr(1, text.size() - 2));
  }
  std::vector<double> out;
  if (text.empty()) return out;
  for (auto item : split(text, ',')) out.push_back(number(item, "list"));
  return out;
}

std::vector<double> Range::values(double base) const {
  const double shift = relative ? base : 0.0;
  std::vector<double> out;
  if (step == 0.0) {
    out.push_back(shift + lo);
    return out;
  }
  const double n = std::floor((hi - lo) / step + 1e-9);
  for (int i = 0; i <= static_cast<int>(n); ++i) out.push_back(shift + lo + step * i);
  return out;
}

std::string Range::to_string() const {
  const std::string p = relative ? "+" : "";
  if (step == 0.0) return p + format_double(lo);
  return p + format_double(lo) + ":" + p + format_double(step) + ":" + p + format_double(hi);
}

Range parse_range(std::string_view text) {
  const auto parts = split(trim(text), ':');
  if (parts.size() != 1 && parts.size() != 3) {
    throw ConfigError("range must be lo:step:hi or a single value, got '" + std::string(text) + "'");
  }
  Range r;
  int relative = 0;
  std::vector<double> v;
  for (auto p : parts) {
    if (!p.empty() && p.front() == '+') {
      ++relative;
      p.remove_prefix(1);
    }
    v.push_back(number(p, "range"));
  }
  if (relative != 0 && relative != static_cast<int>(parts.size())) {
    throw ConfigError("mixed relative and absolute parts in range '" + std::string(text) + "'");
  }
  r.relative = relative != 0;
  r.lo = v[0];
  if (v.size() == 3) {
    r.step = v[1];
    r.hi = v[2];
    if (!(r.step > 0.0) || !(r.hi >= r.lo)) throw ConfigError("range needs step > 0 and hi >= lo");
  } else {
    r.hi = r.lo;
  }
  return r;
}

SimConfig SimOverrides::apply(SimConfig base) const {
  if (n_paths) base.n_paths = *n_paths;
  if (dt) base.dt = *dt;
  if (seed) base.seed = *seed;
  if (horizon) base.horizon = *horizon;
  if (bridge_correction) base.bridge_correction = *bridge_correction;
  return base;
}

CoefficientModel parse_model_spec(std::string_view text) {
  text = trim(text);
  const auto colon = text.find(':');
  const std::string kind(colon == std::string_view::npos ? std::string_view{} : trim(text.substr(0, colon)));
  const std::string_view rest = colon == std::string_view::npos ? std::string_view{} : text.substr(colon + 1);
  if (kind == "const") {
    auto m = named_values(rest, "const model");
    const double v = take(m, "v", 0.0, "const model");
    const double sigma = take(m, "sigma", 1.0, "const model");
    reject_rest(m, "const model");
    return CoefficientModel::constant(v, sigma);
  }
  if (kind == "onejump") {
    auto m = named_values(rest, "onejump model");
    const double v0 = take(m, "v0", 1.0, "onejump model");
    const double v1 = take(m, "v1", -1.0, "onejump model");
    const double sigma = take(m, "sigma", 1.0, "onejump model");
    const double s0 = take(m, "sigma0", sigma, "onejump model");
    const double s1 = take(m, "sigma1", sigma, "onejump model");
    const double t0 = take(m, "t0", 0.5, "onejump model");
    reject_rest(m, "onejump model");
    return CoefficientModel::one_jump(v0, v1, s0, s1, t0);
  }
  if (kind == "table1") {
    const auto col = unsigned_number(rest, "table1 column");
    if (col > 3) throw ConfigError("table1 column must be 0..3");
    return table1_model(static_cast<int>(col));
  }
  if (text.find('=') != std::string_view::npos) {
    try {
      return CoefficientModel::parse(std::string(text));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError(std::string("invalid model: ") + e.what());
    }
  }
  // Anything else is a config file holding a [model] section.
  RunConfig cfg = load_config(std::string(text));
  if (!cfg.model) throw ConfigError("model file '" + std::string(text) + "' has no [model] section");
  return *cfg.model;
}

void RunConfig::apply(const std::string& section, const std::string& key, const std::string& value) {
  const std::string what = section + "." + key;
  try {
    if (section == "model") {
      if (key == "spec") {
        model = parse_model_spec(value);
        breakpoints_.reset();
        v_.reset();
        sigma_.reset();
      } else if (key == "breakpoints") {
        breakpoints_ = parse_list(value);
      } else if (key == "v") {
        v_ = parse_list(value);
      } else if (key == "sigma") {
        sigma_ = parse_list(value);
      } else {
        throw ConfigError("unknown key '" + what + "'");
      }
    } else if (section == "quadrature") {
      if (key == "abs_tol") quad.abs_tol = number(value, what);
      else if (key == "rel_tol") quad.rel_tol = number(value, what);
      else if (key == "max_depth") quad.max_depth = static_cast<int>(unsigned_number(value, what));
      else if (key == "max_intervals") quad.max_intervals = static_cast<int>(unsigned_number(value, what));
      else if (key == "tail_cutoff") quad.tail_cutoff = number(value, what);
      else throw ConfigError("unknown key '" + what + "'");
    } else if (section == "simulation") {
      if (key == "n_paths") sim.n_paths = unsigned_number(value, what);
      else if (key == "dt") sim.dt = number(value, what);
      else if (key == "seed") sim.seed = unsigned_number(value, what);
      else if (key == "horizon") sim.horizon = number(value, what);
      else if (key == "bridge_correction") sim.bridge_correction = boolean(value, what);
      else if (key == "threads") threads = static_cast<int>(unsigned_number(value, what));
      else throw ConfigError("unknown key '" + what + "'");
    } else if (section == "experiment") {
      if (key == "c") {
        rate = number(value, what);
        if (!(*rate > 0.0)) throw ConfigError("experiment.c must be > 0");
      } else if (key == "grid_s") {
        grid_s = parse_range(value);
      } else if (key == "grid_t") {
        grid_t = parse_range(value);
      } else if (key == "grid") {
        for (auto item : split(value, ',')) {
          const auto eq = item.find('=');
          const auto name = eq == std::string_view::npos ? std::string_view{} : trim(item.substr(0, eq));
          if (name == "s") grid_s = parse_range(item.substr(eq + 1));
          else if (name == "t") grid_t = parse_range(item.substr(eq + 1));
          else throw ConfigError("grid entries are s=<range> and t=<range>, got '" + std::string(item) + "'");
        }
      } else if (key == "tolerance_scale") {
        tolerance_scale = number(value, what);
        if (!(tolerance_scale > 0.0)) throw ConfigError("tolerance_scale must be > 0");
      } else {
        throw ConfigError("unknown key '" + what + "'");
      }
    } else if (section == "output") {
      if (key == "dir") out_dir = value;
      else if (key == "svg") svg = boolean(value, what);
      else throw ConfigError("unknown key '" + what + "'");
    } else {
      throw ConfigError("unknown section [" + section + "]");
    }
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception& e) {
    throw ConfigError(what + ": " + e.what());
  }
  echo.push_back(what + " = " + value);
}

void RunConfig::finalize() {
  if (breakpoints_ || v_ || sigma_) {
    if (!v_) throw ConfigError("[model] list form needs 'v'");
    const std::vector<double> bps = breakpoints_.value_or(std::vector<double>{});
    const std::vector<double> sig = sigma_.value_or(std::vector<double>(v_->size(), 1.0));
    try {
      model = CoefficientModel(bps, *v_, sig);
    } catch (const std::exception& e) {
      throw ConfigError(std::string("invalid [model]: ") + e.what());
    }
  }
  quad.validate();
  sim.apply(SimConfig{}).validate();
}

RunConfig parse_config(std::string_view text) {
  RunConfig cfg;
  std::string section;
  int line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto end = text.find('\n', start);
    std::string_view line = text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start);
    ++line_no;
    start = end == std::string_view::npos ? text.size() + 1 : end + 1;

    const auto comment = line.find_first_of("#;");
    if (comment != std::string_view::npos) line = line.substr(0, comment);
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) continue;
    const int col = static_cast<int>(first) + 1;
    const std::string_view body = trim(line);
    if (body.front() == '[') {
      if (body.back() != ']') throw ConfigError("unterminated section header", line_no, col);
      section = std::string(trim(body.substr(1, body.size() - 2)));
      static const char* known[] = {"model", "quadrature", "simulation", "experiment", "output"};
      bool ok = false;
      for (const char* k : known) ok = ok || section == k;
      if (!ok) throw ConfigError("unknown section [" + section + "]", line_no, col + 1);
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError("expected 'key = value'", line_no, col);
    if (section.empty()) throw ConfigError("key outside of any [section]", line_no, col);
    const std::string key(trim(line.substr(0, eq)));
    if (key.empty()) throw ConfigError("empty key", line_no, col);
    const std::string_view raw = line.substr(eq + 1);
    const auto vfirst = raw.find_first_not_of(" \t\r");
    const int vcol = static_cast<int>(eq + 2 + (vfirst == std::string_view::npos ? 0 : vfirst));
    const std::string value(trim(raw));
    if (value.empty()) throw ConfigError("missing value for '" + key + "'", line_no, vcol);
    try {
      cfg.apply(section, key, value);
    } catch (const ConfigError& e) {
      // Unknown keys point at the key, bad values at the value.
      const bool unknown = std::string(e.what()).rfind("unknown key", 0) == 0;
      throw ConfigError(e.what(), line_no, unknown ? col : vcol);
    }
  }
  cfg.finalize();
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

}  // namespace whf::cli
