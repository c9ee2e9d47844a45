#include "whf/cli/output.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "whf/errors.hpp"

namespace whf::cli {

void Table::add(std::vector<std::string> row) {
  if (row.size() != columns.size()) throw std::logic_error("row width does not match the columns of " + name);
  rows.push_back(std::move(row));
}

std::string num(double x) { return format_double(x); }
std::string num(std::size_t x) { return std::to_string(x); }
std::string flag(bool b) { return b ? "true" : "false"; }

Table report_table(const std::string& name, const std::vector<VerificationReport>& reports) {
  Table t;
  t.name = name;
  t.columns = {"identity", "lhs", "rhs", "abs_error", "tolerance", "pass", "informational", "method"};
  for (const auto& r : reports) {
    t.add({r.identity, num(r.lhs), num(r.rhs), num(r.abs_error), num(r.tolerance), flag(r.pass),
           flag(r.informational), r.method});
  }
  return t;
}

std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string render_csv(const Table& t) {
  std::ostringstream out;
  for (const auto& m : t.meta) out << "# " << m << '\n';
  for (std::size_t i = 0; i < t.columns.size(); ++i) out << (i ? "," : "") << csv_escape(t.columns[i]);
  out << '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << csv_escape(row[i]);
    out << '\n';
  }
  return out.str();
}

namespace {

std::string xml_escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string fixed(double x, int digits) {
  std::ostringstream s;
  s.setf(std::ios::fixed);
  s.precision(digits);
  s << x;
  return s.str();
}

}  // namespace

std::string render_svg(const Plot& p) {
  constexpr double W = 720, H = 440, L = 70, R = 170, T = 40, B = 56;
  double x0 = INFINITY, x1 = -INFINITY, y0 = INFINITY, y1 = -INFINITY;
  for (const auto& s : p.series) {
    for (auto [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      x0 = std::min(x0, x), x1 = std::max(x1, x), y0 = std::min(y0, y), y1 = std::max(y1, y);
    }
  }
  if (!(x1 > x0)) x0 -= 0.5, x1 += 0.5;
  if (!(y1 > y0)) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.05 * (y1 - y0);
  y0 -= pad, y1 += pad;
  auto sx = [&](double x) { return L + (x - x0) / (x1 - x0) * (W - L - R); };
  auto sy = [&](double y) { return H - B - (y - y0) / (y1 - y0) * (H - T - B); };

  static const char* colours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e",
                                  "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
  std::ostringstream o;
  o << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  o << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  o << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">" << xml_escape(p.title) << "</text>\n";
  o << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
    << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = x0 + (x1 - x0) * i / 4.0, yv = y0 + (y1 - y0) * i / 4.0;
    o << "<text x=\"" << fixed(sx(xv), 1) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\">" << fixed(xv, 3) << "</text>\n";
    o << "<text x=\"" << L - 6 << "\" y=\"" << fixed(sy(yv) + 4, 1) << "\" text-anchor=\"end\">" << fixed(yv, 3) << "</text>\n";
  }
  o << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 14 << "\" text-anchor=\"middle\">" << xml_escape(p.x_label) << "</text>\n";
  o << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
    << (T + H - B) / 2 << ")\">" << xml_escape(p.y_label) << "</text>\n";
  for (std::size_t k = 0; k < p.series.size(); ++k) {
    const auto& s = p.series[k];
    const char* c = colours[k % 10];
    o << "<polyline fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (auto [x, y] : s.points) {
      if (!std::isfinite(x) || !std::isfinite(y)) continue;
      o << (first ? "" : " ") << fixed(sx(x), 2) << "," << fixed(sy(y), 2);
      first = false;
    }
    o << "\"/>\n";
    const double ly = T + 14 + 16 * static_cast<double>(k);
    o << "<line x1=\"" << W - R + 10 << "\" y1=\"" << ly - 4 << "\" x2=\"" << W - R + 30 << "\" y2=\"" << ly - 4
      << "\" stroke=\"" << c << "\" stroke-width=\"2\"/>\n";
    o << "<text x=\"" << W - R + 34 << "\" y=\"" << ly << "\">" << xml_escape(s.label) << "</text>\n";
  }
  o << "</svg>\n";
  return o.str();
}

std::filesystem::path write_text(const std::filesystem::path& dir, const std::string& file,
                                 const std::string& text) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create output directory '" + dir.string() + "': " + ec.message());
  const auto path = dir / file;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw ConfigError("write failed for '" + path.string() + "'");
  return path;
}

}  // namespace whf::cli
