#pragma once

#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "whf/factorize.hpp"

namespace whf::cli {

// A CSV table with '#'-prefixed metadata lines.
struct Table {
  std::string name;
  std::vector<std::string> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row);
};

std::string num(double x);
std::string num(std::size_t x);
std::string flag(bool b);

struct Series {
  std::string label;
  std::vector<std::pair<double, double>> points;
};

struct Plot {
  std::string name;
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
};

Table report_table(const std::string& name, const std::vector<VerificationReport>& reports);

std::string csv_escape(const std::string& field);
std::string render_csv(const Table& t);
std::string render_svg(const Plot& p);

// Writes text to dir/file, creating dir; returns the path written.
std::filesystem::path write_text(const std::filesystem::path& dir, const std::string& file,
                                 const std::string& text);

}  // namespace whf::cli
