#pragma once

#include <stdexcept>
#include <string>

namespace whf {

// Invalid argument for the mathematical object (negative time, s >= t, ...).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

// A numerical routine could not reach its target accuracy.
class NumericalError : public std::runtime_error {
 public:
  NumericalError(const std::string& what, double achieved, double target)
      : std::runtime_error(what + " (achieved error " + std::to_string(achieved) +
                           ", target " + std::to_string(target) + ")"),
        achieved_(achieved),
        target_(target) {}

  double achieved() const noexcept { return achieved_; }
  double target() const noexcept { return target_; }

 private:
  double achieved_;
  double target_;
};

// Malformed configuration or simulation settings.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0, int column = 0)
      : std::runtime_error(line > 0 ? what + " at line " + std::to_string(line) +
                                          ", column " + std::to_string(column)
                                    : what),
        line_(line),
        column_(column) {}

  int line() const noexcept { return line_; }
  int column() const noexcept { return column_; }

 private:
  int line_;
  int column_;
};

// The requested operation is not available for this coefficient model.
class UnsupportedModel : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace whf
