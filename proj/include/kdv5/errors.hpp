#pragma once

#include <stdexcept>
#include <string>

namespace kdv5 {

// Grid too small for the requested weight support.
class DomainTooSmall : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A sample left the finite range or exceeded the blow-up threshold.
class BlowUp : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Picard iteration did not reach its tolerance within max_iter sweeps.
class NoContraction : public std::runtime_error {
 public:
  NoContraction(const std::string& what, int iterations, double last_update)
      : std::runtime_error(what), iterations_(iterations), last_update_(last_update) {}

  int iterations() const { return iterations_; }
  double last_update() const { return last_update_; }

 private:
  int iterations_;
  double last_update_;
};

class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}

  // 0 when the error is not tied to a line (e.g. a missing key).
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace kdv5
