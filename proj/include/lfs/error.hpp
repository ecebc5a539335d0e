#pragma once

#include <stdexcept>
#include <string>

namespace lfs {

// Bad physical or numerical parameter (non-finite, out of range).
class InvalidParameter : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Structurally bad input: empty trajectory, mismatched grids, unreadable table.
class InvalidInput : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Step-halving audit failed; carries a step that is expected to pass.
class AccuracyError : public std::runtime_error {
 public:
  AccuracyError(const std::string& what, double suggested_dt)
      : std::runtime_error(what), suggested_dt_(suggested_dt) {}
  double suggested_dt() const noexcept { return suggested_dt_; }

 private:
  double suggested_dt_;
};

// Density-matrix invariant broken beyond tolerance.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Harmonic series truncated too early.
class TruncationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Config file parse or constraint error. line() is 0 when not tied to a line.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + what : what),
        line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace lfs
