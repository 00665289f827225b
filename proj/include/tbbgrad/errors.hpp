#pragma once

#include <stdexcept>
#include <string>

namespace tbbgrad {

// Denominator of the step quotient vanished: the requested target coincides
// with the harmonic pole. Callers fall back to the BB2 step.
class PoleError : public std::runtime_error {
 public:
  explicit PoleError(const std::string& what) : std::runtime_error(what) {}
};

// Input file could not be parsed; line() is 1-based.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, long line)
      : std::runtime_error(what + " (line " + std::to_string(line) + ")"), line_(line) {}
  long line() const { return line_; }

 private:
  long line_;
};

// Backtracking exceeded the configured cap without satisfying the
// sufficient-decrease condition.
class LineSearchError : public std::runtime_error {
 public:
  explicit LineSearchError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tbbgrad
