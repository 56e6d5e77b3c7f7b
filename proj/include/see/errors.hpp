#pragma once

#include <stdexcept>
#include <string>

namespace see {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input file (CSV, JSON model, blacklist).
class ParseError : public Error {
 public:
  using Error::Error;
};

class DimensionMismatch : public Error {
 public:
  DimensionMismatch(std::size_t expected, std::size_t got)
      : Error("dimension mismatch: expected " + std::to_string(expected) +
              ", got " + std::to_string(got)),
        expected_(expected),
        got_(got) {}

  std::size_t expected() const noexcept { return expected_; }
  std::size_t got() const noexcept { return got_; }

 private:
  std::size_t expected_;
  std::size_t got_;
};

/// The oracle refused a probe because the explore budget is spent.
class BudgetExhausted : public Error {
 public:
  using Error::Error;
};

/// Remote oracle unreachable or answered with something other than a label.
/// The probe that raised it was not counted.
class TransportError : public Error {
 public:
  using Error::Error;
};

class SeedFailure : public Error {
 public:
  using Error::Error;
};

class TrainingError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace see
