#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>

namespace lrmc {

struct SvdFactors;

/// Base class for all errors thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Shape disagreement between operands (matrix vs. index set, vector length, ...).
class DimensionError : public Error {
 public:
  using Error::Error;
};

/// Invalid argument value (negative threshold, empty alphabet, bad rank, ...).
class ParameterError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text; carries the 1-based line number when known.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line)
      : Error("line " + std::to_string(line) + ": " + message), line_(line) {}
  explicit ParseError(const std::string& message) : Error(message), line_(0) {}

  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Structurally valid input with inadmissible content (duplicates, out-of-range ratings).
class DataError : public Error {
 public:
  using Error::Error;
};

/// Filesystem failure; message includes the offending path.
class IoError : public Error {
 public:
  using Error::Error;
};

/// Iterative factorization failed to stabilize within its pass budget.
/// The best factors found so far are attached for callers that can
/// tolerate a degraded result.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& message, std::shared_ptr<const SvdFactors> best_effort)
      : Error(message), best_effort_(std::move(best_effort)) {}

  const SvdFactors* best_effort() const { return best_effort_.get(); }

 private:
  std::shared_ptr<const SvdFactors> best_effort_;
};

}  // namespace lrmc
