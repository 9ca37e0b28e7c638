#ifndef MTCLUST_ERRORS_HPP
#define MTCLUST_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace mtclust {

/// Bad argument to a library call (shape mismatch, out-of-range index, ...).
class ArgumentError : public std::invalid_argument {
 public:
  explicit ArgumentError(const std::string& msg) : std::invalid_argument(msg) {}
};

/// The requested class-balance bounds admit no legal indicator matrix.
class BalanceInfeasibleError : public std::runtime_error {
 public:
  explicit BalanceInfeasibleError(const std::string& msg)
      : std::runtime_error(msg) {}
};

/// A matrix row is not a legal class-code vector.
class MalformedIndicatorError : public std::runtime_error {
 public:
  explicit MalformedIndicatorError(const std::string& msg)
      : std::runtime_error(msg) {}
};

/// An operation was called on an object in an unusable state (e.g. empty pool).
class StateError : public std::logic_error {
 public:
  explicit StateError(const std::string& msg) : std::logic_error(msg) {}
};

/// A numerical routine failed (factorization breakdown, not-PSD input, ...).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& msg) : std::runtime_error(msg) {}
};

/// Dataset ingestion failure; message carries file and line context.
class IngestError : public std::runtime_error {
 public:
  explicit IngestError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace mtclust

#endif  // MTCLUST_ERRORS_HPP
