#pragma once

#include <stdexcept>
#include <string>

namespace polyak {

/// Base class for all errors raised by the library.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// An argument lies outside the mathematical domain of a formula.
class DomainError : public Error {
 public:
  explicit DomainError(const std::string& what) : Error(what) {}
};

/// Malformed input data (CSV / LIBSVM parsing, inconsistent shapes).
class DataError : public Error {
 public:
  explicit DataError(const std::string& what) : Error(what) {}
};

/// Invalid experiment configuration.
class ConfigError : public Error {
 public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

/// A step rule that needs the optimal value was given an oracle without one.
class MissingFStar : public Error {
 public:
  explicit MissingFStar(const std::string& what) : Error(what) {}
};

/// Non-finite values appeared during iteration.
class NumericalError : public Error {
 public:
  explicit NumericalError(const std::string& what) : Error(what) {}
};

}  // namespace polyak
