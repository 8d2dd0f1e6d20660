#pragma once

#include <stdexcept>
#include <string>

namespace sqcc {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class NonFiniteInput : public Error { using Error::Error; };
class DomainError : public Error { using Error::Error; };
/// Covariance matrix whose symplectic discriminant is negative beyond tolerance.
class NegativeDiscriminant : public Error { using Error::Error; };
/// Bob's variance after re-displacement mistakes dropped to or below -1.
class NonPhysicalRescale : public Error { using Error::Error; };
/// Worst-case correlation estimate is not positive; the block is too small.
class NonPositiveCorrelation : public Error { using Error::Error; };
class DegenerateLink : public Error { using Error::Error; };
class EmptyGrid : public Error { using Error::Error; };
class SeedRequired : public Error { using Error::Error; };
class InsufficientSamples : public Error { using Error::Error; };

/// Invalid configuration. `path()` is the dotted key that caused it.
class ConfigError : public Error {
 public:
  ConfigError(std::string path, const std::string& what)
      : Error(path.empty() ? what : path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const noexcept { return path_; }

 private:
  std::string path_;
};

class IOError : public Error { using Error::Error; };

}  // namespace sqcc
