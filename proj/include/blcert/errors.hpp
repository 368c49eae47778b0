#ifndef BLCERT_ERRORS_HPP
#define BLCERT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace blcert {

/// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct QuadratureFailure : Error {
  using Error::Error;
};
struct NonFiniteSample : Error {
  using Error::Error;
};
struct DimensionMismatch : Error {
  using Error::Error;
};
struct GridMismatch : Error {
  using Error::Error;
};
struct UnresolvedScale : Error {
  using Error::Error;
};
struct CflViolation : Error {
  using Error::Error;
};
struct NonFiniteState : Error {
  using Error::Error;
};
struct InsufficientPadding : Error {
  using Error::Error;
};
struct NoContraction : Error {
  using Error::Error;
};
struct SchemeMismatch : Error {
  using Error::Error;
};
struct NegativeInput : Error {
  using Error::Error;
};
struct ConfigError : Error {
  using Error::Error;
};

}  // namespace blcert

#endif
