#pragma once

#include <stdexcept>
#include <string>

namespace fqft {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ContractViolation : Error {
  using Error::Error;
};

struct ResourceError : Error {
  using Error::Error;
};

struct Unsupported : Error {
  using Error::Error;
};

struct ValidationError : Error {
  using Error::Error;
};

struct ExtractionFailure : Error {
  ExtractionFailure(const std::string& what, double residual)
      : Error(what), residual(residual) {}
  double residual;
};

struct RecombinationFailure : Error {
  using Error::Error;
};

}  // namespace fqft
