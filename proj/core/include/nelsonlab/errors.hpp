#pragma once

#include <stdexcept>
#include <string>

namespace nelsonlab {

// Base for every error raised by the library. The CLI maps subclasses to exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DimensionError : public Error {
 public:
  using Error::Error;
};

// Λ beyond the Nyquist guard of a grid.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class SpectralError : public Error {
 public:
  using Error::Error;
};

class PreconditionError : public Error {
 public:
  using Error::Error;
};

class EllipticityError : public Error {
 public:
  EllipticityError(const std::string& what, double min_ratio)
      : Error(what), min_ratio_(min_ratio) {}
  double min_ratio() const { return min_ratio_; }

 private:
  double min_ratio_;
};

// Dense assembly would exceed the configured memory guard.
class SizeError : public Error {
 public:
  using Error::Error;
};

// Pieces combined in an identity were built under different conventions.
class ContractError : public Error {
 public:
  using Error::Error;
};

// ModelSpec invariant violated.
class SpecError : public Error {
 public:
  using Error::Error;
};

std::string format_double(double v);

}  // namespace nelsonlab
