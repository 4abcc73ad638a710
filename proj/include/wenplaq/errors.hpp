#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace wenplaq {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Operand sizes disagree (site counts, matrix dimensions).
class DimensionError : public Error {
  public:
    using Error::Error;
};

/// Request exceeds the dense-materialization limit.
class CapacityError : public Error {
  public:
    using Error::Error;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
  public:
    using Error::Error;
};

class ConvergenceError : public Error {
  public:
    ConvergenceError(const std::string &what, std::vector<double> residuals)
        : Error(what), residuals_(std::move(residuals)) {}
    const std::vector<double> &residuals() const { return residuals_; }

  private:
    std::vector<double> residuals_;
};

/// Invalid NMR machine description (asymmetric couplings, zero divisors).
class MachineError : public Error {
  public:
    using Error::Error;
};

class ParseError : public Error {
  public:
    using Error::Error;
};

/// Tomography record lacks some Pauli words.
class IncompleteRecordError : public Error {
  public:
    IncompleteRecordError(const std::string &what, std::vector<std::string> missing)
        : Error(what), missing_(std::move(missing)) {}
    const std::vector<std::string> &missing() const { return missing_; }

  private:
    std::vector<std::string> missing_;
};

/// Unitarity or other numeric precondition on matrices violated.
class NonUnitaryError : public Error {
  public:
    using Error::Error;
};

/// Run configuration rejected before execution (CLI exit code 2).
class ValidationError : public Error {
  public:
    using Error::Error;
};

/// Compiled sequence failed its equivalence check (CLI exit code 3).
class VerificationError : public Error {
  public:
    using Error::Error;
};

}  // namespace wenplaq
