#pragma once

#include <stdexcept>
#include <string>

namespace llg {

/// Failure of the numerical machinery: solver breakdown, non-finite fields.
class NumericalError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// An iterative solve stopped before reaching its residual target.
class SolverError : public NumericalError {
  public:
    SolverError(const std::string& what, double achieved_residual, int iterations)
        : NumericalError(what), residual_(achieved_residual), iterations_(iterations) {}

    double achieved_residual() const noexcept { return residual_; }
    int iterations() const noexcept { return iterations_; }

  private:
    double residual_;
    int iterations_;
};

/// File-system failure, reported with the offending path.
class IoError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

}  // namespace llg
