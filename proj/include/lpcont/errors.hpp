#pragma once

#include <stdexcept>
#include <string>

namespace lpcont {

/// Invalid or inconsistent experiment configuration (CLI exit code 2).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The perturbation map is not admissible on the sample grid: non-positive
/// Jacobian determinant, singular Jacobian, or parameters outside the
/// family's injectivity range (CLI exit code 3).
class AdmissibilityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An index set splits an eigenvalue of the reference or perturbed
/// operator, or a perturbed eigenvalue escaped its spectral window
/// (CLI exit code 3).
class SplittingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Solver or quadrature failure (CLI exit code 4).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Evaluation exactly at a pole of a resolvent symbol.
class PoleError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

}  // namespace lpcont
