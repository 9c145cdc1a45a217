#pragma once

#include <stdexcept>
#include <string>

namespace ltk {

/// Bad run configuration (CLI exit code 2).
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Base class for numerical failures (CLI exit code 3).
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// The Wronskian vanished: E sits (numerically) at a negated eigenvalue,
/// where the resolvent has a pole.
struct PoleError : NumericError {
  using NumericError::NumericError;
};

/// A Laplace-inversion node fell at or below the declared abscissa of
/// validity of the transform.
struct AbscissaError : NumericError {
  using NumericError::NumericError;
};

struct ConvergenceError : NumericError {
  using NumericError::NumericError;
};

struct OverflowError : NumericError {
  using NumericError::NumericError;
};

/// A quadrature whose Gaussian decay constant came out non-positive
/// (energy below the validity range of the radial representation).
struct DivergenceError : NumericError {
  using NumericError::NumericError;
};

/// Radial amplitude touched zero in the interior.
struct SingularityError : NumericError {
  using NumericError::NumericError;
};

/// A power-law fit left its asymptotic regime.
struct FitError : NumericError {
  using NumericError::NumericError;
};

/// No sign change of g' inside the user bracket.
struct BracketError : NumericError {
  using NumericError::NumericError;
};

}  // namespace ltk
