#pragma once

#include <stdexcept>
#include <string>

namespace lg {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Basis matrix has determinant zero.
struct SingularBasis : Error {
  using Error::Error;
};

// Sublattice coefficient matrix has determinant zero.
struct SingularCoefficients : Error {
  using Error::Error;
};

// Two sublattices do not share the same parent lattice.
struct ParentMismatch : Error {
  using Error::Error;
};

// Predicted or actual enumeration size exceeds the configured cap.
struct BudgetExceeded : Error {
  using Error::Error;
};

// Sigma' <= Sigma fails, so the monotonicity claim does not apply.
struct NotComparable : Error {
  using Error::Error;
};

struct ParseError : Error {
  using Error::Error;
};

struct DimensionMismatch : Error {
  using Error::Error;
};

}  // namespace lg
