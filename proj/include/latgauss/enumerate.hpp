#pragma once

#include <cstdint>
#include <vector>

#include "latgauss/lattice.hpp"

namespace lg {

struct EnumPoint {
  std::vector<int32_t> z;  // coefficient vector: w = B z + x
  double q;                // computed form value w^T Q w
  double qerr;             // rigorous bound on |q - exact q|
};

// Enumerates coset points inside an ellipsoid {w : w^T Q w <= r2} for a
// fixed exact positive-definite form Q. The recursion runs in floating
// point off a Cholesky factor of B^T Q B; candidates whose computed form
// value is within its own rigorous error bound of the boundary are
// confirmed with exact rational arithmetic, and exact ties q = r2 are
// included. The returned list is sorted by (q, coefficients) and is
// independent of how the tree was walked.
class FormContext {
 public:
  FormContext(Lattice lattice, RatMat q_form);

  const Lattice& lattice() const { return lattice_; }
  const RatMat& q_form() const { return q_; }
  int dim() const { return lattice_.dim(); }
  // rigorous relative bound: |computed q - exact q| <= eps_rel * q + (leaf terms)
  double eps_rel() const { return eps_rel_; }
  const Eigen::MatrixXd& chol_upper() const { return chol_; }

  std::vector<EnumPoint> enumerate(const RatVec& shift, const Rat& r2_exact, uint64_t cap) const;

  // exact form value of B z + shift
  Rat exact_q(const RatVec& shift, const std::vector<int32_t>& z) const;

  // box-product bound on the number of points inside radius^2 = r2
  double predict_count(double r2) const;

 private:
  Lattice lattice_;
  RatMat q_;         // exact SPD form on ambient space
  RatMat form_;      // exact B^T Q B on coefficient space
  Eigen::MatrixXd chol_;  // upper-triangular R with R^T R ~ form_
  double chol_resid_;     // exact bound on ||form_ - R^T R||_inf
  double form_inv_norm_;  // exact upper bound on ||form_^{-1}||_inf
  double eps_rel_;
};

}  // namespace lg
