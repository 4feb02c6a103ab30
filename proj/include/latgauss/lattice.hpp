#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <memory>
#include <vector>

#include "latgauss/linalg.hpp"

namespace lg {

// Full-rank lattice {B z : z integer}, basis vectors stored as the
// columns of B. Exact rational data plus cached floating-point
// machinery for enumeration. Immutable and cheap to copy.
class Lattice {
 public:
  // basis vectors as columns
  static Lattice from_basis_columns(RatMat basis);
  // basis vectors as rows (the serialization convention)
  static Lattice from_basis_rows(const RatMat& rows);

  int dim() const { return d_->n; }
  const RatMat& basis() const { return d_->basis; }
  const RatMat& basis_inv() const { return d_->basis_inv; }
  const RatMat& gram() const { return d_->gram; }
  const Rat& det_abs() const { return d_->det_abs; }
  const Eigen::MatrixXd& basis_d() const { return d_->basis_d; }
  const Eigen::MatrixXd& gram_chol() const { return d_->gram_chol; }
  // exact bound on ||gram - chol^T chol||_inf
  double gram_chol_residual() const { return d_->gram_chol_resid; }
  // exact upper bound on ||gram^{-1}||_inf
  double gram_inv_norm() const { return d_->gram_inv_norm; }

  // exact membership test
  bool contains(const RatVec& v) const;
  // exact coefficient vector B^{-1} v
  RatVec coefficients(const RatVec& v) const;

  bool same_basis(const Lattice& other) const { return d_ == other.d_ || d_->basis == other.d_->basis; }

 private:
  struct Data {
    int n;
    RatMat basis, basis_inv, gram;
    Rat det_abs;
    Eigen::MatrixXd basis_d, gram_chol;
    double gram_chol_resid;
    double gram_inv_norm;
  };
  explicit Lattice(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  std::shared_ptr<const Data> d_;
};

// Lattice translated by a real shift: L + x.
struct Coset {
  Lattice lattice;
  RatVec shift;

  Coset(Lattice l, RatVec x);
  int dim() const { return lattice.dim(); }
  bool contains(const RatVec& v) const;
};

// Sublattice M = L X of a parent lattice, X integer with det != 0.
class SublatticeRep {
 public:
  SublatticeRep(Lattice parent, IMat coeff);

  const Lattice& parent() const { return parent_; }
  const IMat& coeff() const { return coeff_; }
  const Int& index() const { return index_; }
  // the sublattice as a standalone lattice (basis B X)
  const Lattice& as_lattice() const { return sub_; }

  // exact membership of a parent-coefficient vector in the sublattice
  bool contains_parent_coeff(const RatVec& z) const;

 private:
  Lattice parent_;
  IMat coeff_;
  Int index_;
  Lattice sub_;
  RatMat coeff_inv_;  // X^{-1}, exact
};

// Representatives of the quotient group L / M, one per coset.
struct CosetReps {
  Lattice parent;
  SublatticeRep sub;
  std::vector<RatVec> reps;  // exactly index(M) entries, deterministic order
};

// All points of a coset with Euclidean norm <= R (ties included).
struct PointList {
  Coset coset;
  double radius;
  std::vector<std::vector<double>> points;
  std::vector<std::vector<int32_t>> coefficients;  // exact reconstruction: B z + x
};

inline constexpr uint64_t kDefaultEnumCap = 10'000'000;

Lattice make_lattice(const RatMat& basis_rows);
Lattice dual(const Lattice& L);
SublatticeRep sublattice(const Lattice& L, const IMat& X);
SublatticeRep intersect(const SublatticeRep& M, const SublatticeRep& N);
CosetReps quotient_reps(const Lattice& L, const SublatticeRep& M);
PointList enumerate_points(const Coset& c, double radius, uint64_t cap = kDefaultEnumCap);

}  // namespace lg
