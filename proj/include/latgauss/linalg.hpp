#pragma once

#include <vector>

#include "latgauss/errors.hpp"
#include "latgauss/rational.hpp"

namespace lg {

using RatVec = std::vector<Rat>;
using IntVec = std::vector<Int>;

// Dense matrix of exact rationals, row-major. Sized for lattice work
// (n <= a few dozen); algorithms are the plain exact ones.
class RatMat {
 public:
  RatMat() : rows_(0), cols_(0) {}
  RatMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, Rat(0)) {}

  static RatMat identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Rat& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  const Rat& at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  RatMat transpose() const;
  RatMat operator*(const RatMat& other) const;
  RatVec operator*(const RatVec& v) const;
  RatMat operator+(const RatMat& other) const;
  RatMat operator-(const RatMat& other) const;
  RatMat scaled(const Rat& c) const;
  bool operator==(const RatMat& other) const;

  Rat determinant() const;
  // Throws Error if singular.
  RatMat inverse() const;

  bool is_symmetric() const;

  // max_i sum_j |a_ij|
  Rat norm_inf() const;

 private:
  int rows_, cols_;
  std::vector<Rat> a_;
};

// Dense matrix of exact integers, row-major.
class IMat {
 public:
  IMat() : rows_(0), cols_(0) {}
  IMat(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<size_t>(rows) * cols, Int(0)) {}

  static IMat identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Int& at(int i, int j) { return a_[static_cast<size_t>(i) * cols_ + j]; }
  const Int& at(int i, int j) const { return a_[static_cast<size_t>(i) * cols_ + j]; }

  IMat transpose() const;
  IMat operator*(const IMat& other) const;
  bool operator==(const IMat& other) const;

  Int determinant() const;  // exact, via fraction-free elimination
  RatMat to_rational() const;

 private:
  int rows_, cols_;
  std::vector<Int> a_;
};

// Row-style Hermite normal form: returns H with U*A = H, U unimodular.
// Pivots positive, entries above each pivot reduced into [0, pivot).
IMat hnf_row(const IMat& A, IMat* U = nullptr);

// Smith normal form: U*A*V = D with D diagonal, d1 | d2 | ... | dn,
// diagonal nonnegative, U and V unimodular.
void smith_normal_form(const IMat& A, IMat& D, IMat& U, IMat& V);

// Basis of the integer kernel {v : A v = 0}, returned as columns.
IMat integer_kernel(const IMat& A);

RatVec rat_vec_from_doubles(const std::vector<double>& v);
std::vector<double> rat_vec_to_doubles(const RatVec& v);

}  // namespace lg
