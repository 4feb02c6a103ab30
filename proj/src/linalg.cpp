#include "latgauss/linalg.hpp"

#include <algorithm>
#include <utility>

namespace lg {

RatMat RatMat::identity(int n) {
  RatMat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

RatMat RatMat::transpose() const {
  RatMat t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

RatMat RatMat::operator*(const RatMat& other) const {
  if (cols_ != other.rows_) throw DimensionMismatch("matrix product shape mismatch");
  RatMat r(rows_, other.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const Rat& aik = at(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < other.cols_; ++j) r.at(i, j) += aik * other.at(k, j);
    }
  return r;
}

RatVec RatMat::operator*(const RatVec& v) const {
  if (cols_ != static_cast<int>(v.size())) throw DimensionMismatch("matrix-vector shape mismatch");
  RatVec r(rows_, Rat(0));
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r[i] += at(i, j) * v[j];
  return r;
}

RatMat RatMat::operator+(const RatMat& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionMismatch("matrix sum shape mismatch");
  RatMat r(rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] + other.a_[i];
  return r;
}

RatMat RatMat::operator-(const RatMat& other) const {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw DimensionMismatch("matrix diff shape mismatch");
  RatMat r(rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] - other.a_[i];
  return r;
}

RatMat RatMat::scaled(const Rat& c) const {
  RatMat r(rows_, cols_);
  for (size_t i = 0; i < a_.size(); ++i) r.a_[i] = a_[i] * c;
  return r;
}

bool RatMat::operator==(const RatMat& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && a_ == other.a_;
}

bool RatMat::is_symmetric() const {
  if (rows_ != cols_) return false;
  for (int i = 0; i < rows_; ++i)
    for (int j = i + 1; j < cols_; ++j)
      if (at(i, j) != at(j, i)) return false;
  return true;
}

Rat RatMat::norm_inf() const {
  Rat best(0);
  for (int i = 0; i < rows_; ++i) {
    Rat row(0);
    for (int j = 0; j < cols_; ++j) row += abs(at(i, j));
    if (row > best) best = row;
  }
  return best;
}

Rat RatMat::determinant() const {
  if (rows_ != cols_) throw DimensionMismatch("determinant of non-square matrix");
  RatMat w(*this);
  int n = rows_;
  Rat det(1);
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int i = c; i < n; ++i) {
      if (w.at(i, c) != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) return Rat(0);
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(w.at(piv, j), w.at(c, j));
      det = -det;
    }
    det *= w.at(c, c);
    for (int i = c + 1; i < n; ++i) {
      if (w.at(i, c) == 0) continue;
      Rat f = w.at(i, c) / w.at(c, c);
      for (int j = c; j < n; ++j) w.at(i, j) -= f * w.at(c, j);
    }
  }
  return det;
}

RatMat RatMat::inverse() const {
  if (rows_ != cols_) throw DimensionMismatch("inverse of non-square matrix");
  int n = rows_;
  RatMat w(*this);
  RatMat inv = RatMat::identity(n);
  for (int c = 0; c < n; ++c) {
    int piv = -1;
    for (int i = c; i < n; ++i) {
      if (w.at(i, c) != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) throw Error("singular matrix has no inverse");
    if (piv != c) {
      for (int j = 0; j < n; ++j) {
        std::swap(w.at(piv, j), w.at(c, j));
        std::swap(inv.at(piv, j), inv.at(c, j));
      }
    }
    Rat p = w.at(c, c);
    for (int j = 0; j < n; ++j) {
      w.at(c, j) /= p;
      inv.at(c, j) /= p;
    }
    for (int i = 0; i < n; ++i) {
      if (i == c || w.at(i, c) == 0) continue;
      Rat f = w.at(i, c);
      for (int j = 0; j < n; ++j) {
        w.at(i, j) -= f * w.at(c, j);
        inv.at(i, j) -= f * inv.at(c, j);
      }
    }
  }
  return inv;
}

IMat IMat::identity(int n) {
  IMat m(n, n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1;
  return m;
}

IMat IMat::transpose() const {
  IMat t(cols_, rows_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
  return t;
}

IMat IMat::operator*(const IMat& other) const {
  if (cols_ != other.rows_) throw DimensionMismatch("matrix product shape mismatch");
  IMat r(rows_, other.cols_);
  for (int i = 0; i < rows_; ++i)
    for (int k = 0; k < cols_; ++k) {
      const Int& aik = at(i, k);
      if (aik == 0) continue;
      for (int j = 0; j < other.cols_; ++j) r.at(i, j) += aik * other.at(k, j);
    }
  return r;
}

bool IMat::operator==(const IMat& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && a_ == other.a_;
}

Int IMat::determinant() const {
  if (rows_ != cols_) throw DimensionMismatch("determinant of non-square matrix");
  // Bareiss fraction-free elimination; all divisions are exact.
  int n = rows_;
  IMat w(*this);
  Int prev(1);
  int sign = 1;
  for (int c = 0; c < n - 1; ++c) {
    int piv = -1;
    for (int i = c; i < n; ++i) {
      if (w.at(i, c) != 0) {
        piv = i;
        break;
      }
    }
    if (piv < 0) return Int(0);
    if (piv != c) {
      for (int j = 0; j < n; ++j) std::swap(w.at(piv, j), w.at(c, j));
      sign = -sign;
    }
    for (int i = c + 1; i < n; ++i) {
      for (int j = c + 1; j < n; ++j) {
        Int t = w.at(i, j) * w.at(c, c) - w.at(i, c) * w.at(c, j);
        mpz_divexact(w.at(i, j).get_mpz_t(), t.get_mpz_t(), prev.get_mpz_t());
      }
      w.at(i, c) = 0;
    }
    prev = w.at(c, c);
  }
  Int d = w.at(n - 1, n - 1);
  return sign > 0 ? d : Int(-d);
}

RatMat IMat::to_rational() const {
  RatMat r(rows_, cols_);
  for (int i = 0; i < rows_; ++i)
    for (int j = 0; j < cols_; ++j) r.at(i, j) = Rat(at(i, j));
  return r;
}

namespace {

void row_axpy(IMat& m, int dst, int src, const Int& f) {
  for (int j = 0; j < m.cols(); ++j) m.at(dst, j) -= f * m.at(src, j);
}

void row_swap(IMat& m, int a, int b) {
  for (int j = 0; j < m.cols(); ++j) std::swap(m.at(a, j), m.at(b, j));
}

void row_negate(IMat& m, int r) {
  for (int j = 0; j < m.cols(); ++j) m.at(r, j) = -m.at(r, j);
}

void col_axpy(IMat& m, int dst, int src, const Int& f) {
  for (int i = 0; i < m.rows(); ++i) m.at(i, dst) -= f * m.at(i, src);
}

void col_swap(IMat& m, int a, int b) {
  for (int i = 0; i < m.rows(); ++i) std::swap(m.at(i, a), m.at(i, b));
}

Int floor_div(const Int& a, const Int& b) {
  Int q;
  mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return q;
}

Int round_div(const Int& a, const Int& b) {
  // nearest-integer quotient, any tie direction is fine here
  Int q, r;
  mpz_fdiv_qr(q.get_mpz_t(), r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  Int babs = abs(b);
  if (r * 2 > babs) q += 1;
  return q;
}

}  // namespace

IMat hnf_row(const IMat& A, IMat* U) {
  int m = A.rows(), n = A.cols();
  IMat H(A);
  IMat T = IMat::identity(m);
  int r = 0;
  for (int c = 0; c < n && r < m; ++c) {
    // clear column c below row r by repeated remainder steps
    while (true) {
      int piv = -1;
      for (int i = r; i < m; ++i) {
        if (H.at(i, c) != 0 && (piv < 0 || abs(H.at(i, c)) < abs(H.at(piv, c)))) piv = i;
      }
      if (piv < 0) break;
      if (piv != r) {
        row_swap(H, r, piv);
        row_swap(T, r, piv);
      }
      bool others = false;
      for (int i = r + 1; i < m; ++i) {
        if (H.at(i, c) == 0) continue;
        Int q = round_div(H.at(i, c), H.at(r, c));
        row_axpy(H, i, r, q);
        row_axpy(T, i, r, q);
        if (H.at(i, c) != 0) others = true;
      }
      if (!others) break;
    }
    if (H.at(r, c) == 0) continue;  // no pivot in this column
    if (H.at(r, c) < 0) {
      row_negate(H, r);
      row_negate(T, r);
    }
    for (int i = 0; i < r; ++i) {
      Int q = floor_div(H.at(i, c), H.at(r, c));
      if (q != 0) {
        row_axpy(H, i, r, q);
        row_axpy(T, i, r, q);
      }
    }
    ++r;
  }
  if (U) *U = T;
  return H;
}

void smith_normal_form(const IMat& A, IMat& D, IMat& U, IMat& V) {
  int m = A.rows(), n = A.cols();
  D = A;
  U = IMat::identity(m);
  V = IMat::identity(n);
  int t = 0;
  int steps = std::min(m, n);
  while (t < steps) {
    // locate the smallest nonzero in the trailing block
    int pi = -1, pj = -1;
    for (int i = t; i < m; ++i)
      for (int j = t; j < n; ++j) {
        if (D.at(i, j) != 0 && (pi < 0 || abs(D.at(i, j)) < abs(D.at(pi, pj)))) {
          pi = i;
          pj = j;
        }
      }
    if (pi < 0) break;  // trailing block is zero
    if (pi != t) {
      row_swap(D, t, pi);
      row_swap(U, t, pi);
    }
    if (pj != t) {
      col_swap(D, t, pj);
      col_swap(V, t, pj);
    }

    bool dirty = false;
    for (int i = t + 1; i < m; ++i) {
      if (D.at(i, t) == 0) continue;
      Int q = round_div(D.at(i, t), D.at(t, t));
      row_axpy(D, i, t, q);
      row_axpy(U, i, t, q);
      if (D.at(i, t) != 0) dirty = true;
    }
    for (int j = t + 1; j < n; ++j) {
      if (D.at(t, j) == 0) continue;
      Int q = round_div(D.at(t, j), D.at(t, t));
      col_axpy(D, j, t, q);
      col_axpy(V, j, t, q);
      if (D.at(t, j) != 0) dirty = true;
    }
    if (dirty) continue;  // try again with the reduced entries

    // divisibility: d_t must divide every entry of the trailing block
    bool fixed = false;
    for (int i = t + 1; i < m && !fixed; ++i)
      for (int j = t + 1; j < n && !fixed; ++j) {
        if (D.at(i, j) % D.at(t, t) != 0) {
          row_axpy(D, t, i, Int(-1));  // fold row i into row t
          row_axpy(U, t, i, Int(-1));
          fixed = true;
        }
      }
    if (fixed) continue;

    if (D.at(t, t) < 0) {
      row_negate(D, t);
      row_negate(U, t);
    }
    ++t;
  }
}

IMat integer_kernel(const IMat& A) {
  // Row-HNF of A^T: rows of U aligned with zero rows of H satisfy A u = 0.
  IMat U;
  IMat H = hnf_row(A.transpose(), &U);
  std::vector<int> zero_rows;
  for (int i = 0; i < H.rows(); ++i) {
    bool zero = true;
    for (int j = 0; j < H.cols(); ++j)
      if (H.at(i, j) != 0) {
        zero = false;
        break;
      }
    if (zero) zero_rows.push_back(i);
  }
  IMat K(A.cols(), static_cast<int>(zero_rows.size()));
  for (size_t c = 0; c < zero_rows.size(); ++c)
    for (int j = 0; j < A.cols(); ++j) K.at(j, static_cast<int>(c)) = U.at(zero_rows[c], j);
  return K;
}

RatVec rat_vec_from_doubles(const std::vector<double>& v) {
  RatVec r;
  r.reserve(v.size());
  for (double x : v) r.push_back(rat_from_double(x));
  return r;
}

std::vector<double> rat_vec_to_doubles(const RatVec& v) {
  std::vector<double> r;
  r.reserve(v.size());
  for (const Rat& x : v) r.push_back(rat_to_double(x));
  return r;
}

}  // namespace lg
