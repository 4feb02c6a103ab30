#include "latgauss/lattice.hpp"

#include <Eigen/Cholesky>

#include "latgauss/enumerate.hpp"

namespace lg {

namespace {

Eigen::MatrixXd to_eigen(const RatMat& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) e(i, j) = rat_to_double(m.at(i, j));
  return e;
}

RatMat from_eigen_exact(const Eigen::MatrixXd& e) {
  RatMat m(static_cast<int>(e.rows()), static_cast<int>(e.cols()));
  for (int i = 0; i < e.rows(); ++i)
    for (int j = 0; j < e.cols(); ++j) m.at(i, j) = rat_from_double(e(i, j));
  return m;
}

bool is_integer_vec(const RatVec& v) {
  for (const Rat& x : v)
    if (x.get_den() != 1) return false;
  return true;
}

}  // namespace

Lattice Lattice::from_basis_columns(RatMat basis) {
  if (basis.rows() != basis.cols()) throw DimensionMismatch("basis must be square");
  if (basis.rows() == 0) throw DimensionMismatch("empty basis");
  auto d = std::make_shared<Data>();
  d->n = basis.rows();
  Rat det = basis.determinant();
  if (det == 0) throw SingularBasis("basis has determinant zero");
  d->det_abs = abs(det);
  d->basis_inv = basis.inverse();
  d->gram = basis.transpose() * basis;
  d->basis = std::move(basis);
  d->basis_d = to_eigen(d->basis);

  Eigen::MatrixXd gram_d = to_eigen(d->gram);
  Eigen::LLT<Eigen::MatrixXd> llt(gram_d);
  if (llt.info() != Eigen::Success) {
    throw Error("Gram matrix is not positive definite in floating point; basis too ill-conditioned");
  }
  d->gram_chol = llt.matrixU();

  RatMat chol_exact = from_eigen_exact(d->gram_chol);
  RatMat resid = d->gram - chol_exact.transpose() * chol_exact;
  d->gram_chol_resid = rat_to_double_up(resid.norm_inf());

  RatMat gram_inv = d->basis_inv * d->basis_inv.transpose();
  d->gram_inv_norm = rat_to_double_up(gram_inv.norm_inf());

  return Lattice(std::move(d));
}

Lattice Lattice::from_basis_rows(const RatMat& rows) { return from_basis_columns(rows.transpose()); }

bool Lattice::contains(const RatVec& v) const { return is_integer_vec(coefficients(v)); }

RatVec Lattice::coefficients(const RatVec& v) const {
  if (static_cast<int>(v.size()) != dim()) throw DimensionMismatch("vector length != lattice dimension");
  return basis_inv() * v;
}

Coset::Coset(Lattice l, RatVec x) : lattice(std::move(l)), shift(std::move(x)) {
  if (static_cast<int>(shift.size()) != lattice.dim())
    throw DimensionMismatch("shift length != lattice dimension");
}

bool Coset::contains(const RatVec& v) const {
  if (v.size() != shift.size()) return false;
  RatVec diff(v.size());
  for (size_t i = 0; i < v.size(); ++i) diff[i] = v[i] - shift[i];
  return lattice.contains(diff);
}

namespace {

Int validated_index(const Lattice& parent, const IMat& coeff) {
  if (coeff.rows() != coeff.cols() || coeff.rows() != parent.dim())
    throw DimensionMismatch("coefficient matrix must be n x n");
  Int det = coeff.determinant();
  if (det == 0) throw SingularCoefficients("sublattice coefficient matrix is singular");
  return abs(det);
}

}  // namespace

SublatticeRep::SublatticeRep(Lattice parent, IMat coeff)
    : parent_(std::move(parent)),
      coeff_(std::move(coeff)),
      index_(validated_index(parent_, coeff_)),
      sub_(Lattice::from_basis_columns(parent_.basis() * coeff_.to_rational())),
      coeff_inv_(coeff_.to_rational().inverse()) {}

bool SublatticeRep::contains_parent_coeff(const RatVec& z) const {
  return is_integer_vec(coeff_inv_ * z);
}

Lattice make_lattice(const RatMat& basis_rows) { return Lattice::from_basis_rows(basis_rows); }

Lattice dual(const Lattice& L) {
  return Lattice::from_basis_columns(L.basis_inv().transpose());
}

SublatticeRep sublattice(const Lattice& L, const IMat& X) { return SublatticeRep(L, X); }

SublatticeRep intersect(const SublatticeRep& M, const SublatticeRep& N) {
  if (!M.parent().same_basis(N.parent()))
    throw ParentMismatch("sublattices have different parent lattices");
  int n = M.parent().dim();
  // kernel of [X | -Y]: pairs (z, w) with X z = Y w; X z then spans the
  // intersection in parent coefficients
  IMat A(n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      A.at(i, j) = M.coeff().at(i, j);
      A.at(i, n + j) = -N.coeff().at(i, j);
    }
  IMat K = integer_kernel(A);
  if (K.cols() != n) throw Error("unexpected kernel rank in sublattice intersection");
  IMat Z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) Z.at(i, j) = K.at(i, j);
  IMat C = M.coeff() * Z;
  // canonical form: column-style HNF
  IMat H = hnf_row(C.transpose()).transpose();
  return SublatticeRep(M.parent(), H);
}

CosetReps quotient_reps(const Lattice& L, const SublatticeRep& M) {
  if (!M.parent().same_basis(L)) throw ParentMismatch("sublattice has a different parent lattice");
  int n = L.dim();
  IMat D, U, V;
  smith_normal_form(M.coeff(), D, U, V);
  // X Z^n = U^{-1} D Z^n, so coefficient-space representatives are
  // U^{-1} a for a in the box prod [0, d_i)
  RatMat Uinv = U.to_rational().inverse();
  std::vector<long> diag(n);
  Int count(1);
  for (int i = 0; i < n; ++i) {
    diag[i] = D.at(i, i).get_si();
    count *= D.at(i, i);
  }
  CosetReps out{L, M, {}};
  out.reps.reserve(count.get_ui());
  std::vector<long> a(n, 0);
  while (true) {
    RatVec av(n);
    for (int i = 0; i < n; ++i) av[i] = Rat(a[i]);
    out.reps.push_back(L.basis() * (Uinv * av));
    int k = 0;
    while (k < n) {
      if (++a[k] < diag[k]) break;
      a[k] = 0;
      ++k;
    }
    if (k == n) break;
  }
  return out;
}

PointList enumerate_points(const Coset& c, double radius, uint64_t cap) {
  if (radius < 0) throw Error("enumeration radius must be nonnegative");
  int n = c.dim();
  FormContext ctx(c.lattice, RatMat::identity(n));
  Rat r2 = rat_from_double(radius);
  r2 *= r2;
  auto pts = ctx.enumerate(c.shift, r2, cap);
  PointList out{c, radius, {}, {}};
  out.points.reserve(pts.size());
  out.coefficients.reserve(pts.size());
  std::vector<double> shift_d = rat_vec_to_doubles(c.shift);
  const Eigen::MatrixXd& B = c.lattice.basis_d();
  for (auto& p : pts) {
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) {
      double acc = shift_d[i];
      for (int j = 0; j < n; ++j) acc += B(i, j) * p.z[j];
      w[i] = acc;
    }
    out.points.push_back(std::move(w));
    out.coefficients.push_back(std::move(p.z));
  }
  return out;
}

}  // namespace lg
