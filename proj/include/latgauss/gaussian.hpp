#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "latgauss/certified.hpp"
#include "latgauss/enumerate.hpp"
#include "latgauss/lattice.hpp"

namespace lg {

// Gaussian parameter: either a scalar width s (the weight is
// exp(-pi ||w||^2 / s^2)) or a symmetric positive-definite matrix Sigma
// (the weight is exp(-pi w^T Sigma^{-1} w)). The scalar form stores s^2
// exactly, so widths like sqrt(2) are representable without rounding.
class GaussianParam {
 public:
  static GaussianParam scalar(double s);
  static GaussianParam scalar_s2(Rat s2);
  // entries are taken exactly; asymmetry up to 1e-12 is symmetrized away,
  // anything worse is rejected
  static GaussianParam matrix(const RatMat& sigma);

  bool is_scalar() const { return scalar_; }
  double s() const;
  const Rat& s2() const { return s2_; }
  const RatMat& sigma() const { return sigma_; }
  const RatMat& sigma_inv() const { return sigma_inv_; }
  const Eigen::MatrixXd& sigma_inv_sqrt() const { return sigma_inv_sqrt_; }
  int matrix_dim() const { return sigma_.rows(); }

  // the form Q with weight exp(-pi w^T Q w)
  RatMat q_form(int n) const;
  // rigorous upper bound on sup ||w||^2 / (w^T Q w)
  double euclid_envelope(int n) const;
  // Euclidean radius of the ball {q(w) <= r2}
  double euclid_radius(int n, double r2) const;

 private:
  GaussianParam() = default;
  bool scalar_ = true;
  Rat s2_;
  double s_ = 0.0;
  RatMat sigma_, sigma_inv_;
  Eigen::MatrixXd sigma_inv_sqrt_;
  double sigma_norm_inf_ = 0.0;
};

double rho_point(const std::vector<double>& x, const GaussianParam& p);

// One weighted term family of a certified sum.
struct Channel {
  enum Kind {
    kOne,       // 1
    kCoord,     // w_i
    kCoordPair, // w_i w_j
    kNorm,      // ||w||
    kCos,       // cos(2 pi <w, a>)
    kCosCos,    // cos(2 pi <w, a>) cos(2 pi <w, b>)
    kSinSin,    // sin(2 pi <w, a>) sin(2 pi <w, b>)
    kDotSq,     // <w, a>^2
    kDotDot,    // <w, a> <w, b>
    kQuadQuad,  // <w, a>^2 <w, b>^2
  };
  Kind kind = kOne;
  int i = 0, j = 0;
  std::vector<double> a, b;
  double tail_target = 0.0;  // absolute truncation budget for this channel
};

// Certified truncated summation over cosets of one lattice under one
// Gaussian parameter. Construction does the per-(lattice, parameter)
// work: the coefficient-space form, its Cholesky factor with an exactly
// verified residual, and rigorous upper bounds on the full-lattice mass
// used by the tail bound. Each sums() call picks the truncation radius
// from the channel budgets, enumerates once out to twice that radius,
// accumulates every channel in increasing-norm order with compensated
// summation, and validates the certificate by comparing against the
// doubled-radius sum.
class Evaluator {
 public:
  Evaluator(Lattice lattice, GaussianParam param, uint64_t cap = kDefaultEnumCap);

  const Lattice& lattice() const { return lattice_; }
  const GaussianParam& param() const { return param_; }

  std::vector<CertifiedValue> sums(const RatVec& shift, const std::vector<Channel>& channels) const;
  CertifiedValue mass(const RatVec& shift, double eps) const;
  // rigorous upper bound on the full-lattice mass rho_Q(L)
  double lattice_mass_upper() const { return mass_upper_; }

 private:
  double channel_tail(const Channel& ch, double c) const;
  double solve_channel_radius(const Channel& ch) const;

  Lattice lattice_;
  GaussianParam param_;
  FormContext ctx_;
  uint64_t cap_;
  double delta_ = 0.1;      // envelope widening s -> s(1+delta)
  double mass_upper_ = 0;   // upper bound on rho_Q(L)
  double mass_upper_wide_ = 0;  // same at the widened parameter
};

CertifiedValue mass(const Coset& c, const GaussianParam& p, double eps, uint64_t cap = kDefaultEnumCap);

CertifiedValue periodic_gaussian(const Lattice& L, const GaussianParam& p, const RatVec& x, double eps,
                                 uint64_t cap = kDefaultEnumCap);

// Fourier-side evaluation of the same coset mass:
//   rho_s(L + x) = s^n / det(L) * sum_{w in L*} exp(-pi s^2 ||w||^2) cos(2 pi <w, x>)
CertifiedValue dual_mass(const Coset& c, const GaussianParam& p, double eps, uint64_t cap = kDefaultEnumCap);

// Expectations over w ~ D_L: E[cos(2 pi <w,x>)], E[cos(2 pi <w,y>)],
// E[cos cos], E[sin sin].
struct CosineMoments {
  CertifiedValue cos_x, cos_y, cos_cos, sin_sin;
};
CosineMoments cosine_moments(const Lattice& L, const RatVec& x, const RatVec& y, double eps,
                             uint64_t cap = kDefaultEnumCap);

// The exact coset-split identity behind the main inequality:
//   rho(L+x) rho(L+y) = sum_{c in L/2L} rho_sqrt2(2L+c+x+y) rho_sqrt2(2L+c+x-y)
struct SplitReport {
  CertifiedValue lhs;  // rho(L+x) * rho(L+y)
  std::vector<std::pair<CertifiedValue, CertifiedValue>> per_coset;
  CertifiedValue rhs;  // sum of per-coset products
};
SplitReport theta_split_identity(const Lattice& L, const RatVec& x, const RatVec& y, double eps,
                                 uint64_t cap = kDefaultEnumCap);

// Interval quotient used for periodic Gaussians: v1/v2 with the error
// joined from (v1 +- e1)/(v2 -+ e2); requires v2 - e2 > 0.
CertifiedValue certified_quotient(const CertifiedValue& num, const CertifiedValue& den);

}  // namespace lg
