#pragma once

#include <utility>
#include <vector>

#include "latgauss/gaussian.hpp"

namespace lg {

using Vec = std::vector<double>;
using Mat = std::vector<std::vector<double>>;

// Mean, second moment and covariance of the discrete Gaussian on a
// coset, each entry with its own absolute error bound.
struct MomentReport {
  CertifiedValue normalizer;  // the coset mass (empirical reports: 1 exactly)
  Vec mean, mean_err;
  Mat second, second_err;
  Mat covariance, covariance_err;
  // exploratory first absolute moment E[||w||]; reported, never asserted
  double mean_norm = 0.0, mean_norm_err = 0.0;
};

// Value, gradient and Hessian of the periodic Gaussian at x, assembled
// from the moment identities grad f / f = -(2 pi / s^2) E[w] and
// H f / f = (4 pi^2 / s^4) E[w w^T] - (2 pi / s^2) I.
struct DerivativeReport {
  CertifiedValue f;
  Vec grad, grad_err;
  Mat hess, hess_err;
};

MomentReport moment_report(const Coset& c, const GaussianParam& p, double eps,
                           uint64_t cap = kDefaultEnumCap);

DerivativeReport derivative_report(const Lattice& L, const GaussianParam& p, const RatVec& x, double eps,
                                   uint64_t cap = kDefaultEnumCap);

// lhs = E[<y,u>^2 <y,v>^2], rhs = E[<y,u>^2] E[<y,v>^2] + 2 E[<y,u><y,v>]^2
// over y ~ D_L.
std::pair<CertifiedValue, CertifiedValue> fourth_moment_form(const Lattice& L, const Vec& u, const Vec& v,
                                                             double eps, uint64_t cap = kDefaultEnumCap);

// E[||w||^2] with certified error, read off a MomentReport's second moment.
CertifiedValue trace_second(const MomentReport& r);

}  // namespace lg
