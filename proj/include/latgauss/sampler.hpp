#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "latgauss/moments.hpp"

namespace lg {

// A reproducible batch of discrete Gaussian draws. The sampler is an
// exact inverse-CDF scheme over the truncated support: the support is
// enumerated out to a radius whose omitted tail is at most tv_bound of
// the total mass, an alias table is built deterministically over the
// increasing-norm point order, and draws come from a seeded mt19937_64.
// Identical (coset, param, count, seed, tv_eps) give identical batches
// on every platform.
struct SampleBatch {
  Coset coset;
  GaussianParam param;
  uint64_t seed = 0;
  int count = 0;
  double tv_bound = 0.0;  // total-variation distance from the ideal distribution
  std::vector<std::vector<double>> samples;
  std::vector<std::vector<int32_t>> coefficients;  // exact membership: B z + x
};

SampleBatch sample(const Coset& c, const GaussianParam& p, int count, uint64_t seed, double tv_eps,
                   uint64_t cap = kDefaultEnumCap);

// Sample mean / second moment / covariance; err fields carry standard
// errors rather than certified bounds.
MomentReport empirical_moments(const SampleBatch& b);

// Chi-square goodness of fit of the batch against the truncated
// distribution, pooling support cells with expected count below
// min_expected into one cell. Returns the p-value.
struct GofResult {
  double statistic = 0.0;
  int dof = 0;
  double p_value = 0.0;
};
GofResult chi_square_gof(const SampleBatch& b, double min_expected = 5.0);

// CSV serialization: a JSON header line with seed/param/tv_bound, then
// one sample per row.
std::string batch_to_csv(const SampleBatch& b);

// Regularized upper incomplete gamma Q(a, x); the chi-square survival
// function is Q(dof/2, stat/2).
double gamma_q(double a, double x);

}  // namespace lg
