#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "latgauss/moments.hpp"

namespace lg {

enum class Status { kHolds, kInconclusive, kViolated };

const char* status_name(Status s);

// Outcome of one inequality check. For scalar <=-claims: HOLDS iff
// lhs.hi <= rhs.lo, VIOLATED iff lhs.lo > rhs.hi, INCONCLUSIVE
// otherwise; margin = rhs.lo - lhs.hi. Positive-semidefinite claims
// follow the min-eigenvalue rule: HOLDS iff the computed smallest
// eigenvalue is >= -(n * entrywise err), and the margin is the distance
// to that threshold. A VIOLATED verdict on any of these checks signals
// an implementation defect, never a fact about the mathematics.
struct Verdict {
  std::string name;
  Status status = Status::kInconclusive;
  Interval lhs, rhs;
  double margin = 0.0;
  std::string instance;  // JSON descriptor of the inputs
};

Verdict make_leq_verdict(std::string name, Interval lhs, Interval rhs, std::string instance);
Verdict make_psd_verdict(std::string name, const Mat& value, const Mat& err, std::string instance);

// rho(L+x)^2 rho(L+y)^2 <= rho(L)^2 rho(L+x+y) rho(L+x-y)
Verdict check_main_inequality(const Lattice& L, const RatVec& x, const RatVec& y, const GaussianParam& p,
                              double eps);

// the five corollary forms, in order:
//   periodic_product        f(x)^2 f(y)^2 <= f(x+y) f(x-y)
//   double_shift            f(x)^4 <= f(2x)
//   additive_mean           f(x) f(y) <= (f(x+y) + f(x-y)) / 2
//   strong_cos_correlation  E[cos_x]^2 E[cos_y]^2 + E[sin sin]^2 <= E[cos cos]^2
//   cos_correlation         E[cos_x] E[cos_y] <= E[cos cos]
std::vector<Verdict> check_corollaries(const Lattice& L, const RatVec& x, const RatVec& y, double eps);

// H f(x) / f(x) >= H f(0) + grad f(x) grad f(x)^T / f(x)^2  (psd sense)
Verdict check_hessian_domination(const Lattice& L, const RatVec& x, double eps);

// cov(D_{L+x}) >= E_{D_L}[w w^T]  (psd sense)
Verdict check_covariance_domination(const Lattice& L, const RatVec& x, double eps);

// E[<y,u>^2 <y,v>^2] >= E[<y,u>^2] E[<y,v>^2] + 2 E[<y,u><y,v>]^2
Verdict check_fourth_moment(const Lattice& L, const Vec& u, const Vec& v, double eps);

// f_{L,s}(x) nondecreasing along the grid, plus the derivative bound
// E_{L+x,s}[||w||^2] - E_{L,s}[||w||^2] >= ||E_{L+x,s}[w]||^2 at each s
Verdict check_monotone_s(const Lattice& L, const RatVec& x, const std::vector<double>& s_grid, double eps);

// sigma' <= sigma (psd) implies f_{L,sigma'}(x) <= f_{L,sigma}(x);
// throws NotComparable unless min eig(sigma - sigma') >= -1e-12
Verdict check_monotone_sigma(const Lattice& L, const RatVec& x, const RatMat& sigma_prime,
                             const RatMat& sigma, double eps);

// f_M(x) <= f_L(x) for a sublattice M of L
Verdict check_sublattice_monotone(const Lattice& L, const SublatticeRep& M, const RatVec& x, double eps);

// (rho(M)/rho(L)) (rho(N)/rho(L)) <= rho(M cap N)/rho(L)
Verdict check_positive_correlation(const Lattice& L, const SublatticeRep& M, const SublatticeRep& N,
                                   double eps);

// Re-runs an INCONCLUSIVE check with eps/100, up to two tightening
// rounds; the inequalities are frequently tight, and tightening
// separates tightness from defects.
Verdict with_tightening(const std::function<Verdict(double)>& check, double eps, int rounds = 2);

// Seeded generator of random verification instances.
struct InstanceEnsemble {
  enum Kind { kIntegerBasis, kDiagonal, kRotatedInteger };
  Kind kind = kIntegerBasis;
  int dim_max = 3;       // dimension drawn uniformly from {1, ..., dim_max}
  long entry_bound = 5;  // basis entries in [-entry_bound, entry_bound]
  uint64_t seed = 0;
};

const char* ensemble_kind_name(InstanceEnsemble::Kind k);

// One random instance: lattice, two shifts inside the fundamental
// parallelepiped (kept away from lattice points), scalar parameter in
// [1/2, 4], plus auxiliary data for the specialized checks.
struct VerifyInstance {
  Lattice lattice;
  RatVec x, y;
  double s = 1.0;
  Vec u, v;                     // fourth-moment directions
  IMat sub_x, sub_y;            // sublattice coefficients, |det| <= 16
  RatMat sigma_lo, sigma_hi;    // ordered pair for the matrix check
  std::vector<double> s_grid;
  std::string descriptor;      // JSON
};

VerifyInstance make_instance(const InstanceEnsemble& e, uint64_t trial_seed);

inline const std::vector<std::string>& all_check_names() {
  static const std::vector<std::string> names = {
      "main_inequality", "corollaries",     "hessian_domination",  "covariance_domination",
      "fourth_moment",   "monotone_s",      "monotone_sigma",      "monotone_sublattice",
      "positive_correlation"};
  return names;
}

struct CheckCounts {
  int holds = 0;
  int inconclusive = 0;
  int violated = 0;
  double worst_margin = std::numeric_limits<double>::infinity();
  std::vector<std::string> non_holds;  // instance descriptors
};

struct CampaignSummary {
  InstanceEnsemble ensemble;
  int trials = 0;
  double eps = 0.0;
  std::map<std::string, CheckCounts> per_check;
  int violated_total = 0;
  int inconclusive_total = 0;
  int verdict_total = 0;
  double inconclusive_rate = 0.0;
  double elapsed_seconds = 0.0;
};

// Runs the selected checks (empty list = all) on `trials` seeded random
// instances. Trials run in parallel; each derives its own seed from
// (ensemble seed, trial index), so the summary is independent of
// scheduling. threads = 0 picks the hardware count.
CampaignSummary run_campaign(const InstanceEnsemble& e, int trials, std::vector<std::string> checks,
                             double eps, int threads = 0);

}  // namespace lg
