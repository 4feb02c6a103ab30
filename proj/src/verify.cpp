#include "latgauss/verify.hpp"

#include <Eigen/Eigenvalues>
#include <atomic>
#include <chrono>
#include <cmath>
#include <thread>

#include "latgauss/serialize.hpp"

namespace lg {

const char* status_name(Status s) {
  switch (s) {
    case Status::kHolds:
      return "HOLDS";
    case Status::kInconclusive:
      return "INCONCLUSIVE";
    case Status::kViolated:
      return "VIOLATED";
  }
  return "?";
}

const char* ensemble_kind_name(InstanceEnsemble::Kind k) {
  switch (k) {
    case InstanceEnsemble::kIntegerBasis:
      return "integer-basis";
    case InstanceEnsemble::kDiagonal:
      return "diagonal";
    case InstanceEnsemble::kRotatedInteger:
      return "rotated-integer";
  }
  return "?";
}

Verdict make_leq_verdict(std::string name, Interval lhs, Interval rhs, std::string instance) {
  Verdict v;
  v.name = std::move(name);
  v.lhs = lhs;
  v.rhs = rhs;
  v.margin = rhs.lo - lhs.hi;
  v.instance = std::move(instance);
  if (lhs.hi <= rhs.lo) {
    v.status = Status::kHolds;
  } else if (lhs.lo > rhs.hi) {
    v.status = Status::kViolated;
  } else {
    v.status = Status::kInconclusive;
  }
  return v;
}

Verdict make_psd_verdict(std::string name, const Mat& value, const Mat& err, std::string instance) {
  int n = static_cast<int>(value.size());
  Eigen::MatrixXd d(n, n);
  double max_err = 0.0, max_abs = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      d(i, j) = 0.5 * (value[i][j] + value[j][i]);
      max_err = std::max(max_err, err[i][j]);
      max_abs = std::max(max_abs, std::fabs(value[i][j]));
    }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(d);
  double lambda_min = es.eigenvalues().minCoeff();
  // entrywise error bounds move eigenvalues by at most n * err; the
  // extra term covers the floating eigensolve itself
  double tol = n * max_err + 1e-13 * (max_abs + 1.0);

  Verdict v;
  v.name = std::move(name);
  v.lhs = Interval::pm(lambda_min, tol);
  v.rhs = Interval::exact(0.0);
  v.margin = lambda_min + tol;
  v.instance = std::move(instance);
  v.status = lambda_min >= -tol ? Status::kHolds : Status::kViolated;
  return v;
}

Verdict with_tightening(const std::function<Verdict(double)>& check, double eps, int rounds) {
  Verdict v = check(eps);
  for (int r = 0; r < rounds && v.status == Status::kInconclusive; ++r) {
    eps /= 100.0;
    v = check(eps);
  }
  return v;
}

// ---------------------------------------------------------------------------
// individual checks

Verdict check_main_inequality(const Lattice& L, const RatVec& x, const RatVec& y, const GaussianParam& p,
                              double eps) {
  if (!(eps > 0.0)) throw Error("eps must be positive");
  int n = L.dim();
  Evaluator ev(L, p, kDefaultEnumCap);
  RatVec xy(n), xmy(n);
  for (int i = 0; i < n; ++i) {
    xy[i] = x[i] + y[i];
    xmy[i] = x[i] - y[i];
  }
  Interval m0 = Interval::of(ev.mass(RatVec(n, Rat(0)), eps));
  Interval mx = Interval::of(ev.mass(x, eps));
  Interval my = Interval::of(ev.mass(y, eps));
  Interval mxy = Interval::of(ev.mass(xy, eps));
  Interval mxmy = Interval::of(ev.mass(xmy, eps));
  Interval lhs = mx.square() * my.square();
  Interval rhs = m0.square() * mxy * mxmy;
  return make_leq_verdict("main_inequality", lhs, rhs, "");
}

std::vector<Verdict> check_corollaries(const Lattice& L, const RatVec& x, const RatVec& y, double eps) {
  if (!(eps > 0.0)) throw Error("eps must be positive");
  int n = L.dim();
  Evaluator ev(L, GaussianParam::scalar(1.0), kDefaultEnumCap);
  RatVec xy(n), xmy(n), x2(n);
  for (int i = 0; i < n; ++i) {
    xy[i] = x[i] + y[i];
    xmy[i] = x[i] - y[i];
    x2[i] = x[i] * 2;
  }
  CertifiedValue m0 = ev.mass(RatVec(n, Rat(0)), eps);
  auto f_of = [&](const RatVec& v) { return Interval::of(certified_quotient(ev.mass(v, eps), m0)); };
  Interval fx = f_of(x), fy = f_of(y), fxy = f_of(xy), fxmy = f_of(xmy), f2x = f_of(x2);

  std::vector<Verdict> out;
  out.push_back(make_leq_verdict("periodic_product", fx.square() * fy.square(), fxy * fxmy, ""));
  out.push_back(make_leq_verdict("double_shift", fx.square().square(), f2x, ""));
  out.push_back(make_leq_verdict("additive_mean", fx * fy, (fxy + fxmy).scaled(0.5), ""));

  CosineMoments cm = cosine_moments(L, x, y, eps);
  Interval ecx = Interval::of(cm.cos_x), ecy = Interval::of(cm.cos_y);
  Interval ecc = Interval::of(cm.cos_cos), ess = Interval::of(cm.sin_sin);
  // rearranged with both sides nonnegative: interval subtraction of
  // squares would lose the sign
  out.push_back(
      make_leq_verdict("strong_cos_correlation", ecx.square() * ecy.square() + ess.square(), ecc.square(), ""));
  out.push_back(make_leq_verdict("cos_correlation", ecx * ecy, ecc, ""));
  return out;
}

Verdict check_hessian_domination(const Lattice& L, const RatVec& x, double eps) {
  int n = L.dim();
  GaussianParam p = GaussianParam::scalar(1.0);
  DerivativeReport at_x = derivative_report(L, p, x, eps);
  DerivativeReport at_0 = derivative_report(L, p, RatVec(n, Rat(0)), eps);
  Interval f = Interval::of(at_x.f);

  Mat value(n, Vec(n, 0.0)), err(n, Vec(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Interval hx = Interval::pm(at_x.hess[i][j], at_x.hess_err[i][j]) / f;
      Interval h0 = Interval::pm(at_0.hess[i][j], at_0.hess_err[i][j]);
      Interval gg = Interval::pm(at_x.grad[i], at_x.grad_err[i]) *
                    Interval::pm(at_x.grad[j], at_x.grad_err[j]) / f.square();
      Interval d = hx - h0 - gg;
      value[i][j] = d.mid();
      err[i][j] = d.rad();
    }
  return make_psd_verdict("hessian_domination", value, err, "");
}

Verdict check_covariance_domination(const Lattice& L, const RatVec& x, double eps) {
  int n = L.dim();
  GaussianParam p = GaussianParam::scalar(1.0);
  MomentReport mx = moment_report(Coset(L, x), p, eps);
  MomentReport m0 = moment_report(Coset(L, RatVec(n, Rat(0))), p, eps);
  Mat value(n, Vec(n, 0.0)), err(n, Vec(n, 0.0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Interval d = Interval::pm(mx.covariance[i][j], mx.covariance_err[i][j]) -
                   Interval::pm(m0.second[i][j], m0.second_err[i][j]);
      value[i][j] = d.mid();
      err[i][j] = d.rad();
    }
  return make_psd_verdict("covariance_domination", value, err, "");
}

Verdict check_fourth_moment(const Lattice& L, const Vec& u, const Vec& v, double eps) {
  auto [lhs, rhs] = fourth_moment_form(L, u, v, eps);
  // claim is lhs >= rhs
  return make_leq_verdict("fourth_moment", Interval::of(rhs), Interval::of(lhs), "");
}

Verdict check_monotone_s(const Lattice& L, const RatVec& x, const std::vector<double>& s_grid, double eps) {
  if (s_grid.size() < 2) throw Error("s grid needs at least two points");
  for (size_t i = 1; i < s_grid.size(); ++i)
    if (!(s_grid[i] > s_grid[i - 1])) throw Error("s grid must be increasing");
  int n = L.dim();

  Verdict worst;
  bool first = true;
  auto absorb = [&](Verdict v) {
    if (first || static_cast<int>(v.status) > static_cast<int>(worst.status) ||
        (v.status == worst.status && v.margin < worst.margin)) {
      worst = std::move(v);
      first = false;
    }
  };

  std::vector<Interval> f(s_grid.size());
  for (size_t i = 0; i < s_grid.size(); ++i) {
    f[i] = Interval::of(periodic_gaussian(L, GaussianParam::scalar(s_grid[i]), x, eps));
    if (i > 0) absorb(make_leq_verdict("monotone_s", f[i - 1], f[i], ""));
  }
  // derivative form at each grid point:
  //   E_{L+x,s}[||w||^2] - E_{L,s}[||w||^2] >= ||E_{L+x,s}[w]||^2
  for (double s : s_grid) {
    GaussianParam p = GaussianParam::scalar(s);
    MomentReport mx = moment_report(Coset(L, x), p, eps);
    MomentReport m0 = moment_report(Coset(L, RatVec(n, Rat(0))), p, eps);
    Interval mean_sq = Interval::exact(0.0);
    for (int i = 0; i < n; ++i) mean_sq = mean_sq + Interval::pm(mx.mean[i], mx.mean_err[i]).square();
    Interval tx = Interval::of(trace_second(mx));
    Interval t0 = Interval::of(trace_second(m0));
    absorb(make_leq_verdict("monotone_s", mean_sq + t0, tx, ""));
  }
  worst.name = "monotone_s";
  return worst;
}

Verdict check_monotone_sigma(const Lattice& L, const RatVec& x, const RatMat& sigma_prime,
                             const RatMat& sigma, double eps) {
  int n = L.dim();
  if (sigma_prime.rows() != n || sigma.rows() != n) throw DimensionMismatch("sigma dimension mismatch");
  RatMat diff = sigma - sigma_prime;
  Eigen::MatrixXd d(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d(i, j) = rat_to_double(diff.at(i, j));
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (d + d.transpose()));
  if (es.eigenvalues().minCoeff() < -1e-12) {
    throw NotComparable("sigma' <= sigma fails; the monotonicity claim does not apply");
  }
  Interval lo = Interval::of(periodic_gaussian(L, GaussianParam::matrix(sigma_prime), x, eps));
  Interval hi = Interval::of(periodic_gaussian(L, GaussianParam::matrix(sigma), x, eps));
  return make_leq_verdict("monotone_sigma", lo, hi, "");
}

Verdict check_sublattice_monotone(const Lattice& L, const SublatticeRep& M, const RatVec& x, double eps) {
  if (!M.parent().same_basis(L)) throw ParentMismatch("sublattice has a different parent lattice");
  GaussianParam p = GaussianParam::scalar(1.0);
  Interval fm = Interval::of(periodic_gaussian(M.as_lattice(), p, x, eps));
  Interval fl = Interval::of(periodic_gaussian(L, p, x, eps));
  return make_leq_verdict("monotone_sublattice", fm, fl, "");
}

Verdict check_positive_correlation(const Lattice& L, const SublatticeRep& M, const SublatticeRep& N,
                                   double eps) {
  if (!M.parent().same_basis(L) || !N.parent().same_basis(L))
    throw ParentMismatch("sublattices have a different parent lattice");
  SublatticeRep I = intersect(M, N);
  GaussianParam p = GaussianParam::scalar(1.0);
  CertifiedValue mL = mass(Coset(L, RatVec(L.dim(), Rat(0))), p, eps);
  CertifiedValue mM = mass(Coset(M.as_lattice(), RatVec(L.dim(), Rat(0))), p, eps);
  CertifiedValue mN = mass(Coset(N.as_lattice(), RatVec(L.dim(), Rat(0))), p, eps);
  CertifiedValue mI = mass(Coset(I.as_lattice(), RatVec(L.dim(), Rat(0))), p, eps);
  Interval lhs = Interval::of(certified_quotient(mM, mL)) * Interval::of(certified_quotient(mN, mL));
  Interval rhs = Interval::of(certified_quotient(mI, mL));
  return make_leq_verdict("positive_correlation", lhs, rhs, "");
}

// ---------------------------------------------------------------------------
// instance generation

namespace {

uint64_t splitmix64(uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// uniform integer in [lo, hi], platform-independent
long uniform_long(std::mt19937_64& rng, long lo, long hi) {
  return lo + static_cast<long>(rng() % static_cast<uint64_t>(hi - lo + 1));
}

IMat random_nonsingular(std::mt19937_64& rng, int n, long bound) {
  IMat m(n, n);
  do {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m.at(i, j) = uniform_long(rng, -bound, bound);
  } while (m.determinant() == 0);
  return m;
}

// exactly orthogonal rational rotation built from Pythagorean pairs
RatMat random_rotation(std::mt19937_64& rng, int n) {
  RatMat R = RatMat::identity(n);
  if (n == 1) return R;
  for (int rep = 0; rep < 2 * n; ++rep) {
    int i = static_cast<int>(uniform_long(rng, 0, n - 1));
    int j = static_cast<int>(uniform_long(rng, 0, n - 2));
    if (j >= i) ++j;
    long a = uniform_long(rng, 1, 4), b = uniform_long(rng, 1, 4);
    Rat den(a * a + b * b);
    Rat c = Rat(a * a - b * b) / den;
    Rat s = Rat(2 * a * b) / den;
    RatMat G = RatMat::identity(n);
    G.at(i, i) = c;
    G.at(j, j) = c;
    G.at(i, j) = -s;
    G.at(j, i) = s;
    R = G * R;
  }
  return R;
}

IMat random_small_index_sub(std::mt19937_64& rng, int n) {
  while (true) {
    IMat x(n, n);
    Int det(1);
    for (int i = 0; i < n; ++i) {
      long d = uniform_long(rng, 1, 3);
      x.at(i, i) = d;
      det *= d;
      for (int j = 0; j < i; ++j) x.at(i, j) = uniform_long(rng, -2, 2);
    }
    if (det <= 16) return x;
  }
}

}  // namespace

VerifyInstance make_instance(const InstanceEnsemble& e, uint64_t trial_seed) {
  std::mt19937_64 rng(trial_seed);
  int n = 1 + static_cast<int>(rng() % static_cast<uint64_t>(e.dim_max));

  RatMat basis_cols(n, n);
  switch (e.kind) {
    case InstanceEnsemble::kIntegerBasis: {
      IMat m = random_nonsingular(rng, n, e.entry_bound);
      basis_cols = m.to_rational();
      break;
    }
    case InstanceEnsemble::kDiagonal: {
      basis_cols = RatMat::identity(n);
      for (int i = 0; i < n; ++i) basis_cols.at(i, i) = Rat(uniform_long(rng, 1, e.entry_bound));
      break;
    }
    case InstanceEnsemble::kRotatedInteger: {
      IMat m = random_nonsingular(rng, n, e.entry_bound);
      basis_cols = random_rotation(rng, n) * m.to_rational();
      break;
    }
  }

  VerifyInstance inst{Lattice::from_basis_columns(basis_cols), {}, {}, 1.0, {}, {}, {}, {}, {}, {}, ""};

  // shifts in the fundamental parallelepiped, kept away from the corners
  // (the min-shift rule: near-lattice shifts make every inequality tight)
  RatVec ux(n), uy(n);
  for (int i = 0; i < n; ++i) {
    ux[i] = frac(uniform_long(rng, 4, 60), 64);
    uy[i] = frac(uniform_long(rng, 4, 60), 64);
  }
  inst.x = inst.lattice.basis() * ux;
  inst.y = inst.lattice.basis() * uy;

  inst.s = 0.5 + static_cast<double>(uniform_long(rng, 0, 448)) / 128.0;

  inst.u.assign(n, 0.0);
  inst.v.assign(n, 0.0);
  auto fill_dir = [&](Vec& d) {
    bool all_zero = true;
    do {
      all_zero = true;
      for (int i = 0; i < n; ++i) {
        d[i] = static_cast<double>(uniform_long(rng, -3, 3));
        if (d[i] != 0.0) all_zero = false;
      }
    } while (all_zero);
  };
  fill_dir(inst.u);
  fill_dir(inst.v);

  inst.sub_x = random_small_index_sub(rng, n);
  inst.sub_y = random_small_index_sub(rng, n);

  RatMat A(n, n), C(n, n);
  bool c_zero;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A.at(i, j) = Rat(uniform_long(rng, -2, 2));
  do {
    c_zero = true;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        C.at(i, j) = Rat(uniform_long(rng, -1, 1));
        if (C.at(i, j) != 0) c_zero = false;
      }
  } while (c_zero);
  inst.sigma_lo = A.transpose() * A + RatMat::identity(n);
  inst.sigma_hi = inst.sigma_lo + C.transpose() * C;

  double s0 = std::min(inst.s, 1.8);
  inst.s_grid = {s0, 1.5 * s0, 2.25 * s0};

  ojson desc{{"trial_seed", trial_seed},
             {"kind", ensemble_kind_name(e.kind)},
             {"n", n},
             {"lattice", lattice_to_json(inst.lattice)},
             {"x", vec_to_json(inst.x)},
             {"y", vec_to_json(inst.y)},
             {"s", inst.s}};
  inst.descriptor = desc.dump();
  return inst;
}

// ---------------------------------------------------------------------------
// campaign

namespace {

using CheckFn = std::function<std::vector<Verdict>(const VerifyInstance&, double)>;

std::map<std::string, CheckFn> check_registry() {
  std::map<std::string, CheckFn> reg;
  reg["main_inequality"] = [](const VerifyInstance& in, double eps) {
    return std::vector<Verdict>{
        check_main_inequality(in.lattice, in.x, in.y, GaussianParam::scalar(in.s), eps)};
  };
  reg["corollaries"] = [](const VerifyInstance& in, double eps) {
    // exercise the scale by folding s into the lattice: f_{L,s} = f_{L/s}
    Rat inv_s = Rat(2) / rat_from_double(2.0 * in.s);
    Lattice Ls = Lattice::from_basis_columns(in.lattice.basis().scaled(inv_s));
    RatVec xs(in.x.size()), ys(in.y.size());
    for (size_t i = 0; i < in.x.size(); ++i) {
      xs[i] = in.x[i] * inv_s;
      ys[i] = in.y[i] * inv_s;
    }
    return check_corollaries(Ls, xs, ys, eps);
  };
  reg["hessian_domination"] = [](const VerifyInstance& in, double eps) {
    return std::vector<Verdict>{check_hessian_domination(in.lattice, in.x, eps)};
  };
  reg["covariance_domination"] = [](const VerifyInstance& in, double eps) {
    return std::vector<Verdict>{check_covariance_domination(in.lattice, in.x, eps)};
  };
  reg["fourth_moment"] = [](const VerifyInstance& in, double eps) {
    return std::vector<Verdict>{check_fourth_moment(in.lattice, in.u, in.v, eps)};
  };
  reg["monotone_s"] = [](const VerifyInstance& in, double eps) {
    return std::vector<Verdict>{check_monotone_s(in.lattice, in.x, in.s_grid, eps)};
  };
  reg["monotone_sigma"] = [](const VerifyInstance& in, double eps) {
    return std::vector<Verdict>{check_monotone_sigma(in.lattice, in.x, in.sigma_lo, in.sigma_hi, eps)};
  };
  reg["monotone_sublattice"] = [](const VerifyInstance& in, double eps) {
    return std::vector<Verdict>{
        check_sublattice_monotone(in.lattice, SublatticeRep(in.lattice, in.sub_x), in.x, eps)};
  };
  reg["positive_correlation"] = [](const VerifyInstance& in, double eps) {
    return std::vector<Verdict>{check_positive_correlation(
        in.lattice, SublatticeRep(in.lattice, in.sub_x), SublatticeRep(in.lattice, in.sub_y), eps)};
  };
  return reg;
}

std::vector<Verdict> run_with_tightening(const CheckFn& fn, const VerifyInstance& inst, double eps,
                                         int rounds = 2) {
  std::vector<Verdict> out = fn(inst, eps);
  double e = eps;
  for (int r = 0; r < rounds; ++r) {
    bool any = false;
    for (const auto& v : out)
      if (v.status == Status::kInconclusive) any = true;
    if (!any) break;
    e /= 100.0;
    std::vector<Verdict> re = fn(inst, e);
    for (size_t i = 0; i < out.size() && i < re.size(); ++i) {
      if (out[i].status == Status::kInconclusive) out[i] = re[i];
    }
  }
  return out;
}

}  // namespace

CampaignSummary run_campaign(const InstanceEnsemble& e, int trials, std::vector<std::string> checks,
                             double eps, int threads) {
  if (trials < 1) throw Error("trials must be at least 1");
  if (!(eps > 0.0)) throw Error("eps must be positive");
  auto registry = check_registry();
  if (checks.empty()) checks = all_check_names();
  for (const auto& name : checks) {
    if (!registry.count(name)) throw Error("unknown check: " + name);
  }

  auto t0 = std::chrono::steady_clock::now();

  int T = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
  T = std::max(1, std::min({T, 16, trials}));

  std::vector<std::vector<Verdict>> results(trials);
  std::vector<std::string> failures(trials);
  std::atomic<int> next{0};

  auto worker = [&]() {
    while (true) {
      int i = next.fetch_add(1);
      if (i >= trials) break;
      try {
        uint64_t trial_seed = splitmix64(e.seed ^ (0x51a2b3c4d5e6f708ULL + static_cast<uint64_t>(i)));
        VerifyInstance inst = make_instance(e, trial_seed);
        std::vector<Verdict> all;
        for (const auto& name : checks) {
          auto verdicts = run_with_tightening(registry.at(name), inst, eps);
          for (auto& v : verdicts) {
            if (v.instance.empty()) v.instance = inst.descriptor;
            all.push_back(std::move(v));
          }
        }
        results[i] = std::move(all);
      } catch (const std::exception& ex) {
        failures[i] = ex.what();
      }
    }
  };

  std::vector<std::thread> pool;
  for (int t = 0; t < T; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  int nfail = 0;
  std::string first_failure;
  for (int i = 0; i < trials; ++i) {
    if (!failures[i].empty()) {
      if (nfail == 0) first_failure = "trial " + std::to_string(i) + ": " + failures[i];
      ++nfail;
    }
  }
  if (nfail > 0) {
    throw Error("campaign aborted, " + std::to_string(nfail) + " trial(s) failed; first: " + first_failure);
  }

  CampaignSummary s;
  s.ensemble = e;
  s.trials = trials;
  s.eps = eps;
  for (int i = 0; i < trials; ++i) {
    for (auto& v : results[i]) {
      CheckCounts& cc = s.per_check[v.name];
      switch (v.status) {
        case Status::kHolds:
          cc.holds++;
          break;
        case Status::kInconclusive:
          cc.inconclusive++;
          break;
        case Status::kViolated:
          cc.violated++;
          break;
      }
      cc.worst_margin = std::min(cc.worst_margin, v.margin);
      if (v.status != Status::kHolds && cc.non_holds.size() < 100) {
        cc.non_holds.push_back(v.instance);
      }
      ++s.verdict_total;
      if (v.status == Status::kViolated) ++s.violated_total;
      if (v.status == Status::kInconclusive) ++s.inconclusive_total;
    }
  }
  s.inconclusive_rate = s.verdict_total ? static_cast<double>(s.inconclusive_total) / s.verdict_total : 0.0;
  s.elapsed_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return s;
}

}  // namespace lg
