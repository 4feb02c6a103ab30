#include "latgauss/moments.hpp"

#include <cmath>

namespace lg {

namespace {

struct MomentSums {
  CertifiedValue mass;
  std::vector<CertifiedValue> coord;           // n entries
  std::vector<std::vector<CertifiedValue>> pair;  // upper triangle
  CertifiedValue norm;
};

MomentSums raw_moment_sums(const Evaluator& ev, const RatVec& shift, double eps) {
  int n = ev.lattice().dim();
  std::vector<Channel> chans;
  {
    Channel c;
    c.kind = Channel::kOne;
    c.tail_target = 0.25 * eps;
    chans.push_back(c);
  }
  for (int i = 0; i < n; ++i) {
    Channel c;
    c.kind = Channel::kCoord;
    c.i = i;
    c.tail_target = 0.25 * eps;
    chans.push_back(c);
  }
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      Channel c;
      c.kind = Channel::kCoordPair;
      c.i = i;
      c.j = j;
      c.tail_target = 0.25 * eps;
      chans.push_back(c);
    }
  {
    Channel c;
    c.kind = Channel::kNorm;
    c.tail_target = 0.25 * eps;
    chans.push_back(c);
  }
  auto r = ev.sums(shift, chans);

  MomentSums out;
  size_t idx = 0;
  out.mass = r[idx++];
  out.coord.assign(r.begin() + 1, r.begin() + 1 + n);
  idx = 1 + n;
  out.pair.assign(n, std::vector<CertifiedValue>(n));
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) out.pair[i][j] = r[idx++];
  out.norm = r[idx];
  return out;
}

MomentReport assemble_report(const MomentSums& s, int n) {
  if (!(s.mass.value - s.mass.err > 0.0)) throw Error("coset mass below certifiable range");
  MomentReport rep;
  rep.normalizer = s.mass;
  rep.mean.assign(n, 0.0);
  rep.mean_err.assign(n, 0.0);
  rep.second.assign(n, Vec(n, 0.0));
  rep.second_err.assign(n, Vec(n, 0.0));
  rep.covariance.assign(n, Vec(n, 0.0));
  rep.covariance_err.assign(n, Vec(n, 0.0));

  for (int i = 0; i < n; ++i) {
    CertifiedValue q = certified_quotient(s.coord[i], s.mass);
    rep.mean[i] = q.value;
    rep.mean_err[i] = q.err;
  }
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      CertifiedValue q = certified_quotient(s.pair[i][j], s.mass);
      rep.second[i][j] = rep.second[j][i] = q.value;
      rep.second_err[i][j] = rep.second_err[j][i] = q.err;
    }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Interval c = Interval::pm(rep.second[i][j], rep.second_err[i][j]) -
                   Interval::pm(rep.mean[i], rep.mean_err[i]) * Interval::pm(rep.mean[j], rep.mean_err[j]);
      rep.covariance[i][j] = c.mid();
      rep.covariance_err[i][j] = c.rad();
    }
  CertifiedValue qn = certified_quotient(s.norm, s.mass);
  rep.mean_norm = qn.value;
  rep.mean_norm_err = qn.err;
  return rep;
}

}  // namespace

MomentReport moment_report(const Coset& c, const GaussianParam& p, double eps, uint64_t cap) {
  if (!(eps > 0.0)) throw Error("eps must be positive");
  Evaluator ev(c.lattice, p, cap);
  return assemble_report(raw_moment_sums(ev, c.shift, eps), c.dim());
}

CertifiedValue trace_second(const MomentReport& r) {
  int n = static_cast<int>(r.mean.size());
  Interval t = Interval::exact(0.0);
  for (int i = 0; i < n; ++i) t = t + Interval::pm(r.second[i][i], r.second_err[i][i]);
  return CertifiedValue{t.mid(), t.rad(), r.normalizer.radius, r.normalizer.warning};
}

namespace {

DerivativeReport derivative_report_scalar(const Lattice& L, const GaussianParam& p, const RatVec& x,
                                          double eps, uint64_t cap) {
  int n = L.dim();
  Evaluator ev(L, p, cap);
  MomentSums sx = raw_moment_sums(ev, x, eps);
  Channel mc;
  mc.kind = Channel::kOne;
  mc.tail_target = 0.25 * eps;
  CertifiedValue mass0 = ev.sums(RatVec(n, Rat(0)), {mc})[0];
  MomentReport mom = assemble_report(sx, n);

  DerivativeReport rep;
  rep.f = certified_quotient(sx.mass, mass0);
  Interval fi = Interval::of(rep.f);

  double s2 = rat_to_double(p.s2());
  double g = 2.0 * M_PI / s2;           // grad scale
  double h = 4.0 * M_PI * M_PI / (s2 * s2);  // hessian scale

  rep.grad.assign(n, 0.0);
  rep.grad_err.assign(n, 0.0);
  rep.hess.assign(n, Vec(n, 0.0));
  rep.hess_err.assign(n, Vec(n, 0.0));
  for (int i = 0; i < n; ++i) {
    Interval gi = (fi * Interval::pm(mom.mean[i], mom.mean_err[i])).scaled(-g);
    rep.grad[i] = gi.mid();
    rep.grad_err[i] = gi.rad();
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Interval sec = Interval::pm(mom.second[i][j], mom.second_err[i][j]).scaled(h);
      if (i == j) sec = sec - Interval::exact(g);
      Interval hij = fi * sec;
      rep.hess[i][j] = hij.mid();
      rep.hess_err[i][j] = hij.rad();
    }
  return rep;
}

}  // namespace

DerivativeReport derivative_report(const Lattice& L, const GaussianParam& p, const RatVec& x, double eps,
                                   uint64_t cap) {
  if (!(eps > 0.0)) throw Error("eps must be positive");
  if (p.is_scalar()) return derivative_report_scalar(L, p, x, eps, cap);

  // matrix form: whiten with W = Sigma^{-1/2}, evaluate at parameter 1,
  // pull back grad -> W grad', hess -> W hess' W
  int n = L.dim();
  const Eigen::MatrixXd& W = p.sigma_inv_sqrt();
  RatMat wb(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double acc = 0;
      for (int k = 0; k < n; ++k) acc += W(i, k) * rat_to_double(L.basis().at(k, j));
      wb.at(i, j) = rat_from_double(acc);
    }
  Lattice Lw = Lattice::from_basis_columns(wb);
  std::vector<double> xd = rat_vec_to_doubles(x);
  RatVec xw(n);
  for (int i = 0; i < n; ++i) {
    double acc = 0;
    for (int k = 0; k < n; ++k) acc += W(i, k) * xd[k];
    xw[i] = rat_from_double(acc);
  }
  DerivativeReport inner = derivative_report_scalar(Lw, GaussianParam::scalar(1.0), xw, eps, cap);

  DerivativeReport rep;
  rep.f = inner.f;
  rep.grad.assign(n, 0.0);
  rep.grad_err.assign(n, 0.0);
  rep.hess.assign(n, Vec(n, 0.0));
  rep.hess_err.assign(n, Vec(n, 0.0));
  for (int i = 0; i < n; ++i) {
    Interval acc = Interval::exact(0.0);
    for (int k = 0; k < n; ++k)
      acc = acc + Interval::pm(inner.grad[k], inner.grad_err[k]).scaled(W(i, k));
    rep.grad[i] = acc.mid();
    rep.grad_err[i] = acc.rad();
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Interval acc = Interval::exact(0.0);
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          acc = acc + Interval::pm(inner.hess[k][l], inner.hess_err[k][l]).scaled(W(i, k) * W(l, j));
      rep.hess[i][j] = acc.mid();
      rep.hess_err[i][j] = acc.rad();
    }
  return rep;
}

std::pair<CertifiedValue, CertifiedValue> fourth_moment_form(const Lattice& L, const Vec& u, const Vec& v,
                                                             double eps, uint64_t cap) {
  if (!(eps > 0.0)) throw Error("eps must be positive");
  int n = L.dim();
  if (static_cast<int>(u.size()) != n || static_cast<int>(v.size()) != n)
    throw DimensionMismatch("direction length != lattice dimension");
  bool uz = true, vz = true;
  for (double t : u)
    if (t != 0.0) uz = false;
  for (double t : v)
    if (t != 0.0) vz = false;
  if (uz || vz) throw Error("directions must be nonzero");

  Evaluator ev(L, GaussianParam::scalar(1.0), cap);
  std::vector<Channel> chans(5);
  chans[0].kind = Channel::kOne;
  chans[1].kind = Channel::kQuadQuad;
  chans[1].a = u;
  chans[1].b = v;
  chans[2].kind = Channel::kDotSq;
  chans[2].a = u;
  chans[3].kind = Channel::kDotSq;
  chans[3].a = v;
  chans[4].kind = Channel::kDotDot;
  chans[4].a = u;
  chans[4].b = v;
  for (auto& c : chans) c.tail_target = 0.2 * eps;

  auto r = ev.sums(RatVec(n, Rat(0)), chans);
  CertifiedValue lhs = certified_quotient(r[1], r[0]);
  CertifiedValue eu = certified_quotient(r[2], r[0]);
  CertifiedValue evv = certified_quotient(r[3], r[0]);
  CertifiedValue euv = certified_quotient(r[4], r[0]);
  Interval rhs = Interval::of(eu) * Interval::of(evv) + Interval::of(euv).square().scaled(2.0);
  return {lhs, CertifiedValue{rhs.mid(), rhs.rad(), lhs.radius, lhs.warning}};
}

}  // namespace lg
