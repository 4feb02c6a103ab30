#include "latgauss/gaussian.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

namespace lg {

namespace {

constexpr double kUlp = 2.220446049250313e-16;

Eigen::MatrixXd to_eigen(const RatMat& m) {
  Eigen::MatrixXd e(m.rows(), m.cols());
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) e(i, j) = rat_to_double(m.at(i, j));
  return e;
}

double norm2(const std::vector<double>& v) {
  double s = 0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace

GaussianParam GaussianParam::scalar(double s) {
  if (!(s > 0.0) || !std::isfinite(s)) throw Error("Gaussian parameter s must be positive and finite");
  Rat sr = rat_from_double(s);
  GaussianParam p;
  p.scalar_ = true;
  p.s2_ = sr * sr;
  p.s_ = s;
  return p;
}

GaussianParam GaussianParam::scalar_s2(Rat s2) {
  if (!(s2 > 0)) throw Error("Gaussian parameter s^2 must be positive");
  GaussianParam p;
  p.scalar_ = true;
  p.s_ = std::sqrt(rat_to_double(s2));
  p.s2_ = std::move(s2);
  return p;
}

GaussianParam GaussianParam::matrix(const RatMat& sigma_in) {
  if (sigma_in.rows() != sigma_in.cols() || sigma_in.rows() == 0)
    throw DimensionMismatch("sigma must be square");
  int n = sigma_in.rows();
  // tolerate serialization noise up to 1e-12, reject anything worse
  Rat worst(0);
  Rat scale(1);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Rat d = abs(sigma_in.at(i, j) - sigma_in.at(j, i));
      if (d > worst) worst = d;
      Rat m = abs(sigma_in.at(i, j));
      if (m > scale) scale = m;
    }
  if (worst > scale * rat_from_string("1e-12")) throw Error("sigma is not symmetric");
  RatMat sigma = (sigma_in + sigma_in.transpose()).scaled(Rat(1, 2));

  GaussianParam p;
  p.scalar_ = false;
  p.sigma_inv_ = sigma.inverse();
  p.sigma_ = std::move(sigma);
  Eigen::MatrixXd sd = to_eigen(p.sigma_);
  Eigen::LLT<Eigen::MatrixXd> llt(sd);
  if (llt.info() != Eigen::Success) throw Error("sigma is not positive definite");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sd);
  if (es.info() != Eigen::Success) throw Error("sigma eigendecomposition failed");
  Eigen::VectorXd inv_sqrt = es.eigenvalues().cwiseInverse().cwiseSqrt();
  p.sigma_inv_sqrt_ = es.eigenvectors() * inv_sqrt.asDiagonal() * es.eigenvectors().transpose();
  p.sigma_norm_inf_ = rat_to_double_up(p.sigma_.norm_inf()) * (1.0 + 1e-12);
  return p;
}

double GaussianParam::s() const {
  if (!scalar_) throw Error("matrix-form parameter has no scalar s");
  return s_;
}

RatMat GaussianParam::q_form(int n) const {
  if (scalar_) {
    RatMat q = RatMat::identity(n);
    return q.scaled(Rat(1) / s2_);
  }
  if (sigma_.rows() != n) throw DimensionMismatch("sigma dimension != lattice dimension");
  return sigma_inv_;
}

double GaussianParam::euclid_envelope(int n) const {
  if (scalar_) return rat_to_double_up(s2_);
  if (sigma_.rows() != n) throw DimensionMismatch("sigma dimension != lattice dimension");
  return sigma_norm_inf_;
}

double GaussianParam::euclid_radius(int n, double r2) const {
  return std::sqrt(euclid_envelope(n) * std::max(0.0, r2));
}

double rho_point(const std::vector<double>& x, const GaussianParam& p) {
  int n = static_cast<int>(x.size());
  double q;
  if (p.is_scalar()) {
    double s2 = rat_to_double(p.s2());
    double n2 = 0;
    for (double v : x) n2 += v * v;
    q = n2 / s2;
  } else {
    if (p.matrix_dim() != n) throw DimensionMismatch("sigma dimension != vector length");
    Eigen::MatrixXd qi = to_eigen(p.sigma_inv());
    Eigen::Map<const Eigen::VectorXd> xv(x.data(), n);
    q = xv.dot(qi * xv);
  }
  return std::exp(-M_PI * q);
}

// ---------------------------------------------------------------------------
// Evaluator

namespace {

int envelope_order(const Channel& ch) {
  switch (ch.kind) {
    case Channel::kOne:
    case Channel::kCos:
    case Channel::kCosCos:
    case Channel::kSinSin:
      return 0;
    case Channel::kCoord:
    case Channel::kNorm:
      return 1;
    case Channel::kCoordPair:
    case Channel::kDotSq:
    case Channel::kDotDot:
      return 2;
    case Channel::kQuadQuad:
      return 4;
  }
  return 0;
}

double envelope_prefactor(const Channel& ch) {
  switch (ch.kind) {
    case Channel::kDotSq: {
      double na = norm2(ch.a);
      return na * na * (1.0 + 1e-9);
    }
    case Channel::kDotDot:
      return norm2(ch.a) * norm2(ch.b) * (1.0 + 1e-9);
    case Channel::kQuadQuad: {
      double na = norm2(ch.a), nb = norm2(ch.b);
      return na * na * nb * nb * (1.0 + 1e-9);
    }
    default:
      return 1.0;
  }
}

// sup_t t^{k/2} exp(-pi beta t), the cost of trading the weight
// ||w||^k for a slightly wider Gaussian
double envelope_constant(int k, double delta) {
  if (k == 0) return 1.0;
  double beta = 1.0 - 1.0 / ((1.0 + delta) * (1.0 + delta));
  return std::pow(k / (2.0 * M_PI * beta * M_E), 0.5 * k);
}

}  // namespace

Evaluator::Evaluator(Lattice lattice, GaussianParam param, uint64_t cap)
    : lattice_(lattice), param_(std::move(param)), ctx_(lattice, param_.q_form(lattice.dim())), cap_(cap) {
  int n = lattice_.dim();
  double widen = (1.0 + delta_) * (1.0 + delta_);
  double r2_scaffold = n * widen * (1.0 + 1e-6);
  RatVec zero(n, Rat(0));
  auto pts = ctx_.enumerate(zero, rat_from_double(r2_scaffold), cap_);
  // partial masses over supersets of the unit-radius balls at the plain
  // and at the widened parameter; both feed upper bounds on the full mass
  double p0 = 0, p1 = 0;
  for (const auto& pt : pts) {
    if (pt.q <= n * (1.0 + 1e-6)) p0 += std::exp(-M_PI * pt.q);
    p1 += std::exp(-M_PI * pt.q / widen);
  }
  double denom = 1.0 - gaussian_tail_factor(1.0, n);
  mass_upper_ = p0 * (1.0 + 1e-9) / denom;
  mass_upper_wide_ = p1 * (1.0 + 1e-9) / denom;
}

double Evaluator::channel_tail(const Channel& ch, double c) const {
  int n = lattice_.dim();
  int k = envelope_order(ch);
  double pref = envelope_prefactor(ch);
  if (k == 0) {
    return pref * gaussian_tail_factor(c, n) * mass_upper_;
  }
  double lambda = param_.euclid_envelope(n);
  double ck = envelope_constant(k, delta_);
  return pref * std::pow(lambda, 0.5 * k) * ck * gaussian_tail_factor(c / (1.0 + delta_), n) *
         mass_upper_wide_;
}

double Evaluator::solve_channel_radius(const Channel& ch) const {
  int n = lattice_.dim();
  int k = envelope_order(ch);
  double pref = envelope_prefactor(ch);
  if (ch.tail_target <= 0.0) throw Error("channel tail target must be positive");
  if (k == 0) {
    double budget = ch.tail_target / (pref * mass_upper_);
    return solve_tail_radius(n, budget, 1.0);
  }
  double lambda = param_.euclid_envelope(n);
  double ck = envelope_constant(k, delta_);
  double budget = ch.tail_target / (pref * std::pow(lambda, 0.5 * k) * ck * mass_upper_wide_);
  return (1.0 + delta_) * solve_tail_radius(n, budget, 1.0);
}

std::vector<CertifiedValue> Evaluator::sums(const RatVec& shift, const std::vector<Channel>& channels) const {
  int n = lattice_.dim();
  if (channels.empty()) throw Error("no channels requested");

  double c_star = 1.0;
  for (const auto& ch : channels) c_star = std::max(c_star, solve_channel_radius(ch));
  double r2 = c_star * c_star * n;
  Rat r2_exact = rat_from_double(r2);

  auto pts = ctx_.enumerate(shift, rat_from_double(4.0 * r2), cap_);

  const double r2_down = rat_to_double_down(r2_exact);
  const double r2_up = rat_to_double_up(r2_exact);

  bool needs_w = false;
  for (const auto& ch : channels)
    if (ch.kind != Channel::kOne) needs_w = true;

  struct Acc {
    NeumaierSum in, all;
    double err_in = 0, err_all = 0;
    double abs_in = 0, abs_all = 0;
  };
  std::vector<Acc> acc(channels.size());

  std::vector<double> shift_d = rat_vec_to_doubles(shift);
  const Eigen::MatrixXd& B = lattice_.basis_d();
  std::vector<double> w(n), wres(n);

  for (const auto& pt : pts) {
    bool in_r;
    if (pt.q + pt.qerr <= r2_down) {
      in_r = true;
    } else if (pt.q - pt.qerr > r2_up) {
      in_r = false;
    } else {
      in_r = ctx_.exact_q(shift, pt.z) <= r2_exact;
    }

    double t = std::exp(-M_PI * pt.q);
    double terr = t * (1.05 * M_PI * (pt.qerr + 2.0 * kUlp * pt.q) + 4.0 * kUlp);

    if (needs_w) {
      for (int i = 0; i < n; ++i) {
        double accn = shift_d[i], absn = std::fabs(shift_d[i]);
        for (int j = 0; j < n; ++j) {
          double term = B(i, j) * pt.z[j];
          accn += term;
          absn += std::fabs(term);
        }
        w[i] = accn;
        wres[i] = (n + 3) * kUlp * absn;
      }
    }

    auto dot_with_err = [&](const std::vector<double>& a, double& err) {
      double s = 0, asum = 0;
      for (int i = 0; i < n; ++i) {
        s += w[i] * a[i];
        asum += std::fabs(w[i] * a[i]) * (n + 2) * kUlp + wres[i] * std::fabs(a[i]);
      }
      err = asum;
      return s;
    };

    for (size_t c = 0; c < channels.size(); ++c) {
      const Channel& ch = channels[c];
      double v = t, e = terr;
      switch (ch.kind) {
        case Channel::kOne:
          break;
        case Channel::kCoord: {
          v = w[ch.i] * t;
          e = wres[ch.i] * t + std::fabs(w[ch.i]) * terr + kUlp * std::fabs(v);
          break;
        }
        case Channel::kCoordPair: {
          double g = w[ch.i] * w[ch.j];
          double ge = wres[ch.i] * std::fabs(w[ch.j]) + wres[ch.j] * std::fabs(w[ch.i]) + kUlp * std::fabs(g);
          v = g * t;
          e = ge * t + std::fabs(g) * terr + kUlp * std::fabs(v);
          break;
        }
        case Channel::kNorm: {
          double g = 0;
          double ge = 0;
          for (int i = 0; i < n; ++i) g += w[i] * w[i];
          g = std::sqrt(g);
          for (int i = 0; i < n; ++i) ge += std::fabs(w[i]) * wres[i];
          ge = ge / std::max(g, 1e-300) + 2.0 * kUlp * g;
          v = g * t;
          e = ge * t + g * terr + kUlp * std::fabs(v);
          break;
        }
        case Channel::kCos: {
          double de;
          double d = dot_with_err(ch.a, de);
          double theta = 2.0 * M_PI * d;
          double te = 2.0 * M_PI * de * 1.01 + 2.0 * kUlp * std::fabs(theta);
          double g = std::cos(theta);
          double ge = te + 4.0 * kUlp;
          v = g * t;
          e = ge * t + std::fabs(g) * terr + kUlp * std::fabs(v);
          break;
        }
        case Channel::kCosCos:
        case Channel::kSinSin: {
          double dea, deb;
          double da = dot_with_err(ch.a, dea);
          double db = dot_with_err(ch.b, deb);
          double ta = 2.0 * M_PI * da, tb = 2.0 * M_PI * db;
          double tea = 2.0 * M_PI * dea * 1.01 + 2.0 * kUlp * std::fabs(ta);
          double teb = 2.0 * M_PI * deb * 1.01 + 2.0 * kUlp * std::fabs(tb);
          double g, ge;
          if (ch.kind == Channel::kCosCos) {
            g = std::cos(ta) * std::cos(tb);
          } else {
            g = std::sin(ta) * std::sin(tb);
          }
          ge = tea + teb + 8.0 * kUlp;
          v = g * t;
          e = ge * t + std::fabs(g) * terr + kUlp * std::fabs(v);
          break;
        }
        case Channel::kDotSq: {
          double de;
          double d = dot_with_err(ch.a, de);
          double g = d * d;
          double ge = 2.0 * std::fabs(d) * de + kUlp * g;
          v = g * t;
          e = ge * t + g * terr + kUlp * std::fabs(v);
          break;
        }
        case Channel::kDotDot: {
          double dea, deb;
          double da = dot_with_err(ch.a, dea);
          double db = dot_with_err(ch.b, deb);
          double g = da * db;
          double ge = std::fabs(da) * deb + std::fabs(db) * dea + kUlp * std::fabs(g);
          v = g * t;
          e = ge * t + std::fabs(g) * terr + kUlp * std::fabs(v);
          break;
        }
        case Channel::kQuadQuad: {
          double dea, deb;
          double da = dot_with_err(ch.a, dea);
          double db = dot_with_err(ch.b, deb);
          double g = da * da * db * db;
          double ge = (2.0 * std::fabs(da) * db * db * dea + 2.0 * std::fabs(db) * da * da * deb) * 1.01 +
                      2.0 * kUlp * g;
          v = g * t;
          e = ge * t + g * terr + kUlp * std::fabs(v);
          break;
        }
      }
      Acc& a = acc[c];
      a.all.add(v);
      a.err_all += e;
      a.abs_all += std::fabs(v);
      if (in_r) {
        a.in.add(v);
        a.err_in += e;
        a.abs_in += std::fabs(v);
      }
    }
  }

  std::vector<CertifiedValue> out(channels.size());
  double radius = param_.euclid_radius(n, r2);
  for (size_t c = 0; c < channels.size(); ++c) {
    const Acc& a = acc[c];
    double v_in = a.in.result();
    double v_all = a.all.result();
    double round_in = a.err_in * 1.05 + 4.0 * kUlp * a.abs_in;
    double round_all = a.err_all * 1.05 + 4.0 * kUlp * a.abs_all;
    double tail_r = channel_tail(channels[c], c_star);
    double err = tail_r + round_in;
    bool warn = false;
    double movement = std::fabs(v_all - v_in);
    if (movement > err) {
      err = movement + channel_tail(channels[c], 2.0 * c_star) + round_all;
      warn = true;
    }
    out[c] = CertifiedValue{v_in, err, radius, warn};
  }
  return out;
}

CertifiedValue Evaluator::mass(const RatVec& shift, double eps) const {
  if (!(eps > 0.0)) throw Error("eps must be positive");
  Channel ch;
  ch.kind = Channel::kOne;
  ch.tail_target = 0.5 * eps;
  CertifiedValue cv = sums(shift, {ch})[0];
  // sharpen when the coset mass is far below the requested absolute
  // scale, so the certificate stays strictly positive
  for (int attempt = 0; attempt < 2 && cv.value - cv.err <= 0.0; ++attempt) {
    ch.tail_target = std::max(cv.value / 8.0, 1e-280);
    cv = sums(shift, {ch})[0];
  }
  if (cv.value - cv.err <= 0.0) throw Error("coset mass below certifiable range");
  return cv;
}

// ---------------------------------------------------------------------------
// public operations

CertifiedValue mass(const Coset& c, const GaussianParam& p, double eps, uint64_t cap) {
  Evaluator ev(c.lattice, p, cap);
  return ev.mass(c.shift, eps);
}

CertifiedValue certified_quotient(const CertifiedValue& num, const CertifiedValue& den) {
  if (!(den.value - den.err > 0.0)) throw Error("denominator interval must stay positive");
  double v = num.value / den.value;
  double hi = (num.value + num.err) / (den.value - den.err);
  double lo = (num.value - num.err) / (den.value + den.err);
  double err = std::max(hi - v, v - lo);
  err = std::nextafter(err * (1.0 + 4.0 * kUlp), std::numeric_limits<double>::infinity());
  return CertifiedValue{v, err, std::max(num.radius, den.radius), num.warning || den.warning};
}

CertifiedValue periodic_gaussian(const Lattice& L, const GaussianParam& p, const RatVec& x, double eps,
                                 uint64_t cap) {
  if (!(eps > 0.0)) throw Error("eps must be positive");
  if (L.contains(x)) return CertifiedValue{1.0, 0.0, 0.0, false};
  Evaluator ev(L, p, cap);
  CertifiedValue num = ev.mass(x, 0.25 * eps);
  RatVec zero(L.dim(), Rat(0));
  CertifiedValue den = ev.mass(zero, 0.25 * eps);
  return certified_quotient(num, den);
}

CertifiedValue dual_mass(const Coset& c, const GaussianParam& p, double eps, uint64_t cap) {
  if (!(eps > 0.0)) throw Error("eps must be positive");
  if (!p.is_scalar()) throw Error("dual_mass requires the scalar parameter form");
  int n = c.dim();
  Lattice Ld = dual(c.lattice);
  GaussianParam pd = GaussianParam::scalar_s2(Rat(1) / p.s2());

  // scale factor s^n / det(L)
  Rat s2 = p.s2();
  Rat det = c.lattice.det_abs();
  double scale;
  if (n % 2 == 0) {
    Rat sc(1);
    for (int i = 0; i < n / 2; ++i) sc *= s2;
    scale = rat_to_double(sc / det);
  } else {
    Rat sc(1);
    for (int i = 0; i < (n - 1) / 2; ++i) sc *= s2;
    scale = std::sqrt(rat_to_double(s2)) * rat_to_double(sc / det);
  }

  Evaluator ev(Ld, pd, cap);
  Channel ch;
  ch.kind = Channel::kCos;
  ch.a = rat_vec_to_doubles(c.shift);
  ch.tail_target = 0.5 * eps / scale;
  CertifiedValue raw = ev.sums(RatVec(n, Rat(0)), {ch})[0];
  double value = scale * raw.value;
  double err = scale * raw.err + std::fabs(value) * (n + 4) * kUlp;
  return CertifiedValue{value, err, raw.radius, raw.warning};
}

CosineMoments cosine_moments(const Lattice& L, const RatVec& x, const RatVec& y, double eps, uint64_t cap) {
  if (!(eps > 0.0)) throw Error("eps must be positive");
  int n = L.dim();
  Evaluator ev(L, GaussianParam::scalar(1.0), cap);
  std::vector<double> xd = rat_vec_to_doubles(x), yd = rat_vec_to_doubles(y);

  std::vector<Channel> chans(5);
  chans[0].kind = Channel::kOne;
  chans[1].kind = Channel::kCos;
  chans[1].a = xd;
  chans[2].kind = Channel::kCos;
  chans[2].a = yd;
  chans[3].kind = Channel::kCosCos;
  chans[3].a = xd;
  chans[3].b = yd;
  chans[4].kind = Channel::kSinSin;
  chans[4].a = xd;
  chans[4].b = yd;
  for (auto& ch : chans) ch.tail_target = 0.25 * eps;

  auto r = ev.sums(RatVec(n, Rat(0)), chans);
  CosineMoments out;
  out.cos_x = certified_quotient(r[1], r[0]);
  out.cos_y = certified_quotient(r[2], r[0]);
  out.cos_cos = certified_quotient(r[3], r[0]);
  out.sin_sin = certified_quotient(r[4], r[0]);
  return out;
}

SplitReport theta_split_identity(const Lattice& L, const RatVec& x, const RatVec& y, double eps,
                                 uint64_t cap) {
  if (!(eps > 0.0)) throw Error("eps must be positive");
  int n = L.dim();
  if (static_cast<int>(x.size()) != n || static_cast<int>(y.size()) != n)
    throw DimensionMismatch("shift length != lattice dimension");

  SplitReport rep;

  Evaluator ev1(L, GaussianParam::scalar(1.0), cap);
  CertifiedValue mx = ev1.mass(x, 0.25 * eps);
  CertifiedValue my = ev1.mass(y, 0.25 * eps);
  Interval lhs = Interval::of(mx) * Interval::of(my);
  rep.lhs = CertifiedValue{mx.value * my.value, std::max(lhs.hi - mx.value * my.value, mx.value * my.value - lhs.lo),
                           std::max(mx.radius, my.radius), mx.warning || my.warning};

  IMat two = IMat::identity(n);
  for (int i = 0; i < n; ++i) two.at(i, i) = 2;
  SublatticeRep sub2 = sublattice(L, two);
  CosetReps reps = quotient_reps(L, sub2);

  Evaluator ev2(sub2.as_lattice(), GaussianParam::scalar_s2(Rat(2)), cap);
  double eps_each = 0.25 * eps / static_cast<double>(reps.reps.size());

  Interval rhs = Interval::exact(0.0);
  double rhs_value = 0.0;
  for (const RatVec& c : reps.reps) {
    RatVec sp(n), sm(n);
    for (int i = 0; i < n; ++i) {
      sp[i] = c[i] + x[i] + y[i];
      sm[i] = c[i] + x[i] - y[i];
    }
    CertifiedValue mp = ev2.mass(sp, eps_each);
    CertifiedValue mm = ev2.mass(sm, eps_each);
    rhs = rhs + Interval::of(mp) * Interval::of(mm);
    rhs_value += mp.value * mm.value;
    rep.per_coset.emplace_back(mp, mm);
  }
  rep.rhs = CertifiedValue{rhs_value, std::max(rhs.hi - rhs_value, rhs_value - rhs.lo),
                           rep.per_coset.empty() ? 0.0 : rep.per_coset[0].first.radius, false};
  return rep;
}

}  // namespace lg
