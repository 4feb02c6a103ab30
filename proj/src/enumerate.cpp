#include "latgauss/enumerate.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <limits>

namespace lg {

namespace {

constexpr double kUlp = 2.220446049250313e-16;  // 2^-52

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

}  // namespace

FormContext::FormContext(Lattice lattice, RatMat q_form) : lattice_(std::move(lattice)), q_(std::move(q_form)) {
  int n = lattice_.dim();
  if (q_.rows() != n || q_.cols() != n) throw DimensionMismatch("form dimension != lattice dimension");
  form_ = lattice_.basis().transpose() * q_ * lattice_.basis();

  Eigen::MatrixXd form_d = to_eigen(form_);
  Eigen::LLT<Eigen::MatrixXd> llt(form_d);
  if (llt.info() != Eigen::Success) {
    throw Error("quadratic form is not positive definite in floating point");
  }
  chol_ = llt.matrixU();

  RatMat chol_exact = from_eigen_exact(chol_);
  RatMat resid = form_ - chol_exact.transpose() * chol_exact;
  chol_resid_ = rat_to_double_up(resid.norm_inf());
  form_inv_norm_ = rat_to_double_up(form_.inverse().norm_inf());
  eps_rel_ = chol_resid_ * form_inv_norm_ + 8.0 * (n + 2) * kUlp;
  if (eps_rel_ > 1e-3) {
    throw Error("quadratic form too ill-conditioned for certified enumeration");
  }
}

namespace {

Rat form_value(const RatMat& form, const RatVec& t_exact, const long* z, int n) {
  RatVec v(t_exact);
  for (int i = 0; i < n; ++i) v[i] += z[i];
  Rat q(0);
  for (int i = 0; i < n; ++i) {
    if (v[i] == 0) continue;
    for (int j = 0; j < n; ++j) q += v[i] * form.at(i, j) * v[j];
  }
  return q;
}

}  // namespace

Rat FormContext::exact_q(const RatVec& shift, const std::vector<int32_t>& z) const {
  int n = dim();
  RatVec t = lattice_.basis_inv() * shift;
  std::vector<long> zl(z.begin(), z.end());
  return form_value(form_, t, zl.data(), n);
}

double FormContext::predict_count(double r2) const {
  int n = dim();
  double prod = 1.0;
  double r = std::sqrt(std::max(0.0, r2));
  for (int i = 0; i < n; ++i) {
    prod *= 2.0 * r / chol_(i, i) + 1.0;
    if (prod > 1e18) return 1e18;
  }
  return prod;
}

std::vector<EnumPoint> FormContext::enumerate(const RatVec& shift, const Rat& r2_exact, uint64_t cap) const {
  const int n = dim();
  if (static_cast<int>(shift.size()) != n) throw DimensionMismatch("shift length != lattice dimension");

  std::vector<EnumPoint> out;
  if (r2_exact < 0) return out;

  const double r2_up = rat_to_double_up(r2_exact);
  const double r2_down = rat_to_double_down(r2_exact);
  const double prune_rel = 4.0 * eps_rel_ + 64.0 * kUlp + 1e-9;
  const double r2_prune = r2_up * (1.0 + prune_rel) + 1e-12;

  if (predict_count(r2_prune) > static_cast<double>(cap)) {
    throw BudgetExceeded("predicted enumeration count exceeds cap");
  }

  // exact coefficient-space shift and its float image
  RatVec t_exact = lattice_.basis_inv() * shift;
  std::vector<double> t(n), tabs(n);
  for (int i = 0; i < n; ++i) {
    t[i] = rat_to_double(t_exact[i]);
    tabs[i] = std::fabs(t[i]);
  }
  // m_hat[i] = sum_j |U_ij| |t_j|, the shift-rounding envelope per level
  std::vector<double> m_hat(n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) m_hat[i] += std::fabs(chol_(i, j)) * tabs[j];

  // iterative depth-first walk, level n-1 down to 0
  std::vector<double> partial(n + 1, 0.0);  // partial[i] = sum_{k>i-1... } of s_k^2 accumulated above level i
  std::vector<double> epart(n + 1, 0.0);    // running error mass alongside partial
  std::vector<double> inner(n, 0.0), innerabs(n, 0.0);
  std::vector<long> zmin(n), zmax(n), z(n);
  uint64_t visited = 0;

  auto compute_bounds = [&](int i) -> bool {
    // inner_i = sum_{j>i} U_ij (z_j + t_j)
    double in = 0.0, inabs = 0.0;
    for (int j = i + 1; j < n; ++j) {
      double term = chol_(i, j) * (static_cast<double>(z[j]) + t[j]);
      in += term;
      inabs += std::fabs(term);
    }
    inner[i] = in;
    innerabs[i] = inabs;
    double rem = r2_prune - partial[i + 1];
    if (rem < 0) return false;
    double uii = chol_(i, i);
    double center = -t[i] - in / uii;
    double d = std::sqrt(rem) / uii;
    d = d * (1.0 + 1e-10) + 1e-10 * (std::fabs(center) + 1.0);
    double lo = std::ceil(center - d), hi = std::floor(center + d);
    if (lo > hi) return false;
    if (lo < std::numeric_limits<int32_t>::min() || hi > std::numeric_limits<int32_t>::max()) {
      throw BudgetExceeded("enumeration coefficient exceeds 32-bit range");
    }
    zmin[i] = static_cast<long>(lo);
    zmax[i] = static_cast<long>(hi);
    z[i] = zmin[i];
    return true;
  };

  auto step_level = [&](int i) -> bool {
    // evaluates current z[i]; returns true if the subtree is feasible
    double s = chol_(i, i) * (static_cast<double>(z[i]) + t[i]) + inner[i];
    double shat = std::fabs(chol_(i, i) * (static_cast<double>(z[i]) + t[i])) + innerabs[i];
    double p = partial[i + 1] + s * s;
    if (p > r2_prune) return false;
    partial[i] = p;
    epart[i] = epart[i + 1] + shat * ((n + 2) * kUlp * shat + kUlp * m_hat[i]);
    return true;
  };

  int level = n - 1;
  if (!compute_bounds(level)) return out;
  while (true) {
    if (z[level] > zmax[level]) {
      // exhausted this level; pop
      ++level;
      if (level >= n) break;
      ++z[level];
      continue;
    }
    if (!step_level(level)) {
      ++z[level];
      continue;
    }
    if (level > 0) {
      --level;
      if (!compute_bounds(level)) {
        ++level;
        ++z[level];
      }
      continue;
    }
    // leaf
    if (++visited > cap) throw BudgetExceeded("enumeration count exceeds cap");
    double q = partial[0];
    double e_q = 2.05 * epart[0] + (2.0 * n * kUlp + eps_rel_) * q;
    bool keep;
    if (q + e_q <= r2_down) {
      keep = true;
    } else if (q - e_q > r2_up) {
      keep = false;
    } else {
      keep = form_value(form_, t_exact, z.data(), n) <= r2_exact;  // exact ties included
    }
    if (keep) {
      EnumPoint p;
      p.z.resize(n);
      for (int i = 0; i < n; ++i) p.z[i] = static_cast<int32_t>(z[i]);
      p.q = q;
      p.qerr = e_q;
      out.push_back(std::move(p));
    }
    ++z[0];
  }

  std::sort(out.begin(), out.end(), [](const EnumPoint& a, const EnumPoint& b) {
    if (a.q != b.q) return a.q < b.q;
    return a.z < b.z;
  });
  return out;
}

}  // namespace lg
