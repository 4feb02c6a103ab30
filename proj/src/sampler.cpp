#include "latgauss/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "latgauss/serialize.hpp"

namespace lg {

namespace {

// Vose alias method, built deterministically from the weight order.
struct AliasTable {
  std::vector<double> prob;
  std::vector<uint32_t> alias;

  explicit AliasTable(const std::vector<double>& weights) {
    size_t n = weights.size();
    prob.assign(n, 0.0);
    alias.assign(n, 0);
    double total = 0;
    for (double w : weights) total += w;
    std::vector<double> scaled(n);
    for (size_t i = 0; i < n; ++i) scaled[i] = weights[i] * n / total;
    std::vector<uint32_t> small, large;
    for (size_t i = n; i-- > 0;) {
      (scaled[i] < 1.0 ? small : large).push_back(static_cast<uint32_t>(i));
    }
    while (!small.empty() && !large.empty()) {
      uint32_t s = small.back(), l = large.back();
      small.pop_back();
      large.pop_back();
      prob[s] = scaled[s];
      alias[s] = l;
      scaled[l] = (scaled[l] + scaled[s]) - 1.0;
      (scaled[l] < 1.0 ? small : large).push_back(l);
    }
    while (!large.empty()) {
      prob[large.back()] = 1.0;
      large.pop_back();
    }
    while (!small.empty()) {
      prob[small.back()] = 1.0;
      small.pop_back();
    }
  }

  template <typename Rng>
  uint32_t draw(Rng& rng) const {
    auto uniform = [&rng]() { return (rng() >> 11) * 0x1.0p-53; };
    double u = uniform() * static_cast<double>(prob.size());
    auto k = static_cast<uint32_t>(u);
    if (k >= prob.size()) k = static_cast<uint32_t>(prob.size()) - 1;
    return uniform() < prob[k] ? k : alias[k];
  }
};

}  // namespace

SampleBatch sample(const Coset& c, const GaussianParam& p, int count, uint64_t seed, double tv_eps,
                   uint64_t cap) {
  if (count < 1) throw Error("sample count must be at least 1");
  if (!(tv_eps > 0.0 && tv_eps < 1.0)) throw Error("tv_eps must lie in (0, 1)");
  int n = c.dim();

  Evaluator ev(c.lattice, p, cap);
  // rough pass to learn the scale, then an absolute tail target that
  // makes the omitted fraction <= tv_eps
  CertifiedValue rough = ev.mass(c.shift, std::min(tv_eps, 0.5));
  double target = tv_eps * (rough.value - rough.err) * 0.9;
  double c_star = solve_tail_radius(n, target / (ev.lattice_mass_upper() * 1.0), 1.0);
  double r2 = c_star * c_star * n;

  FormContext ctx(c.lattice, p.q_form(n));
  auto pts = ctx.enumerate(c.shift, rat_from_double(r2), cap);
  if (pts.empty()) throw Error("truncated support is empty");

  std::vector<double> weights(pts.size());
  NeumaierSum total;
  for (size_t i = 0; i < pts.size(); ++i) {
    weights[i] = std::exp(-M_PI * pts[i].q);
    total.add(weights[i]);
  }
  double T = total.result();
  double tail = gaussian_tail_factor(c_star, n) * ev.lattice_mass_upper();
  double tv = tail / T * (1.0 + 1e-9) + 1e-14;
  if (tv > tv_eps) throw Error("truncated support misses the tv target");

  SampleBatch b{c, p, seed, count, tv, {}, {}};
  b.samples.reserve(count);
  b.coefficients.reserve(count);

  AliasTable table(weights);
  std::mt19937_64 rng(seed);
  std::vector<double> shift_d = rat_vec_to_doubles(c.shift);
  const Eigen::MatrixXd& B = c.lattice.basis_d();
  for (int k = 0; k < count; ++k) {
    uint32_t idx = table.draw(rng);
    const auto& z = pts[idx].z;
    std::vector<double> w(n);
    for (int i = 0; i < n; ++i) {
      double acc = shift_d[i];
      for (int j = 0; j < n; ++j) acc += B(i, j) * z[j];
      w[i] = acc;
    }
    b.samples.push_back(std::move(w));
    b.coefficients.push_back(z);
  }
  return b;
}

MomentReport empirical_moments(const SampleBatch& b) {
  if (b.count < 2) throw Error("empirical moments need at least 2 samples");
  int n = b.coset.dim();
  size_t N = b.samples.size();
  MomentReport rep;
  rep.normalizer = CertifiedValue{1.0, 0.0, 0.0, false};
  rep.mean.assign(n, 0.0);
  rep.mean_err.assign(n, 0.0);
  rep.second.assign(n, Vec(n, 0.0));
  rep.second_err.assign(n, Vec(n, 0.0));
  rep.covariance.assign(n, Vec(n, 0.0));
  rep.covariance_err.assign(n, Vec(n, 0.0));

  for (const auto& w : b.samples)
    for (int i = 0; i < n; ++i) rep.mean[i] += w[i];
  for (int i = 0; i < n; ++i) rep.mean[i] /= static_cast<double>(N);

  Mat msq(n, Vec(n, 0.0));  // running sums of products and their squares
  Mat m2sq(n, Vec(n, 0.0));
  Vec var(n, 0.0);
  double norm_sum = 0.0, norm_sq_sum = 0.0;
  for (const auto& w : b.samples) {
    double nv = 0;
    for (int i = 0; i < n; ++i) {
      var[i] += (w[i] - rep.mean[i]) * (w[i] - rep.mean[i]);
      nv += w[i] * w[i];
      for (int j = i; j < n; ++j) {
        double pqv = w[i] * w[j];
        msq[i][j] += pqv;
        m2sq[i][j] += pqv * pqv;
      }
    }
    nv = std::sqrt(nv);
    norm_sum += nv;
    norm_sq_sum += nv * nv;
  }
  for (int i = 0; i < n; ++i) {
    rep.mean_err[i] = std::sqrt(var[i] / (N - 1) / static_cast<double>(N));
    for (int j = i; j < n; ++j) {
      double m1 = msq[i][j] / static_cast<double>(N);
      double v = std::max(0.0, m2sq[i][j] / static_cast<double>(N) - m1 * m1);
      double se = std::sqrt(v / static_cast<double>(N - 1));
      rep.second[i][j] = rep.second[j][i] = m1;
      rep.second_err[i][j] = rep.second_err[j][i] = se;
    }
  }
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      rep.covariance[i][j] = rep.second[i][j] - rep.mean[i] * rep.mean[j];
      rep.covariance_err[i][j] = rep.second_err[i][j] + std::fabs(rep.mean[i]) * rep.mean_err[j] +
                                 std::fabs(rep.mean[j]) * rep.mean_err[i];
    }
  rep.mean_norm = norm_sum / static_cast<double>(N);
  double nvar = std::max(0.0, norm_sq_sum / static_cast<double>(N) - rep.mean_norm * rep.mean_norm);
  rep.mean_norm_err = std::sqrt(nvar / static_cast<double>(N - 1));
  return rep;
}

// ---------------------------------------------------------------------------
// chi-square machinery

namespace {

// regularized incomplete gamma by series / continued fraction
double gamma_p_series(double a, double x) {
  double sum = 1.0 / a, term = sum, ap = a;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double gamma_q_contfrac(double a, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a, cc = 1.0 / kTiny, d = 1.0 / b, h = d;
  for (int i = 1; i <= 500; ++i) {
    double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < kTiny) d = kTiny;
    cc = b + an / cc;
    if (std::fabs(cc) < kTiny) cc = kTiny;
    d = 1.0 / d;
    double del = d * cc;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double gamma_q(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw Error("gamma_q domain");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_p_series(a, x);
  return gamma_q_contfrac(a, x);
}

GofResult chi_square_gof(const SampleBatch& b, double min_expected) {
  int n = b.coset.dim();
  // regenerate the truncated support with the batch's own machinery
  Evaluator ev(b.coset.lattice, b.param);
  FormContext ctx(b.coset.lattice, b.param.q_form(n));
  // reconstruct weights from the sample and support points: count hits
  // keyed by coefficient vector
  std::map<std::vector<int32_t>, int> hits;
  for (const auto& z : b.coefficients) hits[z]++;

  CertifiedValue rough = ev.mass(b.coset.shift, 0.5);
  double target = b.tv_bound * (rough.value - rough.err) * 0.9;
  double c_star = solve_tail_radius(n, std::max(target, 1e-300) / ev.lattice_mass_upper(), 1.0);
  auto pts = ctx.enumerate(b.coset.shift, rat_from_double(c_star * c_star * n), kDefaultEnumCap);

  double total = 0;
  std::vector<double> w(pts.size());
  for (size_t i = 0; i < pts.size(); ++i) {
    w[i] = std::exp(-M_PI * pts[i].q);
    total += w[i];
  }

  double stat = 0.0;
  int cells = 0;
  double pooled_expected = 0.0;
  int pooled_observed = 0;
  double seen = 0;
  for (size_t i = 0; i < pts.size(); ++i) {
    double expected = b.count * w[i] / total;
    auto it = hits.find(pts[i].z);
    int observed = it == hits.end() ? 0 : it->second;
    if (it != hits.end()) seen += observed;
    if (expected < min_expected) {
      pooled_expected += expected;
      pooled_observed += observed;
      continue;
    }
    stat += (observed - expected) * (observed - expected) / expected;
    ++cells;
  }
  // draws landing outside the reconstructed support join the pooled cell
  pooled_observed += b.count - static_cast<int>(seen);
  if (pooled_expected > 0.0) {
    stat += (pooled_observed - pooled_expected) * (pooled_observed - pooled_expected) / pooled_expected;
    ++cells;
  }
  GofResult r;
  r.statistic = stat;
  r.dof = std::max(1, cells - 1);
  r.p_value = gamma_q(0.5 * r.dof, 0.5 * stat);
  return r;
}

std::string batch_to_csv(const SampleBatch& b) { return serialize_batch_csv(b); }

}  // namespace lg
