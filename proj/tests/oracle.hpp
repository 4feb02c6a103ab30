#pragma once

// Test-only reference oracles. Everything here is deliberately written
// the dumb way (plain loops, no shared machinery with the library) so
// that agreement with the library is meaningful evidence.

#include <cmath>
#include <cstdint>
#include <vector>

#include "latgauss/linalg.hpp"

namespace oracle {

// sum_{k=-K}^{K} (k+shift)^power * exp(-pi (k+shift)^2 / s2)
inline long double weighted_sum_1d(int power, long double shift, long double s2, int K = 40) {
  long double total = 0.0L;
  for (int k = -K; k <= K; ++k) {
    long double w = k + shift;
    long double term = std::exp(-static_cast<long double>(M_PI) * w * w / s2);
    for (int p = 0; p < power; ++p) term *= w;
    total += term;
  }
  return total;
}

inline long double rho_1d(long double shift, long double s2 = 1.0L, int K = 40) {
  return weighted_sum_1d(0, shift, s2, K);
}

// sum over the dual side: sum_k cos(2 pi k x) exp(-pi k^2 s^2)
inline long double alternating_dual_1d(long double x, long double s2 = 1.0L, int K = 40) {
  long double total = 0.0L;
  for (int k = -K; k <= K; ++k) {
    total += std::cos(2.0L * static_cast<long double>(M_PI) * k * x) *
             std::exp(-static_cast<long double>(M_PI) * k * k * s2);
  }
  return total;
}

// Exhaustive coset points by exact filtering of a coefficient box that
// provably covers the ball: if ||B z + x|| <= R then
// ||z||_inf <= ||B^{-1}||_inf R + ||B^{-1} x||_inf.
// Everything is scaled by a common denominator so the point filter runs
// in exact integer arithmetic.
inline std::vector<std::vector<lg::Rat>> coset_points_brute(const lg::RatMat& basis_cols,
                                                            const lg::RatVec& shift, const lg::Rat& radius) {
  using lg::Int;
  using lg::Rat;
  int n = basis_cols.rows();
  lg::RatMat binv = basis_cols.inverse();
  Rat binv_norm = binv.norm_inf();
  lg::RatVec t = binv * shift;
  Rat tmax(0);
  for (const Rat& v : t)
    if (abs(v) > tmax) tmax = abs(v);
  Rat kbound = binv_norm * radius + tmax + 2;
  long K = static_cast<long>(lg::rat_to_double(kbound)) + 1;

  Int den(1);
  for (int i = 0; i < n; ++i) {
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), shift[i].get_den().get_mpz_t());
    for (int j = 0; j < n; ++j)
      mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), basis_cols.at(i, j).get_den().get_mpz_t());
  }
  std::vector<std::vector<Int>> bs(n, std::vector<Int>(n));
  std::vector<Int> xs(n);
  for (int i = 0; i < n; ++i) {
    Rat sx = shift[i] * Rat(den);
    xs[i] = sx.get_num();
    for (int j = 0; j < n; ++j) {
      Rat sb = basis_cols.at(i, j) * Rat(den);
      bs[i][j] = sb.get_num();
    }
  }
  Rat r2_scaled = radius * radius * Rat(den * den);

  std::vector<std::vector<Rat>> out;
  std::vector<long> z(n, -K);
  std::vector<Int> w(n);
  while (true) {
    Int q(0);
    for (int i = 0; i < n; ++i) {
      w[i] = xs[i];
      for (int j = 0; j < n; ++j) w[i] += bs[i][j] * z[j];
      q += w[i] * w[i];
    }
    if (Rat(q) <= r2_scaled) {
      std::vector<Rat> pt(n);
      for (int i = 0; i < n; ++i) {
        pt[i] = Rat(w[i], den);
        pt[i].canonicalize();
      }
      out.push_back(std::move(pt));
    }
    int k = 0;
    while (k < n) {
      if (++z[k] <= K) break;
      z[k] = -K;
      ++k;
    }
    if (k == n) break;
  }
  return out;
}

// approximate size of the box coset_points_brute would scan
inline double brute_box_size(const lg::RatMat& basis_cols, const lg::RatVec& shift, double radius) {
  using lg::Rat;
  int n = basis_cols.rows();
  lg::RatMat binv = basis_cols.inverse();
  lg::RatVec t = binv * shift;
  Rat tmax(0);
  for (const Rat& v : t)
    if (abs(v) > tmax) tmax = abs(v);
  double K = lg::rat_to_double(binv.norm_inf()) * radius + lg::rat_to_double(tmax) + 3;
  return std::pow(2.0 * K + 1.0, n);
}

// Gaussian mass over the brute-force support (long double, plain sums).
inline long double mass_brute(const lg::RatMat& basis_cols, const lg::RatVec& shift, long double s2,
                              double radius) {
  auto pts = coset_points_brute(basis_cols, shift, lg::rat_from_double(radius));
  long double total = 0.0L;
  for (const auto& w : pts) {
    long double q = 0.0L;
    for (const auto& wi : w) {
      long double v = static_cast<long double>(lg::rat_to_double(wi));
      q += v * v;
    }
    total += std::exp(-static_cast<long double>(M_PI) * q / s2);
  }
  return total;
}

}  // namespace oracle
