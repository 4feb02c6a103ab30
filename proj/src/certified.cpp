#include "latgauss/certified.hpp"

#include <algorithm>

#include "latgauss/errors.hpp"

namespace lg {

Interval Interval::operator*(const Interval& o) const {
  double a = lo * o.lo, b = lo * o.hi, c = hi * o.lo, d = hi * o.hi;
  return widen({std::min(std::min(a, b), std::min(c, d)), std::max(std::max(a, b), std::max(c, d))});
}

Interval Interval::operator/(const Interval& o) const {
  if (o.lo <= 0.0 && o.hi >= 0.0) throw Error("interval division by an interval containing zero");
  double a = lo / o.lo, b = lo / o.hi, c = hi / o.lo, d = hi / o.hi;
  return widen({std::min(std::min(a, b), std::min(c, d)), std::max(std::max(a, b), std::max(c, d))});
}

Interval Interval::square() const {
  if (lo >= 0.0) return widen({lo * lo, hi * hi});
  if (hi <= 0.0) return widen({hi * hi, lo * lo});
  double m = std::max(-lo, hi);
  return widen({0.0, m * m});
}

Interval Interval::scaled(double c) const {
  if (c >= 0.0) return widen({lo * c, hi * c});
  return widen({hi * c, lo * c});
}

double gaussian_tail_factor(double c, int n) {
  constexpr double kTwoPiE = 17.07946844534713;  // 2 pi e
  double base = c * std::sqrt(kTwoPiE) * std::exp(-M_PI * c * c);
  return std::pow(base, n);
}

double solve_tail_radius(int n, double budget, double c_min) {
  if (budget <= 0.0) throw Error("tail budget must be positive");
  if (gaussian_tail_factor(c_min, n) <= budget) return c_min;
  if (gaussian_tail_factor(64.0, n) > budget) {
    throw Error("tail budget unreachable at any reasonable radius");
  }
  // fixed-count bisection over a fixed bracket keeps the result an
  // exactly monotone function of the budget
  double lo = c_min, hi = 64.0;
  for (int it = 0; it < 100; ++it) {
    double mid = 0.5 * (lo + hi);
    if (gaussian_tail_factor(mid, n) <= budget) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

}  // namespace lg
