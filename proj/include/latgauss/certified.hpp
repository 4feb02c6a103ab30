#pragma once

#include <cmath>
#include <limits>

namespace lg {

// A computed sum together with a rigorous absolute error bound
// (truncation tail + accumulated rounding) and the Euclidean
// truncation radius that produced it.
struct CertifiedValue {
  double value = 0.0;
  double err = 0.0;
  double radius = 0.0;
  // set when the doubling pass moved the value by more than the
  // predicted bound and err was inflated to the observed movement
  bool warning = false;

  double lo() const { return value - err; }
  double hi() const { return value + err; }
};

// Closed interval with outward-rounded arithmetic: every operation
// widens the result by one ulp per endpoint, which dominates the
// rounding of the underlying IEEE operation.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  static Interval exact(double v) { return {v, v}; }
  static Interval pm(double v, double e) { return widen({v - e, v + e}); }
  static Interval of(const CertifiedValue& c) { return pm(c.value, c.err); }

  static Interval widen(Interval x) {
    x.lo = std::nextafter(x.lo, -std::numeric_limits<double>::infinity());
    x.hi = std::nextafter(x.hi, std::numeric_limits<double>::infinity());
    return x;
  }

  double mid() const { return 0.5 * (lo + hi); }
  double rad() const { return 0.5 * (hi - lo); }
  bool contains_zero() const { return lo <= 0.0 && hi >= 0.0; }

  Interval operator+(const Interval& o) const { return widen({lo + o.lo, hi + o.hi}); }
  Interval operator-(const Interval& o) const { return widen({lo - o.hi, hi - o.lo}); }
  Interval operator*(const Interval& o) const;
  // requires the divisor interval to exclude zero
  Interval operator/(const Interval& o) const;
  Interval square() const;
  Interval scaled(double c) const;
};

// Compensated accumulation (Neumaier variant): the running error term
// recovers what plain addition drops.
class NeumaierSum {
 public:
  void add(double x) {
    double t = s_ + x;
    if (std::fabs(s_) >= std::fabs(x)) {
      c_ += (s_ - t) + x;
    } else {
      c_ += (x - t) + s_;
    }
    s_ = t;
  }
  double result() const { return s_ + c_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

// Relative tail factor of the Gaussian mass outside radius c*sqrt(n),
// per the standard discrete-Gaussian tail bound (Banaszczyk):
//   rho((L + u) \ c sqrt(n) Ball) <= factor(c, n) * rho(L),  c >= 1/sqrt(2 pi).
double gaussian_tail_factor(double c, int n);

// Smallest c >= c_min with gaussian_tail_factor(c, n) <= budget.
// Monotone in budget; throws if unreachable below c = 64.
double solve_tail_radius(int n, double budget, double c_min = 1.0);

}  // namespace lg
