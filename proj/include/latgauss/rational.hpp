#pragma once

#include <gmpxx.h>

#include <string>

namespace lg {

using Int = mpz_class;
using Rat = mpq_class;

// Parses "3", "-7/2", "0.125", "2.5e-3" into an exact rational.
// Throws ParseError on anything else.
Rat rat_from_string(const std::string& s);

// Exact conversion; every finite double is a dyadic rational.
Rat rat_from_double(double x);

// Canonical text form: "p" for integers, "p/q" otherwise.
std::string rat_to_string(const Rat& q);

// Nearest double (within 1 ulp of the exact value).
double rat_to_double(const Rat& q);

// Directed conversions: the result is guaranteed >= (resp. <=) the
// exact value. Used when a rational bound must survive the trip to
// floating point.
double rat_to_double_up(const Rat& q);
double rat_to_double_down(const Rat& q);

// mpq_class(a, b) does not reduce; this does.
inline Rat frac(long num, long den) {
  Rat r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace lg
