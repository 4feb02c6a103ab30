#include "latgauss/rational.hpp"

#include <cctype>
#include <cmath>
#include <limits>

#include "latgauss/errors.hpp"

namespace lg {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

// Parses a plain decimal literal (no slash, optional exponent) exactly.
Rat parse_decimal(const std::string& s) {
  std::string body = s;
  long exp10 = 0;
  auto epos = body.find_first_of("eE");
  if (epos != std::string::npos) {
    std::string es = body.substr(epos + 1);
    body = body.substr(0, epos);
    if (es.empty()) throw ParseError("bad numeric literal: " + s);
    size_t idx = 0;
    try {
      exp10 = std::stol(es, &idx);
    } catch (const std::exception&) {
      throw ParseError("bad numeric literal: " + s);
    }
    if (idx != es.size()) throw ParseError("bad numeric literal: " + s);
  }

  bool neg = false;
  if (!body.empty() && (body[0] == '+' || body[0] == '-')) {
    neg = body[0] == '-';
    body = body.substr(1);
  }
  std::string ipart = body, fpart;
  auto dot = body.find('.');
  if (dot != std::string::npos) {
    ipart = body.substr(0, dot);
    fpart = body.substr(dot + 1);
  }
  if (ipart.empty() && fpart.empty()) throw ParseError("bad numeric literal: " + s);
  if (!ipart.empty() && !all_digits(ipart)) throw ParseError("bad numeric literal: " + s);
  if (!fpart.empty() && !all_digits(fpart)) throw ParseError("bad numeric literal: " + s);

  Int digits(ipart.empty() ? std::string("0") : ipart);
  for (char c : fpart) {
    digits = digits * 10 + (c - '0');
  }
  long shift = exp10 - static_cast<long>(fpart.size());
  Rat r(digits);
  if (shift > 0) {
    Int p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(shift));
    r *= Rat(p);
  } else if (shift < 0) {
    Int p;
    mpz_ui_pow_ui(p.get_mpz_t(), 10, static_cast<unsigned long>(-shift));
    r /= Rat(p);
  }
  if (neg) r = -r;
  r.canonicalize();
  return r;
}

}  // namespace

Rat rat_from_string(const std::string& s) {
  if (s.empty()) throw ParseError("empty numeric literal");
  auto slash = s.find('/');
  if (slash != std::string::npos) {
    std::string num = s.substr(0, slash);
    std::string den = s.substr(slash + 1);
    if (num.empty() || den.empty()) throw ParseError("bad rational literal: " + s);
    try {
      Int nv(num), dv(den);
      if (dv == 0) throw ParseError("zero denominator: " + s);
      Rat r{nv, dv};
      r.canonicalize();
      return r;
    } catch (const std::invalid_argument&) {
      throw ParseError("bad rational literal: " + s);
    }
  }
  return parse_decimal(s);
}

Rat rat_from_double(double x) {
  if (!std::isfinite(x)) throw ParseError("non-finite value");
  Rat r;
  mpq_set_d(r.get_mpq_t(), x);
  return r;
}

std::string rat_to_string(const Rat& q) {
  if (q.get_den() == 1) return q.get_num().get_str();
  return q.get_num().get_str() + "/" + q.get_den().get_str();
}

double rat_to_double(const Rat& q) { return mpq_get_d(q.get_mpq_t()); }

double rat_to_double_up(const Rat& q) {
  double d = mpq_get_d(q.get_mpq_t());  // rounds toward zero
  while (rat_from_double(d) < q) {
    d = std::nextafter(d, std::numeric_limits<double>::infinity());
  }
  return d;
}

double rat_to_double_down(const Rat& q) {
  double d = mpq_get_d(q.get_mpq_t());
  while (rat_from_double(d) > q) {
    d = std::nextafter(d, -std::numeric_limits<double>::infinity());
  }
  return d;
}

}  // namespace lg
