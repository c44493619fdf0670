#pragma once

#include <gmpxx.h>

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "certlab/error.hpp"

namespace certlab {

// Arbitrary precision rational, always canonical (lowest terms, positive denominator).
using Rational = mpq_class;
using Integer = mpz_class;
using RationalVector = std::vector<Rational>;

// "p/q" or "p"; the canonical GMP spelling.
inline std::string to_string(const Rational& q) { return q.get_str(); }

inline Rational parse_rational(std::string_view text) {
  std::string s(text);
  auto valid_integer = [](std::string_view part) {
    if (part.empty()) return false;
    std::size_t i = (part[0] == '-' || part[0] == '+') ? 1 : 0;
    if (i == part.size()) return false;
    for (; i < part.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(part[i]))) return false;
    }
    return true;
  };
  const auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!valid_integer(num) || !valid_integer(den) || den[0] == '-' || den[0] == '+') {
    throw ParseError("not a rational: '" + s + "'");
  }
  if (num[0] == '+') num.erase(0, 1);
  Integer n(num, 10);
  Integer d(den, 10);
  if (d == 0) throw ParseError("zero denominator: '" + s + "'");
  Rational q(n, d);
  q.canonicalize();
  return q;
}

inline int sign(const Rational& q) { return sgn(q); }

inline Rational abs_value(const Rational& q) { return abs(q); }

// q^e for e >= 0, exact.
inline Rational pow_rational(const Rational& q, unsigned long e) {
  Integer num;
  Integer den;
  mpz_pow_ui(num.get_mpz_t(), q.get_num_mpz_t(), e);
  mpz_pow_ui(den.get_mpz_t(), q.get_den_mpz_t(), e);
  Rational r(num, den);
  r.canonicalize();
  return r;
}

inline Integer lcm_integer(const Integer& a, const Integer& b) {
  Integer r;
  mpz_lcm(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
  return r;
}

}  // namespace certlab
