#pragma once

#include <initializer_list>
#include <random>
#include <utility>
#include <vector>

#include "certlab/polynomial.hpp"

namespace certlab::testkit {

struct TermSpec {
  Rational coef;
  Exponent exp;
};

inline Polynomial poly(int n, std::initializer_list<TermSpec> terms) {
  Polynomial p(n);
  for (const auto& t : terms) p.add_term(t.exp, t.coef);
  return p;
}

// Hand expansion of (1 - x1 - x2)^2.
inline Polynomial n2_expanded() {
  return poly(2, {{1, {0, 0}}, {-2, {1, 0}}, {-2, {0, 1}}, {1, {2, 0}}, {2, {1, 1}}, {1, {0, 2}}});
}

inline Polynomial motzkin2() { return poly(2, {{1, {0, 0}}, {1, {2, 4}}, {1, {4, 2}}, {-3, {2, 2}}}); }

// a/b in canonical form; the two-argument mpq constructor does not reduce.
inline Rational frac(long a, long b) {
  Rational q(a, b);
  q.canonicalize();
  return q;
}

class Rng {
 public:
  explicit Rng(unsigned seed) : gen_(seed) {}

  int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen_); }

  Rational small_rational(int num_range = 5, int den_max = 4) {
    Rational q(uniform_int(-num_range, num_range), uniform_int(1, den_max));
    q.canonicalize();
    return q;
  }

  Rational positive_rational(int num_max = 5, int den_max = 4) {
    Rational q(uniform_int(1, num_max), uniform_int(1, den_max));
    q.canonicalize();
    return q;
  }

  bool coin() { return uniform_int(0, 1) == 1; }

  Polynomial random_poly(int n, int max_deg, int max_terms) {
    Polynomial p(n);
    const int terms = uniform_int(0, max_terms);
    for (int t = 0; t < terms; ++t) {
      Exponent e(static_cast<std::size_t>(n), 0);
      int budget = uniform_int(0, max_deg);
      for (int i = 0; i < n && budget > 0; ++i) {
        const int k = uniform_int(0, budget);
        e[static_cast<std::size_t>(i)] = k;
        budget -= k;
      }
      p.add_term(e, small_rational());
    }
    return p;
  }

  std::vector<Rational> random_point(int n) {
    std::vector<Rational> v;
    for (int i = 0; i < n; ++i) v.push_back(small_rational());
    return v;
  }

  std::mt19937& engine() { return gen_; }

 private:
  std::mt19937 gen_;
};

inline std::vector<std::vector<Rational>> boolean_points(int n) {
  std::vector<std::vector<Rational>> pts;
  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<Rational> v;
    for (int i = 0; i < n; ++i) v.emplace_back((mask >> i) & 1u);
    pts.push_back(v);
  }
  return pts;
}

}  // namespace certlab::testkit
