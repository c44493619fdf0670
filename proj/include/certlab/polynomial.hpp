#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "certlab/error.hpp"
#include "certlab/rational.hpp"

namespace certlab {

using Exponent = std::vector<int>;

inline int exponent_degree(const Exponent& e) { return std::accumulate(e.begin(), e.end(), 0); }

// Graded lexicographic order: lower degree first, then x1 > x2 > ... within a degree.
struct GradedLex {
  bool operator()(const Exponent& a, const Exponent& b) const {
    const int da = exponent_degree(a);
    const int db = exponent_degree(b);
    if (da != db) return da < db;
    return b < a;
  }
};

inline Exponent exponent_add(const Exponent& a, const Exponent& b) {
  if (a.size() != b.size()) throw DimensionMismatch("exponent lengths differ");
  Exponent r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] + b[i];
  return r;
}

inline Exponent unit_exponent(int n, int i, int power = 1) {
  Exponent e(static_cast<std::size_t>(n), 0);
  e.at(static_cast<std::size_t>(i)) = power;
  return e;
}

inline bool exponent_is_even(const Exponent& e) {
  return std::all_of(e.begin(), e.end(), [](int k) { return k % 2 == 0; });
}

// ----------------------------------------------------------------------------
// Class: Polynomial
//
// Sparse polynomial in n variables with rational coefficients. Zero coefficients
// are never stored, so structural equality is mathematical equality.
// ----------------------------------------------------------------------------
class Polynomial {
 public:
  using TermMap = std::map<Exponent, Rational, GradedLex>;

  Polynomial() = default;
  explicit Polynomial(int n) : n_(n) {
    if (n < 0) throw PreconditionError("negative variable count");
  }

  static Polynomial constant(int n, const Rational& c) {
    Polynomial p(n);
    p.add_term(Exponent(static_cast<std::size_t>(n), 0), c);
    return p;
  }

  static Polynomial monomial(const Exponent& e, const Rational& c = 1) {
    Polynomial p(static_cast<int>(e.size()));
    p.add_term(e, c);
    return p;
  }

  // x_i with a 0-based index.
  static Polynomial variable(int n, int i) { return monomial(unit_exponent(n, i)); }

  int n() const { return n_; }
  const TermMap& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  std::size_t size() const { return terms_.size(); }

  Rational coefficient(const Exponent& e) const {
    auto it = terms_.find(e);
    return it == terms_.end() ? Rational(0) : it->second;
  }

  void add_term(const Exponent& e, const Rational& c) {
    if (static_cast<int>(e.size()) != n_) throw DimensionMismatch("exponent length != n");
    for (int k : e) {
      if (k < 0) throw PreconditionError("negative exponent");
    }
    if (c == 0) return;
    auto [it, inserted] = terms_.try_emplace(e, c);
    if (!inserted) {
      it->second += c;
      if (it->second == 0) terms_.erase(it);
    }
  }

  // Degree of the zero polynomial is -1.
  int total_degree() const {
    int d = -1;
    for (const auto& [e, c] : terms_) d = std::max(d, exponent_degree(e));
    return d;
  }

  Rational eval(const std::vector<Rational>& point) const {
    if (static_cast<int>(point.size()) != n_) throw DimensionMismatch("point length != n");
    Rational total = 0;
    for (const auto& [e, c] : terms_) {
      Rational m = c;
      for (int i = 0; i < n_; ++i) {
        if (e[i] != 0) m *= pow_rational(point[i], static_cast<unsigned long>(e[i]));
      }
      total += m;
    }
    return total;
  }

  // 0-based indices of variables appearing in the support.
  std::set<int> variables_used() const {
    std::set<int> vars;
    for (const auto& [e, c] : terms_) {
      for (int i = 0; i < n_; ++i) {
        if (e[i] != 0) vars.insert(i);
      }
    }
    return vars;
  }

  Polynomial& operator+=(const Polynomial& q) {
    check_dim(q);
    for (const auto& [e, c] : q.terms_) add_term(e, c);
    return *this;
  }

  Polynomial& operator-=(const Polynomial& q) {
    check_dim(q);
    for (const auto& [e, c] : q.terms_) add_term(e, -c);
    return *this;
  }

  Polynomial& operator*=(const Rational& s) {
    if (s == 0) {
      terms_.clear();
      return *this;
    }
    for (auto& [e, c] : terms_) c *= s;
    return *this;
  }

  friend Polynomial operator+(Polynomial p, const Polynomial& q) { return p += q; }
  friend Polynomial operator-(Polynomial p, const Polynomial& q) { return p -= q; }
  friend Polynomial operator*(Polynomial p, const Rational& s) { return p *= s; }
  friend Polynomial operator*(const Rational& s, Polynomial p) { return p *= s; }
  friend Polynomial operator-(Polynomial p) { return p *= Rational(-1); }

  friend Polynomial operator*(const Polynomial& p, const Polynomial& q) {
    p.check_dim(q);
    Polynomial r(p.n_);
    for (const auto& [ea, ca] : p.terms_) {
      for (const auto& [eb, cb] : q.terms_) r.add_term(exponent_add(ea, eb), ca * cb);
    }
    return r;
  }

  friend bool operator==(const Polynomial& p, const Polynomial& q) {
    return p.n_ == q.n_ && p.terms_ == q.terms_;
  }

  Polynomial pow(unsigned k) const {
    Polynomial r = constant(n_, 1);
    for (unsigned i = 0; i < k; ++i) r = r * *this;
    return r;
  }

  // Human readable form, e.g. "1 - 3*x1^2*x2^2 + x1^4*x2^2".
  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [e, c] : terms_) {
      Rational mag = abs(c);
      if (first) {
        if (c < 0) os << "-";
      } else {
        os << (c < 0 ? " - " : " + ");
      }
      first = false;
      const bool constant_term = exponent_degree(e) == 0;
      bool wrote = false;
      if (mag != 1 || constant_term) {
        os << mag.get_str();
        wrote = true;
      }
      for (int i = 0; i < n_; ++i) {
        if (e[i] == 0) continue;
        if (wrote) os << "*";
        os << "x" << (i + 1);
        if (e[i] > 1) os << "^" << e[i];
        wrote = true;
      }
    }
    return os.str();
  }

 private:
  void check_dim(const Polynomial& q) const {
    if (n_ != q.n_) throw DimensionMismatch("polynomials in different variable counts");
  }

  int n_ = 0;
  TermMap terms_;
};

// x_i^2 - x_i
inline Polynomial hypercube_generator(int n, int i) {
  return Polynomial::monomial(unit_exponent(n, i, 2)) - Polynomial::variable(n, i);
}

// Division by the hypercube ideal. Returns (q, r) with p == Σ_i q_i·(x_i² − x_i) + r
// and r multilinear. Uses x^γ = x^{γ−e_i} + (x_i² − x_i)·x^{γ−2e_i} for γ_i ≥ 2.
struct HypercubeDivision {
  std::vector<Polynomial> quotients;
  Polynomial remainder;
};

inline HypercubeDivision reduce_mod_hypercube(const Polynomial& p) {
  const int n = p.n();
  HypercubeDivision out{std::vector<Polynomial>(static_cast<std::size_t>(n), Polynomial(n)), Polynomial(n)};
  for (const auto& [e, c] : p.terms()) {
    Exponent cur = e;
    for (int i = 0; i < n; ++i) {
      // x_i^k = x_i + (x_i^2 - x_i)(x_i^{k-2} + ... + x_i^0), applied with the other factors fixed.
      while (cur[i] >= 2) {
        Exponent q = cur;
        q[i] -= 2;
        out.quotients[i].add_term(q, c);
        cur[i] -= 1;
      }
    }
    out.remainder.add_term(cur, c);
  }
  return out;
}

inline Polynomial multilinear_reduce(const Polynomial& p) { return reduce_mod_hypercube(p).remainder; }

}  // namespace certlab
