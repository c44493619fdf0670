#pragma once

#include <optional>
#include <string>
#include <vector>

#include "certlab/error.hpp"
#include "certlab/lp.hpp"
#include "certlab/polynomial.hpp"
#include "certlab/rational.hpp"

namespace certlab {

// Dense symmetric rational matrix.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(std::size_t size) : rows_(size, RationalVector(size, Rational(0))) {}

  explicit SymMatrix(std::vector<RationalVector> rows) : rows_(std::move(rows)) {
    for (const auto& r : rows_) {
      if (r.size() != rows_.size()) throw DimensionMismatch("matrix is not square");
    }
    for (std::size_t i = 0; i < rows_.size(); ++i) {
      for (std::size_t j = i + 1; j < rows_.size(); ++j) {
        if (rows_[i][j] != rows_[j][i]) throw PreconditionError("matrix is not symmetric");
      }
    }
  }

  std::size_t size() const { return rows_.size(); }
  const Rational& operator()(std::size_t i, std::size_t j) const { return rows_[i][j]; }
  const std::vector<RationalVector>& rows() const { return rows_; }

  // Sets both (i,j) and (j,i).
  void set(std::size_t i, std::size_t j, const Rational& v) {
    rows_[i][j] = v;
    rows_[j][i] = v;
  }

  Rational quadratic_form(const RationalVector& v) const {
    if (v.size() != size()) throw DimensionMismatch("vector length != matrix size");
    Rational s = 0;
    for (std::size_t i = 0; i < size(); ++i) {
      if (v[i] == 0) continue;
      Rational row = 0;
      for (std::size_t j = 0; j < size(); ++j) {
        if (v[j] != 0) row += rows_[i][j] * v[j];
      }
      s += v[i] * row;
    }
    return s;
  }

  friend bool operator==(const SymMatrix& a, const SymMatrix& b) { return a.rows_ == b.rows_; }

 private:
  std::vector<RationalVector> rows_;
};

// One elimination step: the matrix gains d·l·lᵀ, with l[pivot] == 1.
struct LdlStep {
  std::size_t pivot;
  Rational d;
  RationalVector l;
};

struct PsdResult {
  bool psd = false;
  std::vector<LdlStep> factors;     // complete factorization M = Σ d·l·lᵀ when psd
  std::optional<RationalVector> witness;  // vᵀMv < 0 when not psd
};

// Exact symmetric elimination with diagonal pivoting.
inline PsdResult psd_check(const SymMatrix& m) {
  const std::size_t n = m.size();
  std::vector<RationalVector> s = m.rows();
  std::vector<bool> active(n, true);
  PsdResult out;

  auto lift = [&](RationalVector v) {
    for (std::size_t t = out.factors.size(); t-- > 0;) {
      const LdlStep& st = out.factors[t];
      Rational acc = 0;
      for (std::size_t k = 0; k < n; ++k) {
        if (k != st.pivot && st.l[k] != 0 && v[k] != 0) acc += st.l[k] * v[k];
      }
      v[st.pivot] = -acc;
    }
    return v;
  };

  for (;;) {
    std::optional<std::size_t> negative;
    std::optional<std::size_t> positive;
    for (std::size_t i = 0; i < n; ++i) {
      if (!active[i]) continue;
      if (s[i][i] < 0 && !negative) negative = i;
      if (s[i][i] > 0 && !positive) positive = i;
    }
    if (negative) {
      RationalVector v(n, Rational(0));
      v[*negative] = 1;
      out.witness = lift(v);
      return out;
    }
    if (!positive) {
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
          if (!active[i] || !active[j] || s[i][j] == 0) continue;
          RationalVector v(n, Rational(0));
          v[i] = 1;
          v[j] = s[i][j] > 0 ? -1 : 1;
          out.witness = lift(v);
          return out;
        }
      }
      out.psd = true;
      return out;
    }
    const std::size_t p = *positive;
    LdlStep st{p, s[p][p], RationalVector(n, Rational(0))};
    for (std::size_t k = 0; k < n; ++k) {
      if (active[k] && s[k][p] != 0) st.l[k] = s[k][p] / st.d;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (st.l[i] == 0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (st.l[j] != 0) s[i][j] -= st.d * st.l[i] * st.l[j];
      }
    }
    active[p] = false;
    out.factors.push_back(std::move(st));
  }
}

inline SymMatrix reconstruct(const std::vector<LdlStep>& factors, std::size_t n) {
  SymMatrix m(n);
  for (const auto& st : factors) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i; j < n; ++j) {
        if (st.l[i] != 0 && st.l[j] != 0) m.set(i, j, m(i, j) + st.d * st.l[i] * st.l[j]);
      }
    }
  }
  return m;
}

inline Rational offdiagonal_abs_sum(const SymMatrix& m, std::size_t i) {
  Rational s = 0;
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (j != i) s += abs(m(i, j));
  }
  return s;
}

inline bool is_dd(const SymMatrix& m) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (m(i, i) < offdiagonal_abs_sum(m, i)) return false;
  }
  return true;
}

// c·(e_i + sign·e_j)(e_i + sign·e_j)ᵀ
struct DDTerm {
  Rational c;
  std::size_t i;
  std::size_t j;
  int sign;
};

struct DDDecomposition {
  std::vector<DDTerm> terms;
  RationalVector diagonal_rest;

  SymMatrix reconstruct(std::size_t n) const {
    SymMatrix m(n);
    for (const auto& t : terms) {
      m.set(t.i, t.i, m(t.i, t.i) + t.c);
      m.set(t.j, t.j, m(t.j, t.j) + t.c);
      m.set(t.i, t.j, m(t.i, t.j) + t.c * t.sign);
    }
    for (std::size_t i = 0; i < n; ++i) m.set(i, i, m(i, i) + diagonal_rest[i]);
    return m;
  }
};

inline DDDecomposition dd_decompose(const SymMatrix& m) {
  if (!is_dd(m)) throw PreconditionError("matrix is not diagonally dominant");
  DDDecomposition out;
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i + 1; j < m.size(); ++j) {
      if (m(i, j) != 0) out.terms.push_back({abs(m(i, j)), i, j, m(i, j) > 0 ? 1 : -1});
    }
  }
  for (std::size_t i = 0; i < m.size(); ++i) out.diagonal_rest.push_back(m(i, i) - offdiagonal_abs_sum(m, i));
  return out;
}

struct SddResult {
  bool sdd = false;
  RationalVector scaling;  // d with D·M·D diagonally dominant
  LPProblem problem;
  LPOutcome outcome;       // Farkas data when not sdd
};

// LP over d >= 1: M_ii·d_i - Σ_{j≠i} |M_ij|·d_j >= 0, minimizing Σ d.
inline LPProblem sdd_scaling_problem(const SymMatrix& m) {
  const std::size_t n = m.size();
  LPProblem lp(n);
  for (std::size_t i = 0; i < n; ++i) lp.lower[i] = Rational(1);
  lp.objective = RationalVector(n, Rational(-1));
  for (std::size_t i = 0; i < n; ++i) {
    RationalVector row(n, Rational(0));
    for (std::size_t j = 0; j < n; ++j) row[j] = j == i ? m(i, i) : -abs(m(i, j));
    lp.add_row(std::move(row), Relation::GreaterEqual, 0);
  }
  return lp;
}

inline SymMatrix scale(const SymMatrix& m, const RationalVector& d) {
  SymMatrix out(m.size());
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = i; j < m.size(); ++j) out.set(i, j, d[i] * m(i, j) * d[j]);
  }
  return out;
}

inline SddResult is_sdd(const SymMatrix& m) {
  SddResult out;
  out.problem = sdd_scaling_problem(m);
  out.outcome = solve(out.problem);
  if (out.outcome.status == LPStatus::Optimal) {
    out.sdd = true;
    out.scaling = out.outcome.primal;
  }
  return out;
}

// Σ_{i,j} G_ij·x^{z_i + z_j}
inline Polynomial gram_expand(int n, const std::vector<Exponent>& monomials, const SymMatrix& g) {
  if (g.size() != monomials.size()) throw DimensionMismatch("Gram size != monomial count");
  Polynomial p(n);
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) {
      if (g(i, j) != 0) p.add_term(exponent_add(monomials[i], monomials[j]), g(i, j));
    }
  }
  return p;
}

struct GramReport {
  bool accepted = false;
  bool identity_holds = false;
  Polynomial residual;  // p - zᵀGz
  PsdResult psd;
};

inline GramReport gram_verify(const Polynomial& p, const std::vector<Exponent>& monomials, const SymMatrix& g) {
  if (g.size() != monomials.size()) throw DimensionMismatch("Gram size != monomial count");
  for (const auto& e : monomials) {
    if (static_cast<int>(e.size()) != p.n()) throw DimensionMismatch("monomial length != n");
  }
  GramReport r;
  r.residual = p - gram_expand(p.n(), monomials, g);
  r.identity_holds = r.residual.is_zero();
  r.psd = psd_check(g);
  r.accepted = r.identity_holds && r.psd.psd;
  return r;
}

// weight·(a·x^expA + b·x^expB)²; b == 0 encodes a monomial square.
struct BinomialSquare {
  Rational weight;
  Rational a;
  Exponent exp_a;
  Rational b;
  Exponent exp_b;

  Polynomial expand() const {
    Polynomial base = Polynomial::monomial(exp_a, a);
    if (b != 0) base += Polynomial::monomial(exp_b, b);
    return base * base * weight;
  }
};

inline std::vector<BinomialSquare> sdd_to_binomial_squares(const SymMatrix& m, const RationalVector& d,
                                                           const std::vector<Exponent>& monomials) {
  if (d.size() != m.size() || monomials.size() != m.size()) throw DimensionMismatch("scaling or basis size");
  for (const auto& di : d) {
    if (di <= 0) throw PreconditionError("scaling must be positive");
  }
  const SymMatrix dmd = scale(m, d);
  if (!is_dd(dmd)) throw PreconditionError("scaled matrix is not diagonally dominant");
  const DDDecomposition dec = dd_decompose(dmd);
  std::vector<BinomialSquare> out;
  for (const auto& t : dec.terms) {
    out.push_back({t.c, Rational(1 / d[t.i]), monomials[t.i], Rational(t.sign / d[t.j]), monomials[t.j]});
  }
  for (std::size_t i = 0; i < m.size(); ++i) {
    if (dec.diagonal_rest[i] != 0) out.push_back({dec.diagonal_rest[i], Rational(1 / d[i]), monomials[i], Rational(0), monomials[i]});
  }
  return out;
}

}  // namespace certlab
