#pragma once

#include <compare>
#include <optional>
#include <string>
#include <vector>

#include "certlab/error.hpp"
#include "certlab/matrix.hpp"
#include "certlab/polynomial.hpp"
#include "certlab/polytope.hpp"

namespace certlab {

// Σ_j c_j·x^{α(j)} + f_β·x^β with even simplex vertices α(j), c_j > 0 and β in
// the relative interior. Without an inner term the circuit is a plain sum of
// monomial squares (degenerate case).
struct CircuitPolynomial {
  int n = 0;
  SimplexData simplex;
  RationalVector vertex_coeffs;
  std::optional<Exponent> inner_exp;
  Rational inner_coeff;
  RationalVector lambdas;

  bool degenerate() const { return !inner_exp.has_value(); }

  Polynomial to_polynomial() const {
    Polynomial p(n);
    for (std::size_t j = 0; j < simplex.vertices.size(); ++j) p.add_term(simplex.vertices[j], vertex_coeffs[j]);
    if (inner_exp) p.add_term(*inner_exp, inner_coeff);
    return p;
  }
};

// Builds a circuit from its vertices, coefficients and optional inner term.
inline CircuitPolynomial make_circuit(int n, const std::vector<IntPoint>& vertices, const RationalVector& coeffs,
                                      const std::optional<Exponent>& inner_exp = std::nullopt,
                                      const Rational& inner_coeff = 0) {
  if (vertices.size() != coeffs.size()) throw DimensionMismatch("vertex and coefficient counts differ");
  CircuitPolynomial c;
  c.n = n;
  c.simplex = make_simplex(PointSet(n, vertices));
  if (c.simplex.vertices.size() != vertices.size()) throw PreconditionError("repeated vertex");
  c.vertex_coeffs = coeffs;
  if (inner_exp) {
    c.inner_exp = inner_exp;
    c.inner_coeff = inner_coeff;
    c.lambdas = barycentric(c.simplex, *inner_exp).lambdas;
  }
  return c;
}

// Structural validity without LP calls; nullopt when valid.
inline std::optional<std::string> circuit_defect(const CircuitPolynomial& c) {
  const auto& verts = c.simplex.vertices;
  if (verts.empty()) return "no vertices";
  if (c.vertex_coeffs.size() != verts.size()) return "vertex coefficient count mismatch";
  for (const auto& v : verts) {
    if (static_cast<int>(v.size()) != c.n) return "vertex length != n";
    if (!exponent_is_even(v)) return "vertex with an odd coordinate";
  }
  if (!geometry_detail::affinely_independent(verts)) return "vertices affinely dependent";
  for (const auto& a : c.vertex_coeffs) {
    if (a <= 0) return "nonpositive vertex coefficient";
  }
  if (!c.inner_exp) return std::nullopt;
  if (static_cast<int>(c.inner_exp->size()) != c.n) return "inner exponent length != n";
  if (c.lambdas.size() != verts.size()) return "barycentric weight count mismatch";
  Rational sum = 0;
  RationalVector point(static_cast<std::size_t>(c.n), Rational(0));
  for (std::size_t j = 0; j < verts.size(); ++j) {
    if (c.lambdas[j] <= 0) return "inner exponent not strictly interior";
    sum += c.lambdas[j];
    for (int k = 0; k < c.n; ++k) point[k] += c.lambdas[j] * verts[j][k];
  }
  if (sum != 1) return "barycentric weights do not sum to one";
  for (int k = 0; k < c.n; ++k) {
    if (point[k] != (*c.inner_exp)[k]) return "barycentric weights do not reproduce the inner exponent";
  }
  for (const auto& v : verts) {
    if (v == *c.inner_exp) return "inner exponent coincides with a vertex";
  }
  return std::nullopt;
}

enum class CircuitRejection { NotSimplex, OddVertex, NegativeVertexCoefficient, TooManyInteriorPoints, NotStrictlyInterior };

inline std::string to_string(CircuitRejection r) {
  switch (r) {
    case CircuitRejection::NotSimplex: return "Newton polytope is not a simplex";
    case CircuitRejection::OddVertex: return "vertex not even";
    case CircuitRejection::NegativeVertexCoefficient: return "negative vertex coefficient";
    case CircuitRejection::TooManyInteriorPoints: return "too many interior points";
    case CircuitRejection::NotStrictlyInterior: return "inner term not strictly interior";
  }
  return "unknown";
}

struct CircuitDetection {
  std::optional<CircuitPolynomial> circuit;
  std::optional<CircuitRejection> rejection;
  explicit operator bool() const { return circuit.has_value(); }
};

inline CircuitDetection detect_circuit(const Polynomial& p) {
  CircuitDetection out;
  const PointSet verts = newton_vertices(p);
  const SimplexCheck sc = is_simplex_with_even_vertices(verts);
  if (!sc) {
    out.rejection = *sc.rejection == SimplexRejection::AffinelyDependent ? CircuitRejection::NotSimplex
                                                                        : CircuitRejection::OddVertex;
    return out;
  }
  RationalVector coeffs;
  for (const auto& v : verts.points) {
    coeffs.push_back(p.coefficient(v));
    if (coeffs.back() < 0) {
      out.rejection = CircuitRejection::NegativeVertexCoefficient;
      return out;
    }
  }
  std::vector<Exponent> inner;
  for (const auto& [e, c] : p.terms()) {
    if (!verts.contains(e)) inner.push_back(e);
  }
  if (inner.size() > 1) {
    out.rejection = CircuitRejection::TooManyInteriorPoints;
    return out;
  }
  CircuitPolynomial c;
  c.n = p.n();
  c.simplex = *sc.simplex;
  c.vertex_coeffs = coeffs;
  if (inner.size() == 1) {
    const Barycentric b = barycentric(c.simplex, inner[0]);
    if (!b.strictly_interior) {
      out.rejection = CircuitRejection::NotStrictlyInterior;
      return out;
    }
    c.inner_exp = inner[0];
    c.inner_coeff = p.coefficient(inner[0]);
    c.lambdas = b.lambdas;
  }
  out.circuit = std::move(c);
  return out;
}

// Θ^D as an exact rational, where D is the lcm of the λ denominators.
struct CircuitNumberPower {
  Integer exponent;
  Rational theta_power;

  // Θ itself when Θ^D is a perfect D-th power of a rational.
  std::optional<Rational> exact_theta() const {
    const unsigned long d = exponent.get_ui();
    Integer num;
    Integer den;
    const bool ok_num = mpz_root(num.get_mpz_t(), theta_power.get_num_mpz_t(), d) != 0;
    const bool ok_den = mpz_root(den.get_mpz_t(), theta_power.get_den_mpz_t(), d) != 0;
    if (!ok_num || !ok_den) return std::nullopt;
    Rational t(num, den);
    t.canonicalize();
    return t;
  }
};

inline CircuitNumberPower circuit_number_power(const CircuitPolynomial& c) {
  if (c.degenerate()) throw PreconditionError("circuit number of a degenerate circuit");
  Integer d = 1;
  for (const auto& l : c.lambdas) d = lcm_integer(d, l.get_den());
  if (!d.fits_ulong_p()) throw BudgetExceeded("barycentric denominators too large");
  Rational prod = 1;
  for (std::size_t j = 0; j < c.lambdas.size(); ++j) {
    const Rational pj = c.lambdas[j] * d;
    prod *= pow_rational(c.vertex_coeffs[j] / c.lambdas[j], pj.get_num().get_ui());
  }
  return {d, prod};
}

// Sign of |f_β| − Θ_f, computed as |f_β|^D versus Π_j (f_α(j)/λ_j)^{λ_j·D}.
inline std::strong_ordering circuit_number_compare(const CircuitPolynomial& c) {
  const CircuitNumberPower cn = circuit_number_power(c);
  const Rational lhs = pow_rational(abs(c.inner_coeff), cn.exponent.get_ui());
  if (lhs < cn.theta_power) return std::strong_ordering::less;
  if (lhs > cn.theta_power) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

inline bool is_nonnegative_circuit(const CircuitPolynomial& c) {
  if (c.degenerate()) return true;
  const auto cmp = circuit_number_compare(c);
  if (!exponent_is_even(*c.inner_exp)) return cmp != std::strong_ordering::greater;
  return c.inner_coeff >= 0 || cmp != std::strong_ordering::greater;
}

inline bool circuit_is_sos(const CircuitPolynomial& c, std::uint64_t budget = kDefaultLatticeBudget) {
  if (!is_nonnegative_circuit(c)) throw PreconditionError("circuit is not nonnegative");
  if (c.degenerate() || c.inner_coeff == 0) return true;
  if (c.inner_coeff > 0 && exponent_is_even(*c.inner_exp)) return true;
  const PointSet mms = maximal_mediated_set(PointSet(c.n, c.simplex.vertices), MediationScan::Batch, budget);
  return mms.contains(*c.inner_exp);
}

struct SoncEntry {
  Rational weight;
  CircuitPolynomial circuit;
};

struct SoncDecomposition {
  std::vector<SoncEntry> entries;

  Polynomial expand(int n) const {
    Polynomial p(n);
    for (const auto& e : entries) p += e.circuit.to_polynomial() * e.weight;
    return p;
  }
};

struct SoncReport {
  bool accepted = false;
  std::vector<std::optional<std::string>> entry_failures;
  Polynomial residual;  // f − Σ weight·circuit
};

inline SoncReport verify_sonc_decomposition(const Polynomial& f, const SoncDecomposition& d) {
  SoncReport r;
  bool all_ok = true;
  r.residual = f;
  for (const auto& e : d.entries) {
    std::optional<std::string> fail;
    if (e.weight < 0) {
      fail = "negative weight";
    } else if (e.circuit.n != f.n()) {
      fail = "circuit in a different variable count";
    } else if (auto defect = circuit_defect(e.circuit)) {
      fail = *defect;
    } else if (!is_nonnegative_circuit(e.circuit)) {
      fail = "circuit is not nonnegative";
    }
    if (fail) all_ok = false;
    if (e.circuit.n == f.n()) r.residual -= e.circuit.to_polynomial() * e.weight;
    r.entry_failures.push_back(std::move(fail));
  }
  r.accepted = all_ok && r.residual.is_zero();
  return r;
}

// f = zᵀQz over z = (1, x_1, ..., x_n); unique for polynomials of degree <= 2.
inline SymMatrix quadratic_gram(const Polynomial& f) {
  if (f.total_degree() > 2) throw PreconditionError("polynomial degree exceeds 2");
  const int n = f.n();
  SymMatrix q(static_cast<std::size_t>(n) + 1);
  for (const auto& [e, c] : f.terms()) {
    std::vector<std::size_t> idx;
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < e[i]; ++k) idx.push_back(static_cast<std::size_t>(i) + 1);
    }
    while (idx.size() < 2) idx.insert(idx.begin(), 0);
    if (idx[0] == idx[1]) {
      q.set(idx[0], idx[1], c);
    } else {
      q.set(idx[0], idx[1], c / 2);
    }
  }
  return q;
}

inline std::vector<Exponent> affine_monomials(int n) {
  std::vector<Exponent> z{Exponent(static_cast<std::size_t>(n), 0)};
  for (int i = 0; i < n; ++i) z.push_back(unit_exponent(n, i));
  return z;
}

// A weighted binomial square as a circuit: a monomial square when b == 0,
// otherwise vertices 2A, 2B and inner term A + B.
inline CircuitPolynomial binomial_square_circuit(const BinomialSquare& s) {
  const int n = static_cast<int>(s.exp_a.size());
  if (s.b == 0 || s.exp_a == s.exp_b) {
    const Rational coef = s.weight * (s.a + (s.exp_a == s.exp_b ? s.b : Rational(0))) *
                          (s.a + (s.exp_a == s.exp_b ? s.b : Rational(0)));
    return make_circuit(n, {exponent_add(s.exp_a, s.exp_a)}, {coef});
  }
  return make_circuit(n, {exponent_add(s.exp_a, s.exp_a), exponent_add(s.exp_b, s.exp_b)},
                      {s.weight * s.a * s.a, s.weight * s.b * s.b}, exponent_add(s.exp_a, s.exp_b),
                      2 * s.weight * s.a * s.b);
}

struct QuadraticSoncResult {
  bool member = false;
  SymMatrix gram;
  SddResult sdd;
  std::optional<SoncDecomposition> witness;
};

// Degree-2 circuits are monomial squares and one-dimensional circuits on pairs
// of {1, x_1, ..., x_n}, so f is SONC exactly when its Gram matrix is sdd.
inline QuadraticSoncResult quadratic_sonc_membership(const Polynomial& f) {
  QuadraticSoncResult r;
  r.gram = quadratic_gram(f);
  r.sdd = is_sdd(r.gram);
  r.member = r.sdd.sdd;
  if (r.member) {
    SoncDecomposition d;
    for (const auto& s : sdd_to_binomial_squares(r.gram, r.sdd.scaling, affine_monomials(f.n()))) {
      if (s.weight == 0) continue;
      const CircuitPolynomial c = binomial_square_circuit(s);
      if (c.vertex_coeffs[0] == 0) continue;
      d.entries.push_back({1, c});
    }
    r.witness = std::move(d);
  }
  return r;
}

}  // namespace certlab
