#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "certlab/circuit.hpp"
#include "certlab/constraints.hpp"
#include "certlab/cube.hpp"
#include "certlab/error.hpp"
#include "certlab/matrix.hpp"
#include "certlab/polynomial.hpp"
#include "certlab/polytope.hpp"

namespace certlab {

enum class CertificateKind { SOS, SDSOS, SONC, SA };

inline std::string to_string(CertificateKind k) {
  switch (k) {
    case CertificateKind::SOS: return "sos";
    case CertificateKind::SDSOS: return "sdsos";
    case CertificateKind::SONC: return "sonc";
    case CertificateKind::SA: return "sa";
  }
  return "unknown";
}

struct SOSGram {
  std::vector<Exponent> monomials;
  SymMatrix gram;
};

// An empty scaling is recomputed by the sdd LP during verification.
struct SDSOSGram {
  std::vector<Exponent> monomials;
  SymMatrix gram;
  RationalVector scaling;
};

struct CircuitElement {
  Rational weight = 1;
  CircuitPolynomial circuit;
};

struct JuntaElement {
  std::vector<JuntaTerm> terms;
};

// Multiplier of arbitrary sign on a single ±(x_i² − x_i) constraint.
struct IdealMultiplier {
  Polynomial multiplier;
};

using GroundElement = std::variant<SOSGram, SDSOSGram, CircuitElement, JuntaElement, IdealMultiplier>;

struct CertificateEntry {
  GroundElement ground;
  std::vector<std::size_t> product;
};

// Σ ground·Π g_product = f − λ. SA certificates of degree D give juntas and
// products a combined budget of D/2; the other kinds use D.
struct Certificate {
  CertificateKind kind = CertificateKind::SOS;
  CertificateShape shape = CertificateShape::Putinar;
  int degree = 0;
  std::vector<CertificateEntry> entries;
};

inline Polynomial ground_polynomial(int n, const GroundElement& g) {
  return std::visit(
      [n](const auto& e) -> Polynomial {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, SOSGram> || std::is_same_v<T, SDSOSGram>) {
          return gram_expand(n, e.monomials, e.gram);
        } else if constexpr (std::is_same_v<T, CircuitElement>) {
          return e.circuit.to_polynomial() * e.weight;
        } else if constexpr (std::is_same_v<T, JuntaElement>) {
          return expand_juntas(n, e.terms);
        } else {
          return e.multiplier;
        }
      },
      g);
}

inline std::string ground_name(const GroundElement& g) {
  static const char* names[] = {"sos_gram", "sdsos_gram", "circuit", "junta", "ideal_multiplier"};
  return names[g.index()];
}

struct VerificationReport {
  bool accepted = false;
  std::vector<std::optional<std::string>> entry_failures;
  Polynomial residual;  // f − λ − Σ ground·Π g
};

namespace hierarchy_detail {

inline bool kind_accepts(CertificateKind k, const GroundElement& g) {
  if (std::holds_alternative<IdealMultiplier>(g)) return true;
  switch (k) {
    case CertificateKind::SOS: return std::holds_alternative<SOSGram>(g);
    case CertificateKind::SDSOS: return std::holds_alternative<SDSOSGram>(g);
    case CertificateKind::SONC: return std::holds_alternative<CircuitElement>(g);
    case CertificateKind::SA: return std::holds_alternative<JuntaElement>(g);
  }
  return false;
}

inline std::optional<std::string> check_basis(int n, const std::vector<Exponent>& monomials, const SymMatrix& g) {
  if (monomials.size() != g.size()) return "Gram size differs from the monomial count";
  for (const auto& e : monomials) {
    if (static_cast<int>(e.size()) != n) return "monomial of the wrong length";
  }
  return std::nullopt;
}

// Size and index errors that make the ground polynomial undefined.
inline std::optional<std::string> dimension_defect(int n, const GroundElement& g) {
  if (const auto* s = std::get_if<SOSGram>(&g)) return check_basis(n, s->monomials, s->gram);
  if (const auto* s = std::get_if<SDSOSGram>(&g)) {
    if (!s->scaling.empty() && s->scaling.size() != s->gram.size()) return "scaling has the wrong length";
    return check_basis(n, s->monomials, s->gram);
  }
  if (const auto* c = std::get_if<CircuitElement>(&g)) {
    const CircuitPolynomial& cp = c->circuit;
    if (cp.n != n) return "circuit in a different variable count";
    if (cp.vertex_coeffs.size() != cp.simplex.vertices.size()) return "vertex coefficient count mismatch";
    for (const auto& v : cp.simplex.vertices) {
      if (static_cast<int>(v.size()) != n) return "vertex length != n";
    }
    if (cp.inner_exp && static_cast<int>(cp.inner_exp->size()) != n) return "inner exponent length != n";
    return std::nullopt;
  }
  if (const auto* j = std::get_if<JuntaElement>(&g)) {
    for (const auto& t : j->terms) {
      for (int v : set_union(t.I, t.J)) {
        if (v < 0 || v >= n) return "junta variable out of range";
      }
    }
    return std::nullopt;
  }
  if (std::get<IdealMultiplier>(g).multiplier.n() != n) return "ideal multiplier in a different variable count";
  return std::nullopt;
}

// Membership of a dimensionally sound ground element in its ground set.
inline std::optional<std::string> ground_defect(const GroundElement& g) {
  if (const auto* s = std::get_if<SOSGram>(&g)) {
    if (!psd_check(s->gram).psd) return "Gram matrix is not positive semidefinite";
  } else if (const auto* s = std::get_if<SDSOSGram>(&g)) {
    if (s->scaling.empty()) {
      if (!is_sdd(s->gram).sdd) return "Gram matrix is not scaled diagonally dominant";
    } else {
      for (const auto& v : s->scaling) {
        if (v <= 0) return "scaling is not positive";
      }
      if (!is_dd(scale(s->gram, s->scaling))) return "scaled Gram matrix is not diagonally dominant";
    }
  } else if (const auto* c = std::get_if<CircuitElement>(&g)) {
    if (c->weight < 0) return "negative circuit weight";
    if (auto d = circuit_defect(c->circuit)) return d;
    if (!is_nonnegative_circuit(c->circuit)) return "circuit is not nonnegative";
  } else if (const auto* j = std::get_if<JuntaElement>(&g)) {
    for (const auto& t : j->terms) {
      if (t.alpha < 0) return "negative junta coefficient";
    }
  }
  return std::nullopt;
}

inline int junta_degree(const JuntaElement& j) {
  int d = 0;
  for (const auto& t : j.terms) d = std::max(d, t.degree());
  return d;
}

}  // namespace hierarchy_detail

inline int product_degree(const ConstraintSystem& sys, const std::vector<std::size_t>& product) {
  int d = 0;
  for (std::size_t k : product) d += std::max(sys.constraints[k].g.total_degree(), 0);
  return d;
}

inline VerificationReport verify(const Polynomial& f, const Rational& lambda, const ConstraintSystem& sys,
                                 const Certificate& cert) {
  if (f.n() != sys.n) throw DimensionMismatch("objective and constraint system");
  const int n = sys.n;
  VerificationReport rep;
  rep.residual = f - Polynomial::constant(n, lambda);
  bool all_ok = true;
  for (const auto& e : cert.entries) {
    std::optional<std::string> fail;
    bool indices_ok = true;
    for (std::size_t k : e.product) {
      if (k >= sys.size()) indices_ok = false;
    }
    const bool ideal = std::holds_alternative<IdealMultiplier>(e.ground);
    const auto dim = hierarchy_detail::dimension_defect(n, e.ground);
    if (!indices_ok) {
      fail = "constraint index out of range";
    } else if (dim) {
      fail = *dim;
    } else if (!hierarchy_detail::kind_accepts(cert.kind, e.ground)) {
      fail = ground_name(e.ground) + " is not a " + to_string(cert.kind) + " ground element";
    } else if (ideal && (e.product.size() != 1 || !sys.is_hypercube_constraint(e.product[0]))) {
      fail = "ideal multiplier must sit on a single hypercube constraint";
    } else if (!ideal && cert.shape == CertificateShape::Putinar && e.product.size() > 1) {
      fail = "Putinar entry uses a product of constraints";
    } else if (auto d = hierarchy_detail::ground_defect(e.ground)) {
      fail = *d;
    }
    std::optional<Polynomial> term;
    if (indices_ok && !dim) term = ground_polynomial(n, e.ground);
    if (!fail && term && !ideal) {
      const int pd = product_degree(sys, e.product);
      if (const auto* j = std::get_if<JuntaElement>(&e.ground)) {
        if (hierarchy_detail::junta_degree(*j) + pd > cert.degree / 2) fail = "junta times product exceeds degree/2";
      } else if (std::max(term->total_degree(), 0) + pd > cert.degree) {
        fail = "ground element times product exceeds the degree";
      }
    }
    if (term) {
      for (std::size_t k : e.product) *term = *term * sys.constraints[k].g;
      rep.residual -= *term;
    }
    if (fail) all_ok = false;
    rep.entry_failures.push_back(std::move(fail));
  }
  rep.accepted = all_ok && rep.residual.is_zero();
  return rep;
}

// Certificate for the bound of an optimal Sherali-Adams solution.
inline Certificate sa_certificate(const SASolution& sol) {
  if (sol.status != LPStatus::Optimal) throw PreconditionError("Sherali-Adams solution is not optimal");
  Certificate c{CertificateKind::SA, sol.shape, sol.degree, {}};
  for (const auto& e : sol.entries) c.entries.push_back({JuntaElement{{e.junta}}, e.product});
  for (const auto& k : sol.corrections) c.entries.push_back({IdealMultiplier{k.multiplier}, {k.constraint}});
  return c;
}

// Each sdd Gram element becomes its binomial squares, each square one circuit.
inline Certificate convert_sdsos_to_sonc(const Certificate& cert) {
  if (cert.kind != CertificateKind::SDSOS) throw PreconditionError("certificate is not SDSOS");
  Certificate out{CertificateKind::SONC, cert.shape, cert.degree, {}};
  for (const auto& e : cert.entries) {
    const auto* g = std::get_if<SDSOSGram>(&e.ground);
    if (!g) {
      if (!std::holds_alternative<IdealMultiplier>(e.ground)) throw PreconditionError("unexpected ground element");
      out.entries.push_back(e);
      continue;
    }
    RationalVector d = g->scaling;
    if (d.empty()) {
      const SddResult r = is_sdd(g->gram);
      if (!r.sdd) throw PreconditionError("Gram matrix is not sdd");
      d = r.scaling;
    }
    for (const auto& s : sdd_to_binomial_squares(g->gram, d, g->monomials)) {
      if (s.weight == 0 || (s.a == 0 && s.b == 0)) continue;
      const CircuitPolynomial c = binomial_square_circuit(s);
      if (std::any_of(c.vertex_coeffs.begin(), c.vertex_coeffs.end(), [](const Rational& v) { return v == 0; })) continue;
      out.entries.push_back({CircuitElement{1, c}, e.product});
    }
  }
  return out;
}

// Circuits become juntas on their variables; the difference is rewritten on
// the hypercube equations. The output degree doubles.
inline Certificate convert_sonc_to_sa(const Certificate& cert, const ConstraintSystem& sys) {
  if (cert.kind != CertificateKind::SONC) throw PreconditionError("certificate is not SONC");
  if (!sys.has_hypercube()) throw PreconditionError("constraint system lacks the hypercube equations");
  const int n = sys.n;
  Certificate out{CertificateKind::SA, cert.shape, 2 * cert.degree, {}};
  Polynomial gap(n);
  for (const auto& e : cert.entries) {
    const auto* c = std::get_if<CircuitElement>(&e.ground);
    if (!c) {
      if (!std::holds_alternative<IdealMultiplier>(e.ground)) throw PreconditionError("unexpected ground element");
      out.entries.push_back(e);
      continue;
    }
    std::vector<JuntaTerm> terms = circuit_to_junta(c->circuit);
    for (auto& t : terms) t.alpha *= c->weight;
    terms = canonicalize(terms);
    Polynomial prod = Polynomial::constant(n, 1);
    for (std::size_t k : e.product) prod = prod * sys.constraints[k].g;
    gap += (c->circuit.to_polynomial() * c->weight - expand_juntas(n, terms)) * prod;
    if (!terms.empty()) out.entries.push_back({JuntaElement{terms}, e.product});
  }
  const HypercubeDivision div = reduce_mod_hypercube(gap);
  if (!div.remainder.is_zero()) throw InternalError("circuit and junta differ on the cube");
  for (int i = 0; i < n; ++i) {
    const Polynomial& q = div.quotients[static_cast<std::size_t>(i)];
    if (!q.is_zero()) out.entries.push_back({IdealMultiplier{q}, {*sys.hypercube_index(i, 1)}});
  }
  return out;
}

// N_n = (1 − Σ x_j)².
inline Polynomial witness_signed_quadric(int n) {
  if (n < 1) throw PreconditionError("n must be at least 1");
  Polynomial l = Polynomial::constant(n, 1);
  for (int j = 0; j < n; ++j) l -= Polynomial::variable(n, j);
  return l * l;
}

// M_n = 1 + Σ_j x^{2(e+e_j)} − (n+1)·x^{2e}.
inline Polynomial witness_generalized_motzkin(int n) {
  if (n < 2) throw PreconditionError("n must be at least 2");
  Polynomial p = Polynomial::constant(n, 1);
  for (int j = 0; j < n; ++j) {
    Exponent e(static_cast<std::size_t>(n), 2);
    e[static_cast<std::size_t>(j)] = 4;
    p.add_term(e, 1);
  }
  p.add_term(Exponent(static_cast<std::size_t>(n), 2), -(n + 1));
  return p;
}

enum class CpopKind { SosFriendly, SoncFriendly };

struct Cpop {
  Polynomial objective;
  ConstraintSystem system;
  Rational radius_squared;
  int exponent = 1;  // the ball constraint is raised to this odd power
};

// Objective N_n or M_n under the single constraint (R² − Σ x_j²)^{2k+1} with
// k = ⌈t/2⌉. R² = 1 keeps the unit 1-sphere feasible, R² = n keeps {±1}^n
// feasible (on the boundary).
inline Cpop witness_cpop(CpopKind kind, int n, int t) {
  if (n < 2 || t < 1) throw PreconditionError("need n >= 2 and t >= 1");
  const int k = (t + 1) / 2;
  Cpop c;
  c.exponent = 2 * k + 1;
  c.radius_squared = kind == CpopKind::SosFriendly ? Rational(1) : Rational(n);
  c.objective = kind == CpopKind::SosFriendly ? witness_signed_quadric(n) : witness_generalized_motzkin(n);
  Polynomial ball = Polynomial::constant(n, c.radius_squared);
  for (int j = 0; j < n; ++j) ball -= Polynomial::variable(n, j).pow(2);
  c.system = ConstraintSystem(n);
  c.system.add("ball", ball.pow(static_cast<unsigned>(c.exponent)));
  return c;
}

// Rank-one Gram for N_n over (1, x_1, ..., x_n): v = (1, −1, ..., −1).
inline Certificate signed_quadric_sos_certificate(int n) {
  const auto basis = affine_monomials(n);
  RationalVector v(basis.size(), Rational(-1));
  v[0] = 1;
  SymMatrix g(basis.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i; j < v.size(); ++j) g.set(i, j, v[i] * v[j]);
  }
  return {CertificateKind::SOS, CertificateShape::Putinar, 2, {{SOSGram{basis, g}, {}}}};
}

inline Certificate motzkin_sonc_certificate(int n) {
  const auto c = detect_circuit(witness_generalized_motzkin(n)).circuit;
  if (!c) throw InternalError("generalized Motzkin polynomial is not detected as a circuit");
  return {CertificateKind::SONC, CertificateShape::Putinar, 2 * n + 2, {{CircuitElement{1, *c}, {}}}};
}

struct CpopSummary {
  std::string kind;
  int constraint_degree = 0;
  Rational radius_squared;
  bool degree_requirement = false;  // constraint degree >= 2t+1 (sos_friendly) or t+1 (sonc_friendly)
  bool zero_set_feasible = false;   // constraint is nonnegative at the objective's sampled zeros

  friend bool operator==(const CpopSummary&, const CpopSummary&) = default;
};

struct SeparationReport {
  int n = 0;
  int t = 0;
  bool sos_certificate_for_signed_quadric = false;
  bool signed_quadric_is_sonc = true;
  bool farkas_certificate_valid = false;
  bool sonc_certificate_for_motzkin = false;
  bool motzkin_is_sos = true;
  std::string motzkin_simplex_class;
  std::vector<CpopSummary> systems;

  bool all_facts_hold() const {
    return sos_certificate_for_signed_quadric && !signed_quadric_is_sonc && farkas_certificate_valid &&
           sonc_certificate_for_motzkin && !motzkin_is_sos;
  }

  friend bool operator==(const SeparationReport&, const SeparationReport&) = default;
};

inline SeparationReport separation_report(int n, int t) {
  if (n < 2 || t < 1) throw PreconditionError("need n >= 2 and t >= 1");
  SeparationReport r;
  r.n = n;
  r.t = t;
  const ConstraintSystem free_system(n);
  const Polynomial nq = witness_signed_quadric(n);
  r.sos_certificate_for_signed_quadric = verify(nq, 0, free_system, signed_quadric_sos_certificate(n)).accepted;

  const QuadraticSoncResult q = quadratic_sonc_membership(nq);
  r.signed_quadric_is_sonc = q.member;
  r.farkas_certificate_valid =
      q.sdd.outcome.status == LPStatus::Infeasible && check_certificate(q.sdd.problem, q.sdd.outcome);

  const Polynomial m = witness_generalized_motzkin(n);
  const Certificate mc = motzkin_sonc_certificate(n);
  r.sonc_certificate_for_motzkin = verify(m, 0, free_system, mc).accepted;
  const auto& circuit = std::get<CircuitElement>(mc.entries[0].ground).circuit;
  r.motzkin_is_sos = circuit_is_sos(circuit);
  r.motzkin_simplex_class = to_string(classify_simplex(PointSet(n, circuit.simplex.vertices)));

  for (CpopKind kind : {CpopKind::SosFriendly, CpopKind::SoncFriendly}) {
    const Cpop c = witness_cpop(kind, n, t);
    CpopSummary s;
    s.kind = kind == CpopKind::SosFriendly ? "sos_friendly" : "sonc_friendly";
    s.constraint_degree = c.system.constraints[0].g.total_degree();
    s.radius_squared = c.radius_squared;
    s.degree_requirement = s.constraint_degree >= (kind == CpopKind::SosFriendly ? 2 * t + 1 : t + 1);
    std::vector<std::vector<Rational>> zeros;
    if (kind == CpopKind::SosFriendly) {
      for (int j = 0; j < n; ++j) {
        for (int sgn : {1, -1}) {
          std::vector<Rational> p(static_cast<std::size_t>(n), Rational(0));
          p[static_cast<std::size_t>(j)] = sgn;
          zeros.push_back(p);
        }
      }
    } else {
      for (unsigned mask = 0; mask < (1u << n); ++mask) {
        std::vector<Rational> p;
        for (int j = 0; j < n; ++j) p.emplace_back(((mask >> j) & 1u) ? -1 : 1);
        zeros.push_back(p);
      }
    }
    s.zero_set_feasible = true;
    for (const auto& p : zeros) s.zero_set_feasible = s.zero_set_feasible && c.system.constraints[0].g.eval(p) >= 0;
    r.systems.push_back(s);
  }
  return r;
}

}  // namespace certlab
