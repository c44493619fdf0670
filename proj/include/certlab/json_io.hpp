#pragma once

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

#include "certlab/circuit.hpp"
#include "certlab/constraints.hpp"
#include "certlab/cube.hpp"
#include "certlab/error.hpp"
#include "certlab/hierarchy.hpp"
#include "certlab/lp.hpp"
#include "certlab/matrix.hpp"
#include "certlab/polynomial.hpp"
#include "certlab/polytope.hpp"
#include "certlab/rational.hpp"

// JSON forms of the library types. Rationals are strings "p/q" or "p"; object
// keys come out sorted, so equal values serialize to identical bytes.
namespace certlab::json_io {

using Json = nlohmann::json;

namespace detail {

inline const Json& field(const Json& j, const char* key) {
  if (!j.is_object()) throw ParseError(std::string("expected an object holding '") + key + "'");
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing field '") + key + "'");
  return *it;
}

inline const Json& array(const Json& j, const char* what) {
  if (!j.is_array()) throw ParseError(std::string(what) + " must be an array");
  return j;
}

inline int integer(const Json& j, const char* what) {
  if (!j.is_number_integer()) throw ParseError(std::string(what) + " must be an integer");
  return j.get<int>();
}

inline bool boolean(const Json& j, const char* what) {
  if (!j.is_boolean()) throw ParseError(std::string(what) + " must be a boolean");
  return j.get<bool>();
}

inline std::string text(const Json& j, const char* what) {
  if (!j.is_string()) throw ParseError(std::string(what) + " must be a string");
  return j.get<std::string>();
}

}  // namespace detail

// ---- scalars and vectors ----

inline Json to_json(const Rational& q) { return to_string(q); }

// Accepts rational strings and JSON integers.
inline Rational rational_from_json(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rational(j.dump());
  throw ParseError("rational must be a string \"p/q\" or an integer, got " + j.dump());
}

inline Json to_json(const RationalVector& v) {
  Json out = Json::array();
  for (const auto& q : v) out.push_back(to_json(q));
  return out;
}

inline RationalVector rational_vector_from_json(const Json& j) {
  RationalVector v;
  for (const auto& e : detail::array(j, "rational vector")) v.push_back(rational_from_json(e));
  return v;
}

inline std::vector<int> int_vector_from_json(const Json& j, const char* what) {
  std::vector<int> v;
  for (const auto& e : detail::array(j, what)) v.push_back(detail::integer(e, what));
  return v;
}

inline Json to_json(const VarSet& s) { return Json(s); }

inline VarSet varset_from_json(const Json& j, int n) {
  VarSet s = int_vector_from_json(j, "variable set");
  for (int i : s) {
    if (i < 0 || i >= n) throw ParseError("variable index " + std::to_string(i) + " out of range");
  }
  const VarSet norm = normalize_set(s);
  if (norm.size() != s.size()) throw ParseError("variable set has repeated indices");
  return norm;
}

// ---- polynomials ----

inline Json to_json(const Polynomial& p) {
  Json terms = Json::array();
  for (const auto& [e, c] : p.terms()) terms.push_back({{"coef", to_json(c)}, {"exp", e}});
  return {{"n", p.n()}, {"terms", terms}};
}

inline Polynomial polynomial_from_json(const Json& j) {
  const int n = detail::integer(detail::field(j, "n"), "n");
  if (n < 0) throw ParseError("negative variable count");
  Polynomial p(n);
  for (const auto& t : detail::array(detail::field(j, "terms"), "terms")) {
    const Exponent e = int_vector_from_json(detail::field(t, "exp"), "exp");
    if (static_cast<int>(e.size()) != n) throw ParseError("exponent length differs from n");
    for (int k : e) {
      if (k < 0) throw ParseError("negative exponent");
    }
    p.add_term(e, rational_from_json(detail::field(t, "coef")));
  }
  return p;
}

inline Json to_json(const std::vector<Exponent>& monomials) { return Json(monomials); }

inline std::vector<Exponent> monomials_from_json(const Json& j, int n) {
  std::vector<Exponent> out;
  for (const auto& e : detail::array(j, "monomials")) {
    out.push_back(int_vector_from_json(e, "monomial"));
    if (static_cast<int>(out.back().size()) != n) throw ParseError("monomial length differs from n");
  }
  return out;
}

// ---- point sets and matrices ----

inline Json to_json(const PointSet& ps) { return {{"dim", ps.dim}, {"points", ps.points}}; }

inline PointSet pointset_from_json(const Json& j) {
  const int dim = detail::integer(detail::field(j, "dim"), "dim");
  std::vector<IntPoint> pts;
  for (const auto& p : detail::array(detail::field(j, "points"), "points")) {
    pts.push_back(int_vector_from_json(p, "point"));
    if (static_cast<int>(pts.back().size()) != dim) throw ParseError("point length differs from dim");
  }
  return PointSet(dim, pts);
}

inline Json to_json(const SymMatrix& m) {
  Json rows = Json::array();
  for (const auto& r : m.rows()) rows.push_back(to_json(r));
  return {{"rows", rows}, {"size", m.size()}};
}

inline SymMatrix matrix_from_json(const Json& j) {
  const int size = detail::integer(detail::field(j, "size"), "size");
  std::vector<RationalVector> rows;
  for (const auto& r : detail::array(detail::field(j, "rows"), "rows")) rows.push_back(rational_vector_from_json(r));
  if (static_cast<int>(rows.size()) != size) throw ParseError("row count differs from size");
  for (const auto& r : rows) {
    if (r.size() != rows.size()) throw ParseError("matrix is not square");
  }
  try {
    return SymMatrix(rows);
  } catch (const PreconditionError& e) {
    throw ParseError(e.what());
  }
}

// ---- LP ----

inline std::string to_string(Relation r) {
  switch (r) {
    case Relation::LessEqual: return "<=";
    case Relation::Equal: return "=";
    case Relation::GreaterEqual: return ">=";
  }
  return "?";
}

inline Relation relation_from_json(const Json& j) {
  const std::string s = detail::text(j, "relation");
  if (s == "<=") return Relation::LessEqual;
  if (s == "=") return Relation::Equal;
  if (s == ">=") return Relation::GreaterEqual;
  throw ParseError("unknown relation '" + s + "'");
}

inline Json optional_to_json(const std::optional<Rational>& q) { return q ? to_json(*q) : Json(nullptr); }

inline Json to_json(const LPProblem& p) {
  Json rows = Json::array();
  for (const auto& r : p.rows) rows.push_back({{"a", to_json(r.a)}, {"b", to_json(r.b)}, {"rel", to_string(r.rel)}});
  Json lower = Json::array();
  Json upper = Json::array();
  for (std::size_t i = 0; i < p.num_vars; ++i) {
    lower.push_back(optional_to_json(p.lower[i]));
    upper.push_back(optional_to_json(p.upper[i]));
  }
  return {{"lower", lower},
          {"num_vars", p.num_vars},
          {"objective", p.objective ? to_json(*p.objective) : Json(nullptr)},
          {"rows", rows},
          {"upper", upper}};
}

inline LPProblem lp_problem_from_json(const Json& j) {
  const int vars = detail::integer(detail::field(j, "num_vars"), "num_vars");
  if (vars < 0) throw ParseError("negative variable count");
  LPProblem p(static_cast<std::size_t>(vars));
  if (const Json& obj = detail::field(j, "objective"); !obj.is_null()) p.objective = rational_vector_from_json(obj);
  for (const auto& r : detail::array(detail::field(j, "rows"), "rows")) {
    p.add_row(rational_vector_from_json(detail::field(r, "a")), relation_from_json(detail::field(r, "rel")),
              rational_from_json(detail::field(r, "b")));
  }
  auto bounds = [&](const char* key, std::vector<std::optional<Rational>>& out) {
    const Json& arr = detail::array(detail::field(j, key), key);
    if (arr.size() != out.size()) throw ParseError(std::string(key) + " length differs from num_vars");
    for (std::size_t i = 0; i < out.size(); ++i) {
      if (!arr[i].is_null()) out[i] = rational_from_json(arr[i]);
    }
  };
  bounds("lower", p.lower);
  bounds("upper", p.upper);
  try {
    p.validate();
  } catch (const DimensionMismatch& e) {
    throw ParseError(e.what());
  }
  return p;
}

inline Json to_json(const LPOutcome& o) {
  return {{"dual", to_json(o.dual)},
          {"objective_value", to_json(o.objective_value)},
          {"primal", to_json(o.primal)},
          {"ray", to_json(o.ray)},
          {"status", to_string(o.status)}};
}

// ---- circuits ----

inline Json to_json(const CircuitPolynomial& c) {
  Json inner = nullptr;
  if (c.inner_exp) inner = {{"coef", to_json(c.inner_coeff)}, {"exp", *c.inner_exp}};
  return {{"inner", inner}, {"n", c.n}, {"vertex_coeffs", to_json(c.vertex_coeffs)}, {"vertices", c.simplex.vertices}};
}

inline CircuitPolynomial circuit_from_json(const Json& j) {
  const int n = detail::integer(detail::field(j, "n"), "n");
  std::vector<IntPoint> verts;
  for (const auto& v : detail::array(detail::field(j, "vertices"), "vertices")) {
    verts.push_back(int_vector_from_json(v, "vertex"));
    if (static_cast<int>(verts.back().size()) != n) throw ParseError("vertex length differs from n");
  }
  const RationalVector coeffs = rational_vector_from_json(detail::field(j, "vertex_coeffs"));
  std::optional<Exponent> inner_exp;
  Rational inner_coeff = 0;
  if (const Json& inner = detail::field(j, "inner"); !inner.is_null()) {
    inner_exp = int_vector_from_json(detail::field(inner, "exp"), "inner exponent");
    if (static_cast<int>(inner_exp->size()) != n) throw ParseError("inner exponent length differs from n");
    inner_coeff = rational_from_json(detail::field(inner, "coef"));
  }
  try {
    return make_circuit(n, verts, coeffs, inner_exp, inner_coeff);
  } catch (const PreconditionError& e) {
    throw ParseError(e.what());
  } catch (const DimensionMismatch& e) {
    throw ParseError(e.what());
  }
}

inline Json to_json(const SoncDecomposition& d) {
  Json entries = Json::array();
  for (const auto& e : d.entries) entries.push_back({{"circuit", to_json(e.circuit)}, {"weight", to_json(e.weight)}});
  return {{"entries", entries}};
}

inline SoncDecomposition sonc_decomposition_from_json(const Json& j) {
  SoncDecomposition d;
  for (const auto& e : detail::array(detail::field(j, "entries"), "entries")) {
    d.entries.push_back({rational_from_json(detail::field(e, "weight")), circuit_from_json(detail::field(e, "circuit"))});
  }
  return d;
}

// ---- constraint systems ----

inline Json to_json(const ConstraintSystem& s) {
  Json cons = Json::array();
  for (const auto& c : s.constraints) cons.push_back({{"name", c.name}, {"poly", to_json(c.g)}});
  return {{"constraints", cons}, {"n", s.n}};
}

// Optional "hypercube": true appends ±(x_i² − x_i); optional "box": N appends
// N ± x_i.
inline ConstraintSystem constraint_system_from_json(const Json& j) {
  const int n = detail::integer(detail::field(j, "n"), "n");
  if (n < 0) throw ParseError("negative variable count");
  ConstraintSystem s(n);
  if (const auto it = j.find("constraints"); it != j.end()) {
    for (const auto& c : detail::array(*it, "constraints")) {
      Polynomial g = polynomial_from_json(detail::field(c, "poly"));
      if (g.n() != n) throw ParseError("constraint variable count differs from n");
      const auto name = c.find("name");
      s.add(name == c.end() ? "g" + std::to_string(s.size() + 1) : detail::text(*name, "name"), std::move(g));
    }
  }
  if (const auto it = j.find("hypercube"); it != j.end() && detail::boolean(*it, "hypercube")) s.add_hypercube();
  if (const auto it = j.find("box"); it != j.end()) s.add_box(rational_from_json(*it));
  return s;
}

// A system file optionally carries the objective to minimize.
struct Problem {
  std::optional<Polynomial> objective;
  ConstraintSystem system;
};

inline Problem problem_from_json(const Json& j) {
  Problem p;
  p.system = constraint_system_from_json(j);
  if (const auto it = j.find("objective"); it != j.end()) {
    p.objective = polynomial_from_json(*it);
    if (p.objective->n() != p.system.n) throw ParseError("objective variable count differs from n");
  }
  return p;
}

inline Json to_json(const Problem& p) {
  Json j = to_json(p.system);
  if (p.objective) j["objective"] = to_json(*p.objective);
  return j;
}

// ---- certificates ----

inline Json to_json(const JuntaTerm& t) { return {{"I", t.I}, {"J", t.J}, {"alpha", to_json(t.alpha)}}; }

inline Json to_json(const GroundElement& g) {
  Json out = std::visit(
      [](const auto& e) -> Json {
        using T = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<T, SOSGram>) {
          return {{"gram", to_json(e.gram)}, {"monomials", e.monomials}};
        } else if constexpr (std::is_same_v<T, SDSOSGram>) {
          return {{"gram", to_json(e.gram)}, {"monomials", e.monomials}, {"scaling", to_json(e.scaling)}};
        } else if constexpr (std::is_same_v<T, CircuitElement>) {
          return {{"circuit", to_json(e.circuit)}, {"weight", to_json(e.weight)}};
        } else if constexpr (std::is_same_v<T, JuntaElement>) {
          Json terms = Json::array();
          for (const auto& t : e.terms) terms.push_back(to_json(t));
          return {{"terms", terms}};
        } else {
          return {{"multiplier", to_json(e.multiplier)}};
        }
      },
      g);
  out["type"] = ground_name(g);
  return out;
}

inline GroundElement ground_from_json(const Json& j, int n) {
  const std::string type = detail::text(detail::field(j, "type"), "type");
  auto gram_pair = [&]() {
    std::vector<Exponent> mons = monomials_from_json(detail::field(j, "monomials"), n);
    SymMatrix g = matrix_from_json(detail::field(j, "gram"));
    if (g.size() != mons.size()) throw ParseError("gram size differs from monomial count");
    return std::make_pair(std::move(mons), std::move(g));
  };
  if (type == "sos_gram") {
    auto [mons, g] = gram_pair();
    return SOSGram{std::move(mons), std::move(g)};
  }
  if (type == "sdsos_gram") {
    auto [mons, g] = gram_pair();
    RationalVector scaling;
    if (const auto it = j.find("scaling"); it != j.end()) scaling = rational_vector_from_json(*it);
    return SDSOSGram{std::move(mons), std::move(g), std::move(scaling)};
  }
  if (type == "circuit") {
    CircuitElement c{rational_from_json(detail::field(j, "weight")), circuit_from_json(detail::field(j, "circuit"))};
    if (c.circuit.n != n) throw ParseError("circuit variable count differs from n");
    return c;
  }
  if (type == "junta") {
    JuntaElement e;
    for (const auto& t : detail::array(detail::field(j, "terms"), "terms")) {
      e.terms.push_back({varset_from_json(detail::field(t, "I"), n), varset_from_json(detail::field(t, "J"), n),
                         rational_from_json(detail::field(t, "alpha"))});
    }
    return e;
  }
  if (type == "ideal_multiplier") {
    Polynomial m = polynomial_from_json(detail::field(j, "multiplier"));
    if (m.n() != n) throw ParseError("multiplier variable count differs from n");
    return IdealMultiplier{std::move(m)};
  }
  throw ParseError("unknown ground element type '" + type + "'");
}

inline CertificateKind kind_from_string(const std::string& s) {
  for (auto k : {CertificateKind::SOS, CertificateKind::SDSOS, CertificateKind::SONC, CertificateKind::SA}) {
    if (to_string(k) == s) return k;
  }
  throw ParseError("unknown certificate kind '" + s + "'");
}

inline CertificateShape shape_from_string(const std::string& s) {
  if (s == "putinar") return CertificateShape::Putinar;
  if (s == "schmuedgen") return CertificateShape::Schmuedgen;
  throw ParseError("unknown certificate shape '" + s + "'");
}

inline Json to_json(const Certificate& c) {
  Json entries = Json::array();
  for (const auto& e : c.entries) entries.push_back({{"ground", to_json(e.ground)}, {"product", e.product}});
  return {{"degree", c.degree}, {"entries", entries}, {"kind", to_string(c.kind)}, {"shape", to_string(c.shape)}};
}

// n is the variable count of the polynomial being certified.
inline Certificate certificate_from_json(const Json& j, int n) {
  Certificate c;
  c.kind = kind_from_string(detail::text(detail::field(j, "kind"), "kind"));
  c.shape = shape_from_string(detail::text(detail::field(j, "shape"), "shape"));
  c.degree = detail::integer(detail::field(j, "degree"), "degree");
  for (const auto& e : detail::array(detail::field(j, "entries"), "entries")) {
    CertificateEntry entry{ground_from_json(detail::field(e, "ground"), n), {}};
    for (const auto& k : detail::array(detail::field(e, "product"), "product")) {
      if (!k.is_number_unsigned()) throw ParseError("product indices must be nonnegative integers");
      entry.product.push_back(k.get<std::size_t>());
    }
    c.entries.push_back(std::move(entry));
  }
  return c;
}

inline Json to_json(const VerificationReport& r) {
  Json failures = Json::array();
  for (const auto& f : r.entry_failures) failures.push_back(f ? Json(*f) : Json(nullptr));
  return {{"accepted", r.accepted}, {"entry_failures", failures}, {"residual", to_json(r.residual)}};
}

// ---- pseudoexpectations ----

inline Json to_json(const PseudoExpectation& pe) {
  Json moments = Json::array();
  for (const auto& [s, v] : pe.table) moments.push_back({{"set", s}, {"value", to_json(v)}});
  return {{"level", pe.level}, {"moments", moments}, {"n", pe.n}};
}

inline PseudoExpectation pseudoexpectation_from_json(const Json& j) {
  PseudoExpectation pe;
  pe.n = detail::integer(detail::field(j, "n"), "n");
  pe.level = detail::integer(detail::field(j, "level"), "level");
  if (pe.n < 0 || pe.level < 0) throw ParseError("negative n or level");
  for (const auto& m : detail::array(detail::field(j, "moments"), "moments")) {
    const VarSet s = varset_from_json(detail::field(m, "set"), pe.n);
    if (!pe.table.emplace(s, rational_from_json(detail::field(m, "value"))).second) {
      throw ParseError("repeated moment set");
    }
  }
  if (!pe.complete()) throw ParseError("pseudoexpectation must list every set up to its level with value 1 on {}");
  return pe;
}

inline Json to_json(const MomentMatrix& m) {
  return {{"constraint", to_json(m.constraint)},
          {"degree", m.degree},
          {"index_sets", m.index_sets},
          {"matrix", to_json(m.matrix)}};
}

inline Json to_json(const DualCheckReport& r) {
  Json v = Json::array();
  for (const auto& x : r.violations) {
    v.push_back({{"constraint", x.constraint ? Json(*x.constraint) : Json(nullptr)}, {"first", x.first}, {"second", x.second}});
  }
  return {{"passed", r.passed}, {"violations", v}};
}

// ---- reports ----

inline Json to_json(const SeparationReport& r) {
  Json systems = Json::array();
  for (const auto& s : r.systems) {
    systems.push_back({{"constraint_degree", s.constraint_degree},
                       {"degree_requirement", s.degree_requirement},
                       {"kind", s.kind},
                       {"radius_squared", to_json(s.radius_squared)},
                       {"zero_set_feasible", s.zero_set_feasible}});
  }
  return {{"all_facts_hold", r.all_facts_hold()},
          {"farkas_certificate_valid", r.farkas_certificate_valid},
          {"motzkin_is_sos", r.motzkin_is_sos},
          {"motzkin_simplex_class", r.motzkin_simplex_class},
          {"n", r.n},
          {"signed_quadric_is_sonc", r.signed_quadric_is_sonc},
          {"sonc_certificate_for_motzkin", r.sonc_certificate_for_motzkin},
          {"sos_certificate_for_signed_quadric", r.sos_certificate_for_signed_quadric},
          {"systems", systems},
          {"t", r.t}};
}

inline SeparationReport separation_report_from_json(const Json& j) {
  SeparationReport r;
  r.n = detail::integer(detail::field(j, "n"), "n");
  r.t = detail::integer(detail::field(j, "t"), "t");
  r.sos_certificate_for_signed_quadric = detail::boolean(detail::field(j, "sos_certificate_for_signed_quadric"), "fact");
  r.signed_quadric_is_sonc = detail::boolean(detail::field(j, "signed_quadric_is_sonc"), "fact");
  r.farkas_certificate_valid = detail::boolean(detail::field(j, "farkas_certificate_valid"), "fact");
  r.sonc_certificate_for_motzkin = detail::boolean(detail::field(j, "sonc_certificate_for_motzkin"), "fact");
  r.motzkin_is_sos = detail::boolean(detail::field(j, "motzkin_is_sos"), "fact");
  r.motzkin_simplex_class = detail::text(detail::field(j, "motzkin_simplex_class"), "class");
  for (const auto& s : detail::array(detail::field(j, "systems"), "systems")) {
    r.systems.push_back({detail::text(detail::field(s, "kind"), "kind"),
                         detail::integer(detail::field(s, "constraint_degree"), "constraint_degree"),
                         rational_from_json(detail::field(s, "radius_squared")),
                         detail::boolean(detail::field(s, "degree_requirement"), "degree_requirement"),
                         detail::boolean(detail::field(s, "zero_set_feasible"), "zero_set_feasible")});
  }
  return r;
}

// ---- text ----

// Parses JSON text, turning syntax and type errors into ParseError.
inline Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw ParseError(e.what());
  }
}

// Two-space indentation and a trailing newline.
inline std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace certlab::json_io
