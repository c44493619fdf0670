#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <iterator>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "certlab/circuit.hpp"
#include "certlab/constraints.hpp"
#include "certlab/error.hpp"
#include "certlab/lp.hpp"
#include "certlab/matrix.hpp"
#include "certlab/polynomial.hpp"

namespace certlab {

// Sorted set of 0-based variable indices.
using VarSet = std::vector<int>;

inline constexpr std::size_t kDefaultColumnBudget = 20000;
inline constexpr int kMaxMobiusSize = 12;

inline VarSet set_union(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline VarSet set_difference(const VarSet& a, const VarSet& b) {
  VarSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

inline bool set_includes(const VarSet& outer, const VarSet& inner) {
  return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

inline VarSet normalize_set(VarSet s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
  return s;
}

// Members of K selected by the bits of mask (bit k selects K[k]).
inline VarSet subset_from_mask(const VarSet& k, std::uint64_t mask) {
  VarSet out;
  for (std::size_t b = 0; b < k.size(); ++b) {
    if ((mask >> b) & 1u) out.push_back(k[b]);
  }
  return out;
}

// Subsets of {0..n-1} with at most k elements, ordered by size and then lexicographically.
inline std::vector<VarSet> subsets_up_to(int n, int k) {
  std::vector<VarSet> out{{}};
  std::vector<VarSet> layer{{}};
  for (int s = 1; s <= std::min(n, k); ++s) {
    std::vector<VarSet> next;
    for (const auto& base : layer) {
      for (int v = base.empty() ? 0 : base.back() + 1; v < n; ++v) {
        VarSet t = base;
        t.push_back(v);
        next.push_back(t);
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

// Multilinear monomial Π_{i∈S} x_i.
inline Polynomial set_monomial(int n, const VarSet& s) {
  Exponent e(static_cast<std::size_t>(n), 0);
  for (int i : s) e[static_cast<std::size_t>(i)] = 1;
  return Polynomial::monomial(e);
}

// α · Π_{i∈I} x_i · Π_{j∈J} (1 − x_j).
struct JuntaTerm {
  VarSet I;
  VarSet J;
  Rational alpha = 1;

  bool vanishes_on_cube() const {
    VarSet common;
    std::set_intersection(I.begin(), I.end(), J.begin(), J.end(), std::back_inserter(common));
    return !common.empty();
  }

  int degree() const { return static_cast<int>(set_union(I, J).size()); }

  Polynomial expand(int n) const {
    Polynomial p = set_monomial(n, I);
    for (int j : J) p = p * (Polynomial::constant(n, 1) - Polynomial::variable(n, j));
    p *= alpha;
    return p;
  }

  friend bool operator==(const JuntaTerm&, const JuntaTerm&) = default;
};

inline Polynomial expand_juntas(int n, const std::vector<JuntaTerm>& terms) {
  Polynomial p(n);
  for (const auto& t : terms) p += t.expand(n);
  return p;
}

// Drops zero and cube-vanishing terms and merges equal patterns.
inline std::vector<JuntaTerm> canonicalize(const std::vector<JuntaTerm>& terms) {
  std::map<std::pair<VarSet, VarSet>, Rational> acc;
  for (const auto& t : terms) {
    if (t.alpha == 0 || t.vanishes_on_cube()) continue;
    acc[{normalize_set(t.I), normalize_set(t.J)}] += t.alpha;
  }
  std::vector<JuntaTerm> out;
  for (const auto& [key, a] : acc) out.push_back({key.first, key.second, a});
  return out;
}

// Multilinear indicator of the cube point v; v_j = 0 selects (1 − x_j).
inline Polynomial kronecker_delta(const std::vector<bool>& v) {
  const int n = static_cast<int>(v.size());
  JuntaTerm t;
  for (int j = 0; j < n; ++j) (v[static_cast<std::size_t>(j)] ? t.I : t.J).push_back(j);
  return t.expand(n);
}

// Σ_v values[v]·δ_v over the variables K. values is indexed by assignment
// masks over K (bit k is the value of K[k]).
inline std::vector<JuntaTerm> junta_from_values(const VarSet& k, const RationalVector& values) {
  if (k.size() > 62) throw BudgetExceeded("junta support too large");
  if (values.size() != (std::size_t{1} << k.size())) throw DimensionMismatch("value table size");
  std::vector<JuntaTerm> out;
  for (std::uint64_t m = 0; m < values.size(); ++m) {
    const Rational& a = values[m];
    if (a < 0) throw PreconditionError("negative junta value " + to_string(a));
    if (a == 0) continue;
    const VarSet in = subset_from_mask(k, m);
    out.push_back({in, set_difference(k, in), a});
  }
  return out;
}

inline RationalVector cube_values(const Polynomial& p, const VarSet& k) {
  RationalVector vals;
  std::vector<Rational> point(static_cast<std::size_t>(p.n()), Rational(0));
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << k.size()); ++m) {
    for (std::size_t b = 0; b < k.size(); ++b) point[static_cast<std::size_t>(k[b])] = ((m >> b) & 1u) ? 1 : 0;
    vals.push_back(p.eval(point));
  }
  return vals;
}

inline std::vector<JuntaTerm> circuit_to_junta(const CircuitPolynomial& c) {
  if (!is_nonnegative_circuit(c)) throw PreconditionError("circuit is not nonnegative");
  const Polynomial p = c.to_polynomial();
  const std::set<int> used = p.variables_used();
  const VarSet k(used.begin(), used.end());
  if (static_cast<int>(k.size()) > std::max(p.total_degree(), 0)) {
    throw PreconditionError("more variables than the degree");
  }
  const RationalVector vals = cube_values(multilinear_reduce(p), k);
  for (const auto& v : vals) {
    if (v < 0) throw InternalError("nonnegative circuit takes a negative cube value");
  }
  return junta_from_values(k, vals);
}

enum class CertificateShape { Putinar, Schmuedgen };

inline std::string to_string(CertificateShape s) { return s == CertificateShape::Putinar ? "putinar" : "schmuedgen"; }

// One nonnegative junta against a product of constraints (empty product = 1).
struct SAEntry {
  JuntaTerm junta;
  std::vector<std::size_t> product;
};

// Arbitrary-sign multiplier on a hypercube equation constraint.
struct IdealCorrection {
  std::size_t constraint = 0;
  Polynomial multiplier;
};

struct SASolution {
  LPStatus status = LPStatus::Infeasible;
  std::optional<Rational> bound;
  int degree = 0;
  CertificateShape shape = CertificateShape::Putinar;
  std::vector<SAEntry> entries;
  std::vector<IdealCorrection> corrections;
  std::vector<Exponent> row_monomials;
  LPProblem problem;
  LPOutcome outcome;

  // Σ entries + Σ corrections + bound, expanded in R[x].
  Polynomial assemble(const ConstraintSystem& sys) const {
    Polynomial s = Polynomial::constant(sys.n, bound.value_or(0));
    for (const auto& e : entries) {
      Polynomial t = e.junta.expand(sys.n);
      for (std::size_t k : e.product) t = t * sys.constraints[k].g;
      s += t;
    }
    for (const auto& c : corrections) s += c.multiplier * sys.constraints[c.constraint].g;
    return s;
  }
};

namespace cube_detail {

struct Column {
  JuntaTerm junta;
  std::vector<std::size_t> product;
  Polynomial reduced;
};

inline std::vector<PreprimeProduct> sa_products(const ConstraintSystem& sys, int d, CertificateShape shape) {
  ConstraintSystem rest(sys.n);
  std::vector<std::size_t> back;
  for (std::size_t k = 0; k < sys.size(); ++k) {
    if (sys.is_hypercube_constraint(k)) continue;
    rest.add(sys.constraints[k].name, sys.constraints[k].g);
    back.push_back(k);
  }
  std::vector<PreprimeProduct> out;
  if (shape == CertificateShape::Schmuedgen) {
    out = preprime_products(rest, d);
  } else {
    out.push_back({{}, Polynomial::constant(sys.n, 1), 0});
    for (std::size_t k = 0; k < rest.size(); ++k) {
      const int deg = rest.constraints[k].g.total_degree();
      if (deg >= 0 && deg <= d) out.push_back({{k}, rest.constraints[k].g, deg});
    }
  }
  for (auto& p : out) {
    for (auto& f : p.factors) f = back[f];
  }
  return out;
}

}  // namespace cube_detail

// Maximizes λ such that f − λ = Σ α·x_I x̄_J·P + (hypercube ideal), with α >= 0
// and |I ∪ J| + deg P <= degree/2 for every product P. The LP lives in the
// multilinear quotient; the returned certificate adds explicit multipliers on
// the ±(x_i² − x_i) constraints so that it is an identity in R[x].
inline SASolution sa_solve(const Polynomial& f, const ConstraintSystem& sys, int degree,
                           CertificateShape shape = CertificateShape::Putinar,
                           std::size_t budget = kDefaultColumnBudget) {
  if (f.n() != sys.n) throw DimensionMismatch("objective and constraint system");
  if (!sys.has_hypercube()) throw PreconditionError("constraint system lacks the hypercube equations");
  if (degree < 0) throw PreconditionError("negative degree");
  const int n = sys.n;
  const int d = degree / 2;

  std::vector<cube_detail::Column> cols;
  for (const auto& prod : cube_detail::sa_products(sys, d, shape)) {
    const int room = d - prod.degree;
    if (room < 0) continue;
    const Polynomial reduced_prod = multilinear_reduce(prod.product);
    const int size = std::min(room, n);
    for (const VarSet& support : subsets_up_to(n, size)) {
      if (static_cast<int>(support.size()) != size) continue;
      for (std::uint64_t m = 0; m < (std::uint64_t{1} << support.size()); ++m) {
        if (cols.size() >= budget) throw BudgetExceeded("Sherali-Adams LP exceeds " + std::to_string(budget) + " columns");
        const VarSet in = subset_from_mask(support, m);
        JuntaTerm t{in, set_difference(support, in), 1};
        cols.push_back({t, prod.factors, multilinear_reduce(t.expand(n) * reduced_prod)});
      }
    }
  }

  const Polynomial target = multilinear_reduce(f);
  std::set<Exponent, GradedLex> monos{Exponent(static_cast<std::size_t>(n), 0)};
  for (const auto& [e, c] : target.terms()) monos.insert(e);
  for (const auto& col : cols) {
    for (const auto& [e, c] : col.reduced.terms()) monos.insert(e);
  }

  SASolution sol;
  sol.degree = degree;
  sol.shape = shape;
  sol.row_monomials.assign(monos.begin(), monos.end());
  const std::size_t nv = cols.size() + 1;
  LPProblem lp(nv);
  for (std::size_t j = 0; j < cols.size(); ++j) lp.lower[j] = Rational(0);
  RationalVector obj(nv, Rational(0));
  obj[cols.size()] = 1;
  lp.objective = obj;
  for (const auto& e : sol.row_monomials) {
    RationalVector a(nv, Rational(0));
    for (std::size_t j = 0; j < cols.size(); ++j) a[j] = cols[j].reduced.coefficient(e);
    if (exponent_degree(e) == 0) a[cols.size()] = 1;
    lp.add_row(std::move(a), Relation::Equal, target.coefficient(e));
  }
  sol.problem = lp;
  sol.outcome = solve(lp);
  sol.status = sol.outcome.status;
  if (sol.status != LPStatus::Optimal) return sol;

  sol.bound = sol.outcome.primal[cols.size()];
  for (std::size_t j = 0; j < cols.size(); ++j) {
    const Rational& a = sol.outcome.primal[j];
    if (a == 0) continue;
    JuntaTerm t = cols[j].junta;
    t.alpha = a;
    sol.entries.push_back({t, cols[j].product});
  }
  const HypercubeDivision div = reduce_mod_hypercube(f - sol.assemble(sys));
  if (!div.remainder.is_zero()) throw InternalError("Sherali-Adams identity fails in the multilinear quotient");
  for (int i = 0; i < n; ++i) {
    const Polynomial& q = div.quotients[static_cast<std::size_t>(i)];
    if (q.is_zero()) continue;
    sol.corrections.push_back({*sys.hypercube_index(i, 1), q});
  }
  return sol;
}

// Linear functional on multilinear polynomials, stored on subsets up to size level.
struct PseudoExpectation {
  int n = 0;
  int level = 0;
  std::map<VarSet, Rational> table;

  const Rational& moment(const VarSet& s) const {
    if (static_cast<int>(s.size()) > level) {
      throw PreconditionError("moment of a set of size " + std::to_string(s.size()) + " above level " +
                              std::to_string(level));
    }
    const auto it = table.find(s);
    if (it == table.end()) throw PreconditionError("pseudoexpectation table has no entry for a required set");
    return it->second;
  }

  Rational expect(const Polynomial& p) const {
    if (p.n() != n) throw DimensionMismatch("polynomial and pseudoexpectation");
    Rational s = 0;
    const Polynomial reduced = multilinear_reduce(p);
    for (const auto& [e, c] : reduced.terms()) {
      VarSet set;
      for (std::size_t i = 0; i < e.size(); ++i) {
        if (e[i] != 0) set.push_back(static_cast<int>(i));
      }
      s += c * moment(set);
    }
    return s;
  }

  // Every subset of size <= level present and Ẽ[1] = 1.
  bool complete() const {
    for (const auto& s : subsets_up_to(n, level)) {
      if (!table.count(s)) return false;
    }
    return table.count({}) && table.at({}) == 1;
  }
};

inline PseudoExpectation pe_from_distribution(int n, const std::vector<std::vector<bool>>& points,
                                              const RationalVector& weights, int level) {
  if (points.size() != weights.size()) throw DimensionMismatch("points and weights");
  Rational total = 0;
  for (const auto& w : weights) {
    if (w < 0) throw PreconditionError("negative weight");
    total += w;
  }
  if (total != 1) throw PreconditionError("weights sum to " + to_string(total) + ", not 1");
  PseudoExpectation pe{n, level, {}};
  for (const auto& s : subsets_up_to(n, level)) {
    Rational v = 0;
    for (std::size_t k = 0; k < points.size(); ++k) {
      if (points[k].size() != static_cast<std::size_t>(n)) throw DimensionMismatch("cube point");
      if (std::all_of(s.begin(), s.end(), [&](int i) { return points[k][static_cast<std::size_t>(i)]; })) {
        v += weights[k];
      }
    }
    pe.table[s] = v;
  }
  return pe;
}

struct MomentMatrix {
  Polynomial constraint;
  int degree = 0;
  std::vector<VarSet> index_sets;
  SymMatrix matrix;
};

inline int effective_degree(const Polynomial& g) { return std::max(g.total_degree(), 0); }

// Localizing matrix of g: rows and columns indexed by subsets of size <= ⌊(degree − deg g)/2⌋.
inline MomentMatrix moment_matrix(const PseudoExpectation& pe, const Polynomial& g, int degree) {
  if (pe.level < degree) throw PreconditionError("pseudoexpectation level too low for the requested degree");
  const int half = (degree - effective_degree(g)) >= 0 ? (degree - effective_degree(g)) / 2 : -1;
  MomentMatrix mm{g, degree, {}, SymMatrix(0)};
  if (half < 0) return mm;
  mm.index_sets = subsets_up_to(pe.n, half);
  const std::size_t k = mm.index_sets.size();
  mm.matrix = SymMatrix(k);
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = a; b < k; ++b) {
      mm.matrix.set(a, b, pe.expect(g * set_monomial(pe.n, set_union(mm.index_sets[a], mm.index_sets[b]))));
    }
  }
  return mm;
}

// Z(I,J) = (−1)^{|J \ I|} if I ⊆ J, else 0, over subsets of K in mask order.
inline std::vector<RationalVector> mobius_matrix(const VarSet& k) {
  if (static_cast<int>(k.size()) > kMaxMobiusSize) throw BudgetExceeded("Möbius matrix on more than 12 elements");
  const std::uint64_t size = std::uint64_t{1} << k.size();
  std::vector<RationalVector> z(size, RationalVector(size, Rational(0)));
  for (std::uint64_t i = 0; i < size; ++i) {
    for (std::uint64_t j = 0; j < size; ++j) {
      if ((i & j) != i) continue;
      z[i][j] = (std::popcount(j & ~i) % 2 == 0) ? 1 : -1;
    }
  }
  return z;
}

// Ẽ[g·x_{I∪J}] over subsets I, J of K in mask order.
inline SymMatrix restricted_moment_matrix(const PseudoExpectation& pe, const Polynomial& g, const VarSet& k) {
  const std::size_t size = std::size_t{1} << k.size();
  SymMatrix m(size);
  for (std::size_t a = 0; a < size; ++a) {
    for (std::size_t b = a; b < size; ++b) m.set(a, b, pe.expect(g * set_monomial(pe.n, subset_from_mask(k, a | b))));
  }
  return m;
}

// Ẽ[g·Π_{i∈I} x_i·Π_{j∈K\I}(1 − x_j)], expanded directly.
inline Rational local_mass(const PseudoExpectation& pe, const Polynomial& g, const VarSet& k, const VarSet& in) {
  return pe.expect(g * JuntaTerm{in, set_difference(k, in), 1}.expand(pe.n));
}

inline RationalVector mobius_diagonalize(const PseudoExpectation& pe, const Polynomial& g, const VarSet& k,
                                         int degree) {
  if (degree < effective_degree(g) || static_cast<int>(k.size()) > (degree - effective_degree(g)) / 2) {
    throw PreconditionError("subset too large for the degree");
  }
  const auto z = mobius_matrix(k);
  const SymMatrix m = restricted_moment_matrix(pe, g, k);
  const std::size_t size = z.size();
  std::vector<RationalVector> zm(size, RationalVector(size, Rational(0)));
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = 0; j < size; ++j) {
      for (std::size_t l = 0; l < size; ++l) {
        if (z[i][l] != 0) zm[i][j] += z[i][l] * m(l, j);
      }
    }
  }
  RationalVector diag(size);
  for (std::size_t i = 0; i < size; ++i) {
    for (std::size_t j = 0; j < size; ++j) {
      Rational v = 0;
      for (std::size_t l = 0; l < size; ++l) {
        if (z[j][l] != 0) v += zm[i][l] * z[j][l];
      }
      if (i == j) {
        diag[i] = v;
      } else if (v != 0) {
        throw InternalError("Möbius transform left a nonzero off-diagonal entry");
      }
    }
    if (diag[i] != local_mass(pe, g, k, subset_from_mask(k, i))) {
      throw InternalError("Möbius diagonal disagrees with the local mass");
    }
  }
  return diag;
}

// Splits pe along x_i = bit. The result is defined on subsets up to level − 1.
inline PseudoExpectation condition(const PseudoExpectation& pe, int i, int bit) {
  if (pe.level < 2) throw PreconditionError("conditioning needs level at least 2");
  if (i < 0 || i >= pe.n) throw DimensionMismatch("variable index");
  if (bit != 0 && bit != 1) throw PreconditionError("branch must be 0 or 1");
  const Rational p = pe.moment({i});
  if (p < 0 || p > 1) throw PreconditionError("marginal of x_i outside [0,1]");
  if (bit == 1 && p == 0) throw DegenerateBranch("x_i = 1 has zero mass");
  if (bit == 0 && p == 1) throw DegenerateBranch("x_i = 0 has zero mass");
  PseudoExpectation out{pe.n, pe.level - 1, {}};
  for (const auto& s : subsets_up_to(pe.n, out.level)) {
    const Rational with = pe.moment(set_union(s, {i}));
    out.table[s] = bit == 1 ? Rational(with / p) : Rational((pe.moment(s) - with) / (1 - p));
  }
  return out;
}

// Constraint index of g, or nullopt for the implicit g_0 = 1.
struct DualViolation {
  std::optional<std::size_t> constraint;
  VarSet first;
  VarSet second;
};

struct DualCheckReport {
  bool passed = true;
  std::vector<DualViolation> violations;
};

inline std::vector<std::pair<std::optional<std::size_t>, Polynomial>> with_unit(const ConstraintSystem& sys) {
  std::vector<std::pair<std::optional<std::size_t>, Polynomial>> out{{std::nullopt, Polynomial::constant(sys.n, 1)}};
  for (std::size_t k = 0; k < sys.size(); ++k) out.emplace_back(k, sys.constraints[k].g);
  return out;
}

// All 1×1 and 2×2 principal minors of every localizing matrix at the given degree.
inline DualCheckReport sdsos_dual_check(const PseudoExpectation& pe, const ConstraintSystem& sys, int degree) {
  DualCheckReport rep;
  for (const auto& [idx, g] : with_unit(sys)) {
    const MomentMatrix mm = moment_matrix(pe, g, degree);
    const SymMatrix& m = mm.matrix;
    for (std::size_t a = 0; a < m.size(); ++a) {
      if (m(a, a) < 0) rep.violations.push_back({idx, mm.index_sets[a], mm.index_sets[a]});
    }
    for (std::size_t a = 0; a < m.size(); ++a) {
      for (std::size_t b = a + 1; b < m.size(); ++b) {
        if (m(a, a) < 0 || m(b, b) < 0) continue;
        if (m(a, a) * m(b, b) < m(a, b) * m(a, b)) rep.violations.push_back({idx, mm.index_sets[a], mm.index_sets[b]});
      }
    }
  }
  rep.passed = rep.violations.empty();
  return rep;
}

// Ẽ[g·x_I x̄_{K\I}] >= 0 for every g, every K with |K| <= ⌊(degree − deg g)/2⌋ and I ⊆ K.
// Violations report (K, I).
inline DualCheckReport sa_dual_diag_check(const PseudoExpectation& pe, const ConstraintSystem& sys, int degree) {
  DualCheckReport rep;
  for (const auto& [idx, g] : with_unit(sys)) {
    if (degree < effective_degree(g)) continue;
    const int room = (degree - effective_degree(g)) / 2;
    for (const VarSet& k : subsets_up_to(pe.n, room)) {
      const RationalVector diag = mobius_diagonalize(pe, g, k, degree);
      for (std::size_t a = 0; a < diag.size(); ++a) {
        if (diag[a] < 0) rep.violations.push_back({idx, k, subset_from_mask(k, a)});
      }
    }
  }
  rep.passed = rep.violations.empty();
  return rep;
}

// Full PSD test of every localizing matrix at the given degree. Violations name
// the constraint only.
inline DualCheckReport moment_psd_check(const PseudoExpectation& pe, const ConstraintSystem& sys, int degree) {
  DualCheckReport rep;
  for (const auto& [idx, g] : with_unit(sys)) {
    const MomentMatrix mm = moment_matrix(pe, g, degree);
    if (mm.matrix.size() == 0) continue;
    const PsdResult r = psd_check(mm.matrix);
    if (!r.psd) rep.violations.push_back({idx, {}, {}});
  }
  rep.passed = rep.violations.empty();
  return rep;
}

}  // namespace certlab
