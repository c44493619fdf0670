#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "certlab/error.hpp"
#include "certlab/lp.hpp"
#include "certlab/polynomial.hpp"

namespace certlab {

using IntPoint = std::vector<int>;

inline constexpr std::uint64_t kDefaultLatticeBudget = 1000000;

// Finite set of integer points of a common dimension, duplicates removed,
// first-occurrence order kept.
struct PointSet {
  int dim = 0;
  std::vector<IntPoint> points;

  PointSet() = default;
  PointSet(int d, const std::vector<IntPoint>& pts) : dim(d) {
    std::set<IntPoint> seen;
    for (const auto& p : pts) {
      if (static_cast<int>(p.size()) != dim) throw DimensionMismatch("point length != dim");
      if (seen.insert(p).second) points.push_back(p);
    }
  }

  bool contains(const IntPoint& p) const { return std::find(points.begin(), points.end(), p) != points.end(); }
  std::size_t size() const { return points.size(); }

  // Same points in graded-lex order.
  PointSet sorted() const {
    PointSet s = *this;
    std::sort(s.points.begin(), s.points.end(), GradedLex{});
    return s;
  }

  friend bool operator==(const PointSet& a, const PointSet& b) {
    return a.dim == b.dim && std::set<IntPoint>(a.points.begin(), a.points.end()) ==
                                 std::set<IntPoint>(b.points.begin(), b.points.end());
  }
};

namespace geometry_detail {

// Rank of a rational matrix by exact elimination.
inline std::size_t rank(std::vector<RationalVector> rows) {
  std::size_t r = 0;
  const std::size_t cols = rows.empty() ? 0 : rows[0].size();
  for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
    std::size_t piv = r;
    while (piv < rows.size() && rows[piv][c] == 0) ++piv;
    if (piv == rows.size()) continue;
    std::swap(rows[piv], rows[r]);
    for (std::size_t i = r + 1; i < rows.size(); ++i) {
      if (rows[i][c] == 0) continue;
      const Rational f = rows[i][c] / rows[r][c];
      for (std::size_t k = c; k < cols; ++k) rows[i][k] -= f * rows[r][k];
    }
    ++r;
  }
  return r;
}

// Solves the (possibly overdetermined) system A·x = b for a full-column-rank A.
// Returns nullopt when the system is inconsistent.
inline std::optional<RationalVector> solve_full_column_rank(std::vector<RationalVector> a, RationalVector b) {
  const std::size_t m = a.size();
  const std::size_t n = m == 0 ? 0 : a[0].size();
  std::size_t r = 0;
  std::vector<std::size_t> pivot_cols;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = r;
    while (piv < m && a[piv][c] == 0) ++piv;
    if (piv == m) throw InternalError("system is not of full column rank");
    std::swap(a[piv], a[r]);
    std::swap(b[piv], b[r]);
    for (std::size_t i = 0; i < m; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Rational f = a[i][c] / a[r][c];
      for (std::size_t k = c; k < n; ++k) a[i][k] -= f * a[r][k];
      b[i] -= f * b[r];
    }
    pivot_cols.push_back(c);
    ++r;
  }
  for (std::size_t i = r; i < m; ++i) {
    if (b[i] != 0) return std::nullopt;
  }
  RationalVector x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = b[i] / a[i][i];
  return x;
}

// Feasibility of q = Σ μ_k·p_k, μ >= 0, Σ μ = 1.
inline bool in_convex_hull(const std::vector<IntPoint>& pts, const IntPoint& q) {
  if (pts.empty()) return false;
  const std::size_t dim = q.size();
  LPProblem lp(pts.size());
  lp.set_nonnegative();
  for (std::size_t c = 0; c < dim; ++c) {
    RationalVector row;
    for (const auto& p : pts) row.emplace_back(p[c]);
    lp.add_row(std::move(row), Relation::Equal, q[c]);
  }
  lp.add_row(RationalVector(pts.size(), Rational(1)), Relation::Equal, 1);
  return solve(lp).status == LPStatus::Optimal;
}

inline bool affinely_independent(const std::vector<IntPoint>& pts) {
  if (pts.size() <= 1) return true;
  std::vector<RationalVector> diffs;
  for (std::size_t k = 1; k < pts.size(); ++k) {
    RationalVector d;
    for (std::size_t c = 0; c < pts[0].size(); ++c) d.emplace_back(pts[k][c] - pts[0][c]);
    diffs.push_back(std::move(d));
  }
  return rank(diffs) == diffs.size();
}

}  // namespace geometry_detail

// Support points of p that are vertices of its Newton polytope.
inline PointSet newton_vertices(const Polynomial& p) {
  if (p.is_zero()) throw PreconditionError("Newton polytope of the zero polynomial");
  std::vector<IntPoint> support;
  for (const auto& [e, c] : p.terms()) support.push_back(e);
  std::vector<IntPoint> verts;
  for (std::size_t k = 0; k < support.size(); ++k) {
    std::vector<IntPoint> others;
    for (std::size_t j = 0; j < support.size(); ++j) {
      if (j != k) others.push_back(support[j]);
    }
    if (!geometry_detail::in_convex_hull(others, support[k])) verts.push_back(support[k]);
  }
  return PointSet(p.n(), verts);
}

inline PointSet hull_vertices(const PointSet& ps) {
  std::vector<IntPoint> verts;
  for (std::size_t k = 0; k < ps.size(); ++k) {
    std::vector<IntPoint> others;
    for (std::size_t j = 0; j < ps.size(); ++j) {
      if (j != k) others.push_back(ps.points[j]);
    }
    if (!geometry_detail::in_convex_hull(others, ps.points[k])) verts.push_back(ps.points[k]);
  }
  return PointSet(ps.dim, verts);
}

struct SimplexData {
  int dim = 0;
  std::vector<IntPoint> vertices;
  std::vector<bool> even_flags;

  bool all_even() const { return std::all_of(even_flags.begin(), even_flags.end(), [](bool b) { return b; }); }
};

enum class SimplexRejection { AffinelyDependent, OddVertex };

inline std::string to_string(SimplexRejection r) {
  return r == SimplexRejection::AffinelyDependent ? "affinely dependent" : "odd vertex";
}

struct SimplexCheck {
  std::optional<SimplexData> simplex;
  std::optional<SimplexRejection> rejection;
  explicit operator bool() const { return simplex.has_value(); }
};

inline SimplexData make_simplex(const PointSet& ps) {
  if (!geometry_detail::affinely_independent(ps.points)) throw PreconditionError("points are affinely dependent");
  SimplexData s{ps.dim, ps.points, {}};
  for (const auto& v : s.vertices) s.even_flags.push_back(exponent_is_even(v));
  return s;
}

inline SimplexCheck is_simplex_with_even_vertices(const PointSet& ps) {
  SimplexCheck out;
  if (!geometry_detail::affinely_independent(ps.points)) {
    out.rejection = SimplexRejection::AffinelyDependent;
    return out;
  }
  SimplexData s = make_simplex(ps);
  if (!s.all_even()) {
    out.rejection = SimplexRejection::OddVertex;
    return out;
  }
  out.simplex = std::move(s);
  return out;
}

struct Barycentric {
  RationalVector lambdas;
  bool strictly_interior = false;
};

inline std::optional<Barycentric> try_barycentric(const SimplexData& s, const IntPoint& q) {
  if (static_cast<int>(q.size()) != s.dim) throw DimensionMismatch("point length != simplex dim");
  const std::size_t k = s.vertices.size();
  std::vector<RationalVector> a;
  RationalVector b;
  for (int c = 0; c < s.dim; ++c) {
    RationalVector row;
    for (const auto& v : s.vertices) row.emplace_back(v[c]);
    a.push_back(std::move(row));
    b.emplace_back(q[c]);
  }
  a.emplace_back(k, Rational(1));
  b.emplace_back(1);
  auto lambdas = geometry_detail::solve_full_column_rank(std::move(a), std::move(b));
  if (!lambdas) return std::nullopt;
  Barycentric out{*lambdas, true};
  for (const auto& l : out.lambdas) {
    if (l <= 0) out.strictly_interior = false;
  }
  return out;
}

inline Barycentric barycentric(const SimplexData& s, const IntPoint& q) {
  auto r = try_barycentric(s, q);
  if (!r) throw PreconditionError("point lies outside the affine hull of the simplex");
  return *r;
}

// All integer points of conv(ps) by bounding-box enumeration.
inline PointSet lattice_points_in_hull(const PointSet& ps, std::uint64_t budget = kDefaultLatticeBudget) {
  if (ps.size() == 0) throw PreconditionError("empty point set");
  IntPoint lo = ps.points[0];
  IntPoint hi = ps.points[0];
  for (const auto& p : ps.points) {
    for (int c = 0; c < ps.dim; ++c) {
      lo[c] = std::min(lo[c], p[c]);
      hi[c] = std::max(hi[c], p[c]);
    }
  }
  std::uint64_t box = 1;
  for (int c = 0; c < ps.dim; ++c) {
    box *= static_cast<std::uint64_t>(hi[c] - lo[c] + 1);
    if (box > budget) throw BudgetExceeded("lattice box has more than " + std::to_string(budget) + " points");
  }
  const bool simplex = geometry_detail::affinely_independent(ps.points);
  std::optional<SimplexData> sd;
  if (simplex) sd = make_simplex(ps);
  std::vector<IntPoint> inside;
  IntPoint cur = lo;
  for (;;) {
    bool member;
    if (sd) {
      auto bc = try_barycentric(*sd, cur);
      member = bc && std::all_of(bc->lambdas.begin(), bc->lambdas.end(), [](const Rational& l) { return l >= 0; });
    } else {
      member = geometry_detail::in_convex_hull(ps.points, cur);
    }
    if (member) inside.push_back(cur);
    int c = 0;
    while (c < ps.dim && cur[c] == hi[c]) {
      cur[c] = lo[c];
      ++c;
    }
    if (c == ps.dim) break;
    ++cur[c];
  }
  return PointSet(ps.dim, inside).sorted();
}

enum class MediationScan { Batch, Forward, Backward };

// Largest M with A ⊆ M ⊆ conv(A) ∩ Z^n such that every point of M \ A is the
// midpoint of two distinct even points of M.
inline PointSet maximal_mediated_set(const PointSet& a, MediationScan scan = MediationScan::Batch,
                                     std::uint64_t budget = kDefaultLatticeBudget) {
  if (a.size() == 0) throw PreconditionError("empty point set");
  for (const auto& v : hull_vertices(a).points) {
    if (!exponent_is_even(v)) throw PreconditionError("hull vertex with an odd coordinate");
  }
  const PointSet lattice = lattice_points_in_hull(a, budget);
  std::set<IntPoint> current(lattice.points.begin(), lattice.points.end());
  const std::set<IntPoint> fixed(a.points.begin(), a.points.end());

  auto mediated = [&](const IntPoint& p) {
    for (const auto& s : current) {
      if (!exponent_is_even(s)) continue;
      IntPoint t(p.size());
      for (std::size_t c = 0; c < p.size(); ++c) t[c] = 2 * p[c] - s[c];
      if (t != s && exponent_is_even(t) && current.count(t)) return true;
    }
    return false;
  };

  for (bool changed = true; changed;) {
    changed = false;
    std::vector<IntPoint> order(current.begin(), current.end());
    if (scan == MediationScan::Backward) std::reverse(order.begin(), order.end());
    std::vector<IntPoint> doomed;
    for (const auto& p : order) {
      if (fixed.count(p) || mediated(p)) continue;
      if (scan == MediationScan::Batch) {
        doomed.push_back(p);
      } else {
        current.erase(p);
      }
      changed = true;
    }
    for (const auto& p : doomed) current.erase(p);
  }
  return PointSet(a.dim, {current.begin(), current.end()}).sorted();
}

enum class SimplexClass { HSimplex, MSimplex, Neither };

inline std::string to_string(SimplexClass c) {
  switch (c) {
    case SimplexClass::HSimplex: return "H-simplex";
    case SimplexClass::MSimplex: return "M-simplex";
    case SimplexClass::Neither: return "neither";
  }
  return "unknown";
}

inline PointSet vertices_and_midpoints(const PointSet& v) {
  std::vector<IntPoint> pts = v.points;
  for (std::size_t i = 0; i < v.size(); ++i) {
    for (std::size_t j = i + 1; j < v.size(); ++j) {
      IntPoint m(static_cast<std::size_t>(v.dim));
      for (int c = 0; c < v.dim; ++c) m[c] = (v.points[i][c] + v.points[j][c]) / 2;
      pts.push_back(m);
    }
  }
  return PointSet(v.dim, pts);
}

inline SimplexClass classify_simplex(const PointSet& a, std::uint64_t budget = kDefaultLatticeBudget) {
  const PointSet v = hull_vertices(a);
  if (!is_simplex_with_even_vertices(v)) throw PreconditionError("hull is not a simplex with even vertices");
  const PointSet mms = maximal_mediated_set(v, MediationScan::Batch, budget);
  if (mms == lattice_points_in_hull(v, budget)) return SimplexClass::HSimplex;
  if (mms == vertices_and_midpoints(v)) return SimplexClass::MSimplex;
  return SimplexClass::Neither;
}

}  // namespace certlab
