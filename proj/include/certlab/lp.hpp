#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "certlab/error.hpp"
#include "certlab/rational.hpp"

namespace certlab {

enum class Relation { LessEqual, Equal, GreaterEqual };

struct LPRow {
  RationalVector a;
  Relation rel = Relation::LessEqual;
  Rational b;
};

// maximize objᵀx subject to the rows and per-variable bounds. Variables without
// bounds are free. A missing objective means a pure feasibility problem.
struct LPProblem {
  std::size_t num_vars = 0;
  std::optional<RationalVector> objective;
  std::vector<LPRow> rows;
  std::vector<std::optional<Rational>> lower;
  std::vector<std::optional<Rational>> upper;

  explicit LPProblem(std::size_t vars = 0) : num_vars(vars), lower(vars), upper(vars) {}

  void add_row(RationalVector a, Relation rel, Rational b) { rows.push_back({std::move(a), rel, std::move(b)}); }

  void set_nonnegative() {
    for (auto& l : lower) l = Rational(0);
  }

  void validate() const {
    if (lower.size() != num_vars || upper.size() != num_vars) throw DimensionMismatch("bound vectors");
    if (objective && objective->size() != num_vars) throw DimensionMismatch("objective length");
    for (const auto& r : rows) {
      if (r.a.size() != num_vars) throw DimensionMismatch("constraint row length");
    }
  }
};

enum class LPStatus { Optimal, Infeasible, Unbounded };

inline std::string to_string(LPStatus s) {
  switch (s) {
    case LPStatus::Optimal: return "optimal";
    case LPStatus::Infeasible: return "infeasible";
    case LPStatus::Unbounded: return "unbounded";
  }
  return "unknown";
}

// Dual convention: y_i >= 0 on inequality rows, free on equality rows. Row i
// enters the aggregated inequality with multiplier y_i·σ_i, σ_i = -1 for >= rows
// and +1 otherwise. For infeasible problems y is scaled so the contradiction
// margin equals 1.
struct LPOutcome {
  LPStatus status = LPStatus::Infeasible;
  RationalVector primal;  // optimal point, or a feasible point for unbounded problems
  RationalVector dual;    // optimality duals or Farkas multipliers
  RationalVector ray;     // improving direction when unbounded
  Rational objective_value;
};

namespace lp_detail {

inline int row_sign(Relation rel) { return rel == Relation::GreaterEqual ? -1 : 1; }

// Aggregated multipliers w_i = y_i·σ_i and reduced row r = Aᵀw.
inline RationalVector aggregate(const LPProblem& p, const RationalVector& y, RationalVector& w) {
  w.assign(p.rows.size(), Rational(0));
  RationalVector r(p.num_vars, Rational(0));
  for (std::size_t i = 0; i < p.rows.size(); ++i) {
    w[i] = y[i] * row_sign(p.rows[i].rel);
    if (w[i] == 0) continue;
    for (std::size_t j = 0; j < p.num_vars; ++j) {
      if (p.rows[i].a[j] != 0) r[j] += w[i] * p.rows[i].a[j];
    }
  }
  return r;
}

inline Rational dot(const RationalVector& a, const RationalVector& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] != 0 && b[i] != 0) s += a[i] * b[i];
  }
  return s;
}

inline bool duals_sign_ok(const LPProblem& p, const RationalVector& y) {
  if (y.size() != p.rows.size()) return false;
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (p.rows[i].rel != Relation::Equal && y[i] < 0) return false;
  }
  return true;
}

inline bool primal_feasible(const LPProblem& p, const RationalVector& x) {
  if (x.size() != p.num_vars) return false;
  for (std::size_t j = 0; j < p.num_vars; ++j) {
    if (p.lower[j] && x[j] < *p.lower[j]) return false;
    if (p.upper[j] && x[j] > *p.upper[j]) return false;
  }
  for (const auto& row : p.rows) {
    const Rational lhs = dot(row.a, x);
    switch (row.rel) {
      case Relation::LessEqual:
        if (lhs > row.b) return false;
        break;
      case Relation::GreaterEqual:
        if (lhs < row.b) return false;
        break;
      case Relation::Equal:
        if (lhs != row.b) return false;
        break;
    }
  }
  return true;
}

// Σ_{r_j>0} r_j·l_j + Σ_{r_j<0} r_j·u_j, or nullopt when a needed bound is absent.
inline std::optional<Rational> bound_term(const LPProblem& p, const RationalVector& r) {
  Rational s = 0;
  for (std::size_t j = 0; j < p.num_vars; ++j) {
    if (r[j] > 0) {
      if (!p.lower[j]) return std::nullopt;
      s += r[j] * *p.lower[j];
    } else if (r[j] < 0) {
      if (!p.upper[j]) return std::nullopt;
      s += r[j] * *p.upper[j];
    }
  }
  return s;
}

// Internal column kinds produced by the standard-form transform.
enum class ColumnKind { Shifted, Reflected, Positive, Negative, Slack, Artificial };

struct Column {
  ColumnKind kind;
  std::size_t var;  // original variable for structural columns
};

// ----------------------------------------------------------------------------
// Class: TableauSimplex
//
// Dense two-phase primal simplex over exact rationals with Bland's rule.
// One instance solves one problem.
// ----------------------------------------------------------------------------
class TableauSimplex {
 public:
  explicit TableauSimplex(const LPProblem& p) : p_(p) { p_.validate(); }

  LPOutcome run() {
    build();
    LPOutcome out;
    // Phase 1: maximize -Σ artificials.
    set_phase_costs(true);
    iterate(true);
    if (tab_[m_][rhs_col()] != 0) {
      // Phase-1 optimum below zero: extract Farkas multipliers.
      out.status = LPStatus::Infeasible;
      out.dual = normalized_farkas(extract_duals(true));
      return out;
    }
    drive_out_artificials();
    set_phase_costs(false);
    const std::optional<std::size_t> ray_col = iterate(false);
    out.primal = recover_primal();
    if (ray_col) {
      out.status = LPStatus::Unbounded;
      out.ray = recover_ray(*ray_col);
      return out;
    }
    out.status = LPStatus::Optimal;
    out.dual = extract_duals(false);
    out.objective_value = p_.objective ? dot(*p_.objective, out.primal) : Rational(0);
    return out;
  }

 private:
  std::size_t rhs_col() const { return cols_.size(); }

  void add_struct_row(std::vector<std::pair<std::size_t, Rational>> entries, Relation rel, Rational b) {
    pending_.push_back({std::move(entries), rel, std::move(b)});
  }

  void build() {
    const std::size_t nv = p_.num_vars;
    var_cols_.assign(nv, {});
    shift_.assign(nv, Rational(0));
    for (std::size_t j = 0; j < nv; ++j) {
      if (p_.lower[j]) {
        shift_[j] = *p_.lower[j];
        var_cols_[j].push_back(cols_.size());
        cols_.push_back({ColumnKind::Shifted, j});
      } else if (p_.upper[j]) {
        shift_[j] = *p_.upper[j];
        var_cols_[j].push_back(cols_.size());
        cols_.push_back({ColumnKind::Reflected, j});
      } else {
        var_cols_[j].push_back(cols_.size());
        cols_.push_back({ColumnKind::Positive, j});
        var_cols_[j].push_back(cols_.size());
        cols_.push_back({ColumnKind::Negative, j});
      }
    }
    // Original rows expressed in the internal variables.
    for (const auto& row : p_.rows) {
      std::vector<std::pair<std::size_t, Rational>> entries;
      Rational b = row.b;
      for (std::size_t j = 0; j < nv; ++j) {
        if (row.a[j] == 0) continue;
        b -= row.a[j] * shift_[j];
        for (std::size_t c : var_cols_[j]) entries.emplace_back(c, row.a[j] * column_scale(c));
      }
      add_struct_row(std::move(entries), row.rel, b);
    }
    num_orig_rows_ = pending_.size();
    // Upper bounds of doubly bounded variables become rows x' <= u - l.
    for (std::size_t j = 0; j < nv; ++j) {
      if (p_.lower[j] && p_.upper[j]) {
        add_struct_row({{var_cols_[j][0], Rational(1)}}, Relation::LessEqual, *p_.upper[j] - *p_.lower[j]);
      }
    }
    m_ = pending_.size();
    slack_col_.assign(m_, SIZE_MAX);
    for (std::size_t i = 0; i < m_; ++i) {
      if (pending_[i].rel != Relation::Equal) {
        slack_col_[i] = cols_.size();
        cols_.push_back({ColumnKind::Slack, i});
      }
    }
    art_col_.assign(m_, 0);
    for (std::size_t i = 0; i < m_; ++i) {
      art_col_[i] = cols_.size();
      cols_.push_back({ColumnKind::Artificial, i});
    }
    const std::size_t width = cols_.size() + 1;
    tab_.assign(m_ + 1, RationalVector(width, Rational(0)));
    row_flip_.assign(m_, 1);
    basis_.assign(m_, 0);
    for (std::size_t i = 0; i < m_; ++i) {
      auto& row = tab_[i];
      for (const auto& [c, v] : pending_[i].entries) row[c] += v;
      if (slack_col_[i] != SIZE_MAX) row[slack_col_[i]] = pending_[i].rel == Relation::LessEqual ? 1 : -1;
      row[rhs_col()] = pending_[i].b;
      if (row[rhs_col()] < 0) {
        row_flip_[i] = -1;
        for (auto& v : row) v = -v;
      }
      row[art_col_[i]] = 1;
      basis_[i] = art_col_[i];
    }
  }

  Rational column_scale(std::size_t c) const {
    switch (cols_[c].kind) {
      case ColumnKind::Reflected:
      case ColumnKind::Negative: return Rational(-1);
      default: return Rational(1);
    }
  }

  Rational cost(std::size_t c, bool phase1) const {
    const Column& col = cols_[c];
    if (phase1) return col.kind == ColumnKind::Artificial ? Rational(-1) : Rational(0);
    if (!p_.objective) return 0;
    switch (col.kind) {
      case ColumnKind::Shifted:
      case ColumnKind::Positive: return (*p_.objective)[col.var];
      case ColumnKind::Reflected:
      case ColumnKind::Negative: return -(*p_.objective)[col.var];
      default: return 0;
    }
  }

  // Objective row holds reduced costs z_j - c_j and the current objective value.
  void set_phase_costs(bool phase1) {
    auto& obj = tab_[m_];
    for (std::size_t c = 0; c <= cols_.size(); ++c) obj[c] = c < cols_.size() ? -cost(c, phase1) : Rational(0);
    for (std::size_t i = 0; i < m_; ++i) {
      const Rational cb = cost(basis_[i], phase1);
      if (cb == 0) continue;
      for (std::size_t c = 0; c <= cols_.size(); ++c) {
        if (tab_[i][c] != 0) obj[c] += cb * tab_[i][c];
      }
    }
  }

  void pivot(std::size_t r, std::size_t c) {
    const Rational pv = tab_[r][c];
    for (auto& v : tab_[r]) {
      if (v != 0) v /= pv;
    }
    const std::size_t width = tab_[r].size();
    for (std::size_t i = 0; i <= m_; ++i) {
      if (i == r || tab_[i][c] == 0) continue;
      const Rational f = tab_[i][c];
      for (std::size_t k = 0; k < width; ++k) {
        if (tab_[r][k] != 0) tab_[i][k] -= f * tab_[r][k];
      }
    }
    basis_[r] = c;
  }

  // Returns the entering column if the phase objective is unbounded.
  std::optional<std::size_t> iterate(bool phase1) {
    for (;;) {
      std::optional<std::size_t> enter;
      for (std::size_t c = 0; c < cols_.size(); ++c) {
        if (!phase1 && cols_[c].kind == ColumnKind::Artificial) continue;
        if (tab_[m_][c] < 0) {
          enter = c;
          break;
        }
      }
      if (!enter) return std::nullopt;
      std::optional<std::size_t> leave;
      Rational best;
      for (std::size_t i = 0; i < m_; ++i) {
        const Rational& a = tab_[i][*enter];
        if (a <= 0) continue;
        const Rational ratio = tab_[i][rhs_col()] / a;
        if (!leave || ratio < best || (ratio == best && basis_[i] < basis_[*leave])) {
          leave = i;
          best = ratio;
        }
      }
      if (!leave) return enter;
      pivot(*leave, *enter);
    }
  }

  void drive_out_artificials() {
    for (std::size_t i = 0; i < m_; ++i) {
      if (cols_[basis_[i]].kind != ColumnKind::Artificial) continue;
      for (std::size_t c = 0; c < cols_.size(); ++c) {
        if (cols_[c].kind != ColumnKind::Artificial && tab_[i][c] != 0) {
          pivot(i, c);
          break;
        }
      }
    }
  }

  RationalVector internal_values() const {
    RationalVector v(cols_.size(), Rational(0));
    for (std::size_t i = 0; i < m_; ++i) v[basis_[i]] = tab_[i][rhs_col()];
    return v;
  }

  RationalVector to_original(const RationalVector& internal, bool direction) const {
    RationalVector x(p_.num_vars, Rational(0));
    for (std::size_t j = 0; j < p_.num_vars; ++j) {
      for (std::size_t c : var_cols_[j]) x[j] += column_scale(c) * internal[c];
      if (!direction) x[j] += shift_[j];
    }
    return x;
  }

  RationalVector recover_primal() const { return to_original(internal_values(), false); }

  RationalVector recover_ray(std::size_t enter) const {
    RationalVector d(cols_.size(), Rational(0));
    d[enter] = 1;
    for (std::size_t i = 0; i < m_; ++i) d[basis_[i]] = -tab_[i][enter];
    return to_original(d, true);
  }

  // y_i for the original rows. Reduced cost of the artificial column of row i
  // is π_i - cost(artificial); undoing the row flip and the slack sign gives y.
  RationalVector extract_duals(bool phase1) const {
    RationalVector y(num_orig_rows_, Rational(0));
    for (std::size_t i = 0; i < num_orig_rows_; ++i) {
      Rational pi = tab_[m_][art_col_[i]] + cost(art_col_[i], phase1);
      Rational w = pi * row_flip_[i];
      y[i] = w * row_sign(pending_[i].rel);
    }
    return y;
  }

  RationalVector normalized_farkas(RationalVector y) const {
    RationalVector w;
    const RationalVector r = aggregate(p_, y, w);
    const auto bt = bound_term(p_, r);
    if (!bt) throw InternalError("Farkas multipliers need a missing bound");
    Rational rhs = 0;
    for (std::size_t i = 0; i < p_.rows.size(); ++i) rhs += w[i] * p_.rows[i].b;
    const Rational margin = *bt - rhs;
    if (margin <= 0) throw InternalError("Farkas multipliers do not certify infeasibility");
    for (auto& v : y) v /= margin;
    return y;
  }

  struct PendingRow {
    std::vector<std::pair<std::size_t, Rational>> entries;
    Relation rel;
    Rational b;
  };

  LPProblem p_;
  std::vector<Column> cols_;
  std::vector<std::vector<std::size_t>> var_cols_;
  RationalVector shift_;
  std::vector<PendingRow> pending_;
  std::size_t num_orig_rows_ = 0;
  std::size_t m_ = 0;
  std::vector<std::size_t> slack_col_;
  std::vector<std::size_t> art_col_;
  std::vector<int> row_flip_;
  std::vector<std::size_t> basis_;
  std::vector<RationalVector> tab_;
};

}  // namespace lp_detail

inline LPOutcome solve(const LPProblem& p) { return lp_detail::TableauSimplex(p).run(); }

// Re-verifies an outcome against the problem from scratch.
inline bool check_certificate(const LPProblem& p, const LPOutcome& o) {
  using namespace lp_detail;
  try {
    p.validate();
  } catch (const Error&) {
    return false;
  }
  const RationalVector zero(p.num_vars, Rational(0));
  const RationalVector& c = p.objective ? *p.objective : zero;
  switch (o.status) {
    case LPStatus::Optimal: {
      if (!primal_feasible(p, o.primal) || !duals_sign_ok(p, o.dual)) return false;
      RationalVector w;
      RationalVector r = aggregate(p, o.dual, w);
      for (std::size_t j = 0; j < p.num_vars; ++j) r[j] -= c[j];
      const auto bt = bound_term(p, r);
      if (!bt) return false;
      Rational dual_value = -*bt;
      for (std::size_t i = 0; i < p.rows.size(); ++i) dual_value += w[i] * p.rows[i].b;
      const Rational primal_value = dot(c, o.primal);
      return dual_value == primal_value && o.objective_value == primal_value;
    }
    case LPStatus::Infeasible: {
      if (!duals_sign_ok(p, o.dual)) return false;
      RationalVector w;
      const RationalVector r = aggregate(p, o.dual, w);
      const auto bt = bound_term(p, r);
      if (!bt) return false;
      Rational rhs = 0;
      for (std::size_t i = 0; i < p.rows.size(); ++i) rhs += w[i] * p.rows[i].b;
      return *bt > rhs;
    }
    case LPStatus::Unbounded: {
      if (!primal_feasible(p, o.primal) || o.ray.size() != p.num_vars) return false;
      for (std::size_t j = 0; j < p.num_vars; ++j) {
        if (p.lower[j] && o.ray[j] < 0) return false;
        if (p.upper[j] && o.ray[j] > 0) return false;
      }
      for (const auto& row : p.rows) {
        const Rational ad = dot(row.a, o.ray);
        if (row.rel == Relation::LessEqual && ad > 0) return false;
        if (row.rel == Relation::GreaterEqual && ad < 0) return false;
        if (row.rel == Relation::Equal && ad != 0) return false;
      }
      return dot(c, o.ray) > 0;
    }
  }
  return false;
}

}  // namespace certlab
