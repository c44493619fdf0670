#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "certlab/error.hpp"
#include "certlab/polynomial.hpp"

namespace certlab {

struct Constraint {
  std::string name;
  Polynomial g;
};

// Inequalities g_k >= 0; the unit g_0 = 1 is implicit. Equalities are encoded as
// the pair ±g.
struct ConstraintSystem {
  int n = 0;
  std::vector<Constraint> constraints;

  ConstraintSystem() = default;
  explicit ConstraintSystem(int vars) : n(vars) {}

  std::size_t size() const { return constraints.size(); }

  void add(std::string name, Polynomial g) {
    if (g.n() != n) throw DimensionMismatch("constraint " + name);
    constraints.push_back({std::move(name), std::move(g)});
  }

  std::optional<std::size_t> find(const Polynomial& g) const {
    for (std::size_t k = 0; k < constraints.size(); ++k) {
      if (constraints[k].g == g) return k;
    }
    return std::nullopt;
  }

  void add_hypercube() {
    for (int i = 0; i < n; ++i) {
      const Polynomial h = hypercube_generator(n, i);
      const std::string v = "x" + std::to_string(i + 1);
      if (!find(h)) add("cube+" + v, h);
      if (!find(-h)) add("cube-" + v, -h);
    }
  }

  // N + x_i >= 0 and N - x_i >= 0 for every i.
  void add_box(const Rational& bound) {
    for (int i = 0; i < n; ++i) {
      const Polynomial x = Polynomial::variable(n, i);
      const std::string v = "x" + std::to_string(i + 1);
      add("box+" + v, Polynomial::constant(n, bound) + x);
      add("box-" + v, Polynomial::constant(n, bound) - x);
    }
  }

  static ConstraintSystem hypercube(int vars) {
    ConstraintSystem s(vars);
    s.add_hypercube();
    return s;
  }

  // Index of x_i² − x_i (sign = +1) or of its negation (sign = −1).
  std::optional<std::size_t> hypercube_index(int i, int sign) const {
    const Polynomial h = hypercube_generator(n, i);
    return find(sign > 0 ? h : -h);
  }

  bool is_hypercube_constraint(std::size_t k) const {
    for (int i = 0; i < n; ++i) {
      const Polynomial h = hypercube_generator(n, i);
      if (constraints[k].g == h || constraints[k].g == -h) return true;
    }
    return false;
  }

  bool has_hypercube() const {
    for (int i = 0; i < n; ++i) {
      if (!hypercube_index(i, 1) || !hypercube_index(i, -1)) return false;
    }
    return n > 0;
  }

  // Largest N such that both box constraints with bound N are present for all i.
  std::optional<Rational> box_bound() const {
    if (n == 0) return std::nullopt;
    std::optional<Rational> best;
    for (const auto& c : constraints) {
      if (c.g.total_degree() != 1) continue;
      const Rational cst = c.g.coefficient(Exponent(static_cast<std::size_t>(n), 0));
      if (cst <= 0) continue;
      bool all = true;
      for (int i = 0; i < n && all; ++i) {
        const Polynomial x = Polynomial::variable(n, i);
        all = find(Polynomial::constant(n, cst) + x) && find(Polynomial::constant(n, cst) - x);
      }
      if (all && (!best || cst > *best)) best = cst;
    }
    return best;
  }

  bool has_box() const { return box_bound().has_value(); }
};

struct PreprimeProduct {
  std::vector<std::size_t> factors;  // sorted constraint indices with repetition; empty for g_0 = 1
  Polynomial product;
  int degree = 0;
};

// All products of constraints with total degree <= cap, enumerated as multisets
// in nondecreasing index order. Constant constraints appear at most once in a
// product. Zero constraints are skipped.
inline std::vector<PreprimeProduct> preprime_products(const ConstraintSystem& sys, int cap,
                                                      std::size_t budget = 100000) {
  std::vector<PreprimeProduct> out;
  out.push_back({{}, Polynomial::constant(sys.n, 1), 0});
  if (cap < 0) return out;
  std::vector<int> deg(sys.size());
  for (std::size_t k = 0; k < sys.size(); ++k) deg[k] = sys.constraints[k].g.total_degree();

  PreprimeProduct cur{{}, Polynomial::constant(sys.n, 1), 0};
  auto extend = [&](auto&& self, std::size_t from) -> void {
    for (std::size_t k = from; k < sys.size(); ++k) {
      if (deg[k] < 0 || cur.degree + deg[k] > cap) continue;
      PreprimeProduct next{cur.factors, cur.product * sys.constraints[k].g, cur.degree + deg[k]};
      next.factors.push_back(k);
      if (out.size() >= budget) throw BudgetExceeded("preprime products exceed " + std::to_string(budget));
      out.push_back(next);
      const PreprimeProduct saved = cur;
      cur = std::move(next);
      self(self, deg[k] == 0 ? k + 1 : k);
      cur = saved;
    }
  };
  extend(extend, 0);
  return out;
}

}  // namespace certlab
