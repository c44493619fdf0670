#include <gtest/gtest.h>

#include <cmath>
#include <functional>

#include "certlab/circuit.hpp"
#include "generators.hpp"

using namespace certlab;
using certlab::testkit::poly;

namespace {

CircuitPolynomial detect(const Polynomial& p) {
  auto d = detect_circuit(p);
  if (!d) throw std::runtime_error("expected a circuit");
  return *d.circuit;
}

Polynomial motzkin_with_inner(const Rational& inner) {
  return poly(2, {{1, {0, 0}}, {1, {2, 4}}, {1, {4, 2}}, {inner, {2, 2}}});
}

// Θ in long double, for a sanity cross-check only.
long double theta_float(const CircuitPolynomial& c) {
  long double log_theta = 0;
  for (std::size_t j = 0; j < c.lambdas.size(); ++j) {
    const long double l = c.lambdas[j].get_d();
    log_theta += l * std::log(c.vertex_coeffs[j].get_d() / l);
  }
  return std::exp(log_theta);
}

// Independent degree-2 SONC oracle: every nonnegative degree-2 circuit is a
// monomial square or a one-dimensional circuit t_ij·z_i² + 2Q_ij·z_i·z_j + t_ji·z_j²
// with t_ij·t_ji >= Q_ij². Tight splits t_ij = |Q_ij|·s, t_ji = |Q_ij|/s are
// searched over a fixed grid of ratios s.
bool quadratic_sonc_oracle(const SymMatrix& q) {
  static const std::vector<Rational> grid{Rational(1, 4), Rational(1, 3), Rational(1, 2), Rational(2, 3), Rational(1),
                                          Rational(3, 2), Rational(2),    Rational(3),    Rational(4)};
  const std::size_t k = q.size();
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = i + 1; j < k; ++j) {
      if (q(i, j) != 0) pairs.emplace_back(i, j);
    }
  }
  RationalVector budget(k);
  for (std::size_t i = 0; i < k; ++i) budget[i] = q(i, i);
  std::function<bool(std::size_t)> rec = [&](std::size_t idx) {
    for (const auto& b : budget) {
      if (b < 0) return false;
    }
    if (idx == pairs.size()) return true;
    const auto [i, j] = pairs[idx];
    const Rational a = abs(q(i, j));
    for (const auto& s : grid) {
      budget[i] -= a * s;
      budget[j] -= a / s;
      const bool ok = rec(idx + 1);
      budget[i] += a * s;
      budget[j] += a / s;
      if (ok) return true;
    }
    return false;
  };
  return rec(0);
}

}  // namespace

TEST(CircuitDetection, Motzkin) {
  const CircuitPolynomial c = detect(testkit::motzkin2());
  EXPECT_EQ(c.simplex.vertices, (std::vector<IntPoint>{{0, 0}, {4, 2}, {2, 4}}));
  EXPECT_EQ(*c.inner_exp, (Exponent{2, 2}));
  EXPECT_EQ(c.inner_coeff, -3);
  EXPECT_EQ(c.lambdas, (RationalVector{Rational(1, 3), Rational(1, 3), Rational(1, 3)}));
  EXPECT_EQ(c.to_polynomial(), testkit::motzkin2());
}

TEST(CircuitDetection, Rejections) {
  const auto n2 = detect_circuit(testkit::n2_expanded());
  EXPECT_FALSE(n2);
  EXPECT_EQ(*n2.rejection, CircuitRejection::TooManyInteriorPoints);
  EXPECT_EQ(*detect_circuit(poly(1, {{-1, {0}}, {1, {2}}})).rejection, CircuitRejection::NegativeVertexCoefficient);
  EXPECT_EQ(*detect_circuit(poly(1, {{1, {0}}, {1, {3}}})).rejection, CircuitRejection::OddVertex);
  EXPECT_EQ(*detect_circuit(poly(2, {{1, {0, 0}}, {1, {2, 0}}, {1, {0, 2}}, {1, {2, 2}}})).rejection,
            CircuitRejection::NotSimplex);
  EXPECT_EQ(*detect_circuit(poly(2, {{1, {0, 0}}, {1, {2, 0}}, {1, {0, 2}}, {-1, {1, 1}}})).rejection,
            CircuitRejection::NotStrictlyInterior);
}

TEST(CircuitDetection, DegenerateMonomialSquare) {
  const CircuitPolynomial c = detect(poly(1, {{1, {2}}}));
  EXPECT_TRUE(c.degenerate());
  EXPECT_EQ(c.simplex.vertices.size(), 1u);
  EXPECT_TRUE(is_nonnegative_circuit(c));
  EXPECT_TRUE(circuit_is_sos(c));
  EXPECT_THROW(circuit_number_compare(c), PreconditionError);
}

TEST(CircuitNumber, Compare) {
  const CircuitPolynomial m2 = detect(testkit::motzkin2());
  EXPECT_EQ(circuit_number_compare(m2), std::strong_ordering::equal);
  EXPECT_EQ(*circuit_number_power(m2).exact_theta(), 3);
  EXPECT_EQ(circuit_number_compare(detect(motzkin_with_inner(-4))), std::strong_ordering::greater);
  CircuitPolynomial zero = m2;
  zero.inner_coeff = 0;
  EXPECT_EQ(circuit_number_compare(zero), std::strong_ordering::less);
}

TEST(CircuitNonnegativity, Examples) {
  EXPECT_TRUE(is_nonnegative_circuit(detect(testkit::motzkin2())));
  EXPECT_FALSE(is_nonnegative_circuit(detect(motzkin_with_inner(-4))));
  const CircuitPolynomial bin = detect(poly(2, {{1, {2, 0}}, {-2, {1, 1}}, {1, {0, 2}}}));
  EXPECT_EQ(*circuit_number_power(bin).exact_theta(), 2);
  EXPECT_TRUE(is_nonnegative_circuit(bin));
  // Even inner exponent with a large positive coefficient stays nonnegative.
  EXPECT_TRUE(is_nonnegative_circuit(detect(motzkin_with_inner(100))));
  // Odd inner exponent: the sign does not matter.
  EXPECT_FALSE(is_nonnegative_circuit(detect(poly(2, {{1, {2, 0}}, {3, {1, 1}}, {1, {0, 2}}}))));
}

TEST(CircuitSos, Examples) {
  EXPECT_FALSE(circuit_is_sos(detect(testkit::motzkin2())));
  EXPECT_TRUE(circuit_is_sos(detect(poly(2, {{1, {2, 0}}, {-2, {1, 1}}, {1, {0, 2}}}))));
  EXPECT_TRUE(circuit_is_sos(detect(poly(1, {{1, {0}}, {1, {4}}, {-1, {2}}}))));
  EXPECT_THROW(circuit_is_sos(detect(motzkin_with_inner(-4))), PreconditionError);
}

TEST(CircuitSos, GramCertificatesForSosCircuits) {
  // (x1 − x2)²
  EXPECT_TRUE(gram_verify(poly(2, {{1, {2, 0}}, {-2, {1, 1}}, {1, {0, 2}}}), {{1, 0}, {0, 1}},
                          SymMatrix({{1, -1}, {-1, 1}}))
                  .accepted);
  // 1 + x1⁴ − x1² over (1, x1, x1²)
  EXPECT_TRUE(gram_verify(poly(1, {{1, {0}}, {1, {4}}, {-1, {2}}}), {{0}, {1}, {2}},
                          SymMatrix({{1, 0, Rational(-1, 2)}, {0, 0, 0}, {Rational(-1, 2), 0, 1}}))
                  .accepted);
  // 1 + x1⁴ + x2⁴ − 2x1x2 = (1 − x1x2)² + (x1x2)² + (x1² − x2²)²
  const Polynomial f = poly(2, {{1, {0, 0}}, {1, {4, 0}}, {1, {0, 4}}, {-2, {1, 1}}});
  const CircuitPolynomial c = detect(f);
  ASSERT_TRUE(is_nonnegative_circuit(c));
  EXPECT_TRUE(circuit_is_sos(c));
  EXPECT_TRUE(gram_verify(f, {{0, 0}, {1, 1}, {2, 0}, {0, 2}},
                          SymMatrix({{1, -1, 0, 0}, {-1, 2, 0, 0}, {0, 0, 1, -1}, {0, 0, -1, 1}}))
                  .accepted);
}

TEST(SoncDecompositionCheck, Examples) {
  const CircuitPolynomial m2 = detect(testkit::motzkin2());
  EXPECT_TRUE(verify_sonc_decomposition(testkit::motzkin2(), {{{1, m2}}}).accepted);
  const CircuitPolynomial sq = detect(poly(2, {{1, {2, 0}}}));
  EXPECT_TRUE(verify_sonc_decomposition(testkit::motzkin2() + poly(2, {{1, {2, 0}}}), {{{1, m2}, {1, sq}}}).accepted);
  const auto wrong = verify_sonc_decomposition(testkit::motzkin2(), {{{1, sq}}});
  EXPECT_FALSE(wrong.accepted);
  EXPECT_EQ(wrong.residual, testkit::motzkin2() - poly(2, {{1, {2, 0}}}));
  const CircuitPolynomial bad = detect(motzkin_with_inner(-4));
  const auto neg = verify_sonc_decomposition(motzkin_with_inner(-4), {{{1, bad}}});
  EXPECT_FALSE(neg.accepted);
  EXPECT_TRUE(neg.residual.is_zero());
  ASSERT_TRUE(neg.entry_failures[0]);
  CircuitPolynomial tampered = m2;
  tampered.lambdas[0] = Rational(1, 2);
  EXPECT_FALSE(verify_sonc_decomposition(testkit::motzkin2(), {{{1, tampered}}}).accepted);
  EXPECT_FALSE(verify_sonc_decomposition(testkit::motzkin2(), {{{-1, m2}}}).accepted);
}

TEST(QuadraticSonc, Examples) {
  const auto n2 = quadratic_sonc_membership(testkit::n2_expanded());
  EXPECT_FALSE(n2.member);
  EXPECT_EQ(n2.gram, SymMatrix({{1, -1, -1}, {-1, 1, 1}, {-1, 1, 1}}));
  EXPECT_EQ(n2.sdd.outcome.status, LPStatus::Infeasible);
  EXPECT_TRUE(check_certificate(n2.sdd.problem, n2.sdd.outcome));

  const Polynomial b = poly(2, {{1, {2, 0}}, {-2, {1, 1}}, {1, {0, 2}}});
  const auto rb = quadratic_sonc_membership(b);
  ASSERT_TRUE(rb.member);
  EXPECT_TRUE(verify_sonc_decomposition(b, *rb.witness).accepted);

  const Polynomial c = poly(1, {{1, {0}}, {-2, {1}}, {1, {2}}});
  const auto rc = quadratic_sonc_membership(c);
  ASSERT_TRUE(rc.member);
  EXPECT_TRUE(verify_sonc_decomposition(c, *rc.witness).accepted);
  ASSERT_EQ(rc.witness->entries.size(), 1u);
  EXPECT_EQ(*circuit_number_power(rc.witness->entries[0].circuit).exact_theta(), 2);

  EXPECT_THROW(quadratic_sonc_membership(testkit::motzkin2()), PreconditionError);
}

TEST(QuadraticSonc, DegreeTwoCircuitsAreOneDimensional) {
  // Every even simplex with vertices of degree <= 2 is spanned by a subset of
  // {0, 2e_1, ..., 2e_n}; any strictly interior lattice point of such a simplex
  // must be an edge midpoint, so it lies on a one-dimensional face.
  for (int n = 1; n <= 3; ++n) {
    std::vector<IntPoint> even;
    even.emplace_back(static_cast<std::size_t>(n), 0);
    for (int i = 0; i < n; ++i) even.push_back(unit_exponent(n, i, 2));
    for (unsigned mask = 1; mask < (1u << even.size()); ++mask) {
      std::vector<IntPoint> verts;
      for (std::size_t k = 0; k < even.size(); ++k) {
        if ((mask >> k) & 1u) verts.push_back(even[k]);
      }
      const PointSet ps(n, verts);
      const SimplexData s = make_simplex(ps);
      for (const auto& q : lattice_points_in_hull(ps).points) {
        if (barycentric(s, q).strictly_interior && verts.size() > 1) {
          EXPECT_EQ(verts.size(), 2u) << "interior point of a simplex with more than two vertices";
        }
      }
    }
  }
}

TEST(QuadraticSonc, AgreesWithBruteForceOracle) {
  testkit::Rng rng(61);
  int members = 0;
  int non_members = 0;
  for (int trial = 0; trial < 150; ++trial) {
    const int n = trial < 120 ? rng.uniform_int(1, 2) : 3;
    Polynomial f(n);
    f.add_term(Exponent(static_cast<std::size_t>(n), 0), rng.uniform_int(0, 6));
    for (int i = 0; i < n; ++i) {
      f.add_term(unit_exponent(n, i, 2), rng.uniform_int(0, 6));
      if (rng.uniform_int(0, 2) != 0) f.add_term(unit_exponent(n, i), 2 * rng.uniform_int(-2, 2));
      for (int j = i + 1; j < n; ++j) {
        if (rng.uniform_int(0, 2) == 0) continue;
        f.add_term(exponent_add(unit_exponent(n, i), unit_exponent(n, j)), 2 * rng.uniform_int(-2, 2));
      }
    }
    const auto r = quadratic_sonc_membership(f);
    const bool oracle = quadratic_sonc_oracle(r.gram);
    EXPECT_EQ(r.member, oracle) << f.to_string();
    if (r.member) {
      ++members;
      EXPECT_TRUE(verify_sonc_decomposition(f, *r.witness).accepted) << f.to_string();
    } else {
      ++non_members;
      EXPECT_TRUE(check_certificate(r.sdd.problem, r.sdd.outcome));
    }
  }
  EXPECT_GT(members, 20);
  EXPECT_GT(non_members, 20);
}

TEST(CircuitProperty, NonnegativeCircuitsEvaluateNonnegative) {
  testkit::Rng rng(62);
  for (int trial = 0; trial < 60; ++trial) {
    const CircuitPolynomial c = testkit::random_nonnegative_circuit(rng, 3, 6);
    ASSERT_TRUE(is_nonnegative_circuit(c)) << c.to_polynomial().to_string();
    const Polynomial p = c.to_polynomial();
    for (int s = 0; s < 200; ++s) EXPECT_GE(p.eval(rng.random_point(c.n)), 0);
  }
}

TEST(CircuitProperty, OverThresholdOddCircuitsGoNegative) {
  // Search: magnitudes from a small grid, signs chosen to make the inner term negative.
  testkit::Rng rng(63);
  const std::vector<Rational> mags{Rational(1, 2), Rational(1), Rational(2)};
  for (int trial = 0; trial < 40; ++trial) {
    const CircuitPolynomial c = testkit::random_negative_odd_circuit(rng, 3, 6);
    EXPECT_FALSE(is_nonnegative_circuit(c));
    const Polynomial p = c.to_polynomial();
    bool found = false;
    std::vector<Rational> x(static_cast<std::size_t>(c.n));
    std::function<void(int)> rec = [&](int i) {
      if (found) return;
      if (i == c.n) {
        std::vector<Rational> y = x;
        Rational sign = c.inner_coeff;
        for (int k = 0; k < c.n; ++k) {
          if ((*c.inner_exp)[k] % 2 != 0) {
            // Flip one odd coordinate if needed so that f_β·x^β < 0.
            Rational mono = 1;
            for (int m = 0; m < c.n; ++m) mono *= pow_rational(y[m], static_cast<unsigned long>((*c.inner_exp)[m]));
            if (sign * mono > 0) y[k] = -y[k];
            break;
          }
        }
        if (p.eval(y) < 0) found = true;
        return;
      }
      for (const auto& m : mags) {
        x[i] = m;
        rec(i + 1);
      }
    };
    rec(0);
    EXPECT_TRUE(found) << p.to_string();
  }
}

TEST(CircuitProperty, ExactComparisonMatchesFloatingPoint) {
  testkit::Rng rng(64);
  int compared = 0;
  for (int trial = 0; trial < 100; ++trial) {
    CircuitPolynomial c = testkit::random_nonnegative_circuit(rng, 3, 6);
    c.inner_coeff = rng.small_rational(12, 3);
    const long double theta = theta_float(c);
    const long double f = std::fabs(c.inner_coeff.get_d());
    if (std::fabs(theta - f) < 1e-9L * theta) continue;
    const auto cmp = circuit_number_compare(c);
    EXPECT_EQ(cmp == std::strong_ordering::less, f < theta);
    EXPECT_EQ(cmp == std::strong_ordering::greater, f > theta);
    ++compared;
  }
  EXPECT_GT(compared, 80);
}

TEST(CircuitProperty, SosCircuitsOnHSimplicesAndMSimplices) {
  testkit::Rng rng(65);
  for (int trial = 0; trial < 40; ++trial) {
    const CircuitPolynomial c = testkit::random_nonnegative_circuit(rng, 2, 6);
    const bool sos = circuit_is_sos(c);
    if (c.degenerate() || c.inner_coeff == 0) {
      EXPECT_TRUE(sos);
      continue;
    }
    const PointSet verts(c.n, c.simplex.vertices);
    const auto cls = classify_simplex(verts);
    if (cls == SimplexClass::HSimplex) {
      EXPECT_TRUE(sos);
    }
    const bool in_mms = maximal_mediated_set(verts).contains(*c.inner_exp);
    if (c.inner_coeff < 0 || !exponent_is_even(*c.inner_exp)) {
      EXPECT_EQ(sos, in_mms);
    }
  }
}
