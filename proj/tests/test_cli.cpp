#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "certlab/cli.hpp"
#include "generators.hpp"
#include "support.hpp"

using namespace certlab;
using cli::CommandResult;
using json_io::Json;

namespace {

const std::string kData = CERTLAB_DATA_DIR;
const std::string kGolden = CERTLAB_GOLDEN_DIR;

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream s;
  s << f.rdbuf();
  return s.str();
}

CommandResult run(std::vector<std::string> args, const std::string& stdin_text = "") {
  std::istringstream in(stdin_text);
  return cli::run(args, in);
}

std::string write_temp(const std::string& name, const Json& j) {
  const auto path = std::filesystem::temp_directory_path() / ("certlab_test_" + name + ".json");
  std::ofstream(path) << json_io::dump(j);
  return path.string();
}

}  // namespace

TEST(JsonIo, RationalForms) {
  EXPECT_EQ(json_io::rational_from_json(Json("-3/6")), Rational(-1, 2));
  EXPECT_EQ(json_io::rational_from_json(Json(7)), 7);
  EXPECT_EQ(json_io::to_json(testkit::frac(4, -6)), Json("-2/3"));
  EXPECT_THROW(json_io::rational_from_json(Json(0.5)), ParseError);
  EXPECT_THROW(json_io::rational_from_json(Json("1/0")), ParseError);
}

TEST(JsonIo, PolynomialRejectsMalformed) {
  EXPECT_THROW(json_io::polynomial_from_json(json_io::parse(R"({"n": 2, "terms": [{"coef": "1", "exp": [1]}]})")),
               ParseError);
  EXPECT_THROW(json_io::polynomial_from_json(json_io::parse(R"({"terms": []})")), ParseError);
  EXPECT_THROW(json_io::polynomial_from_json(json_io::parse(R"({"n": 1, "terms": [{"coef": "x", "exp": [1]}]})")),
               ParseError);
  EXPECT_THROW(json_io::parse("{"), ParseError);
  // Repeated exponents are summed.
  const Polynomial p = json_io::polynomial_from_json(
      json_io::parse(R"({"n": 1, "terms": [{"coef": "1", "exp": [1]}, {"coef": "1/2", "exp": [1]}]})"));
  EXPECT_EQ(p, Polynomial::monomial({1}, Rational(3, 2)));
}

TEST(JsonIoProperty, PolynomialRoundTrip) {
  testkit::Rng rng(81);
  for (int it = 0; it < 100; ++it) {
    const Polynomial p = rng.random_poly(rng.uniform_int(0, 4), 4, 6);
    const Json j = json_io::to_json(p);
    EXPECT_EQ(json_io::polynomial_from_json(j), p);
    EXPECT_EQ(json_io::polynomial_from_json(json_io::parse(j.dump())), p);
  }
}

TEST(JsonIoProperty, CertificateRoundTrip) {
  testkit::Rng rng(82);
  for (int it = 0; it < 40; ++it) {
    const int n = rng.uniform_int(1, 3);
    const ConstraintSystem sys = testkit::random_cube_system(rng, n);
    const Certificate sd = testkit::random_sdsos_certificate(rng, sys, 4, CertificateShape::Schmuedgen);
    const Certificate sonc = convert_sdsos_to_sonc(sd);
    const Certificate sa = convert_sonc_to_sa(sonc, sys);
    for (const Certificate& c : {sd, sonc, sa}) {
      const Json j = json_io::to_json(c);
      const Certificate back = json_io::certificate_from_json(json_io::parse(j.dump()), n);
      EXPECT_EQ(json_io::to_json(back), j);
    }
    const ConstraintSystem sys_back = json_io::constraint_system_from_json(json_io::to_json(sys));
    EXPECT_EQ(json_io::to_json(sys_back), json_io::to_json(sys));
  }
}

TEST(JsonIoProperty, PseudoExpectationRoundTrip) {
  testkit::Rng rng(83);
  for (int it = 0; it < 40; ++it) {
    const int n = rng.uniform_int(1, 4);
    std::vector<std::vector<bool>> pts;
    RationalVector w;
    for (int k = 0; k < 3; ++k) {
      std::vector<bool> v;
      for (int i = 0; i < n; ++i) v.push_back(rng.coin());
      pts.push_back(v);
      w.push_back(testkit::frac(1, 3));
    }
    const PseudoExpectation pe = pe_from_distribution(n, pts, w, rng.uniform_int(0, n));
    const PseudoExpectation back = json_io::pseudoexpectation_from_json(json_io::to_json(pe));
    EXPECT_EQ(back.table, pe.table);
    EXPECT_EQ(back.level, pe.level);
  }
  EXPECT_THROW(json_io::pseudoexpectation_from_json(json_io::parse(R"({"n": 1, "level": 1, "moments": [
      {"set": [], "value": "1"}]})")),
               ParseError);
}

TEST(JsonIo, SeparationReportRoundTrip) {
  const SeparationReport r = separation_report(2, 1);
  EXPECT_EQ(json_io::separation_report_from_json(json_io::to_json(r)), r);
}

TEST(Cli, ClassifyMotzkin) {
  const auto r = run({"classify", "--poly", kData + "/motzkin2.json"});
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.payload, (Json{{"circuit", true}, {"nonnegative", true}, {"sos", false}}));
}

TEST(Cli, ClassifyFromStdin) {
  const auto r = run({"classify"}, json_io::dump(json_io::to_json(testkit::n2_expanded())));
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.payload["circuit"], false);
  EXPECT_EQ(r.payload["nonnegative"], true);
  EXPECT_EQ(r.payload["sos"], true);
  EXPECT_EQ(r.payload["sonc"], false);
}

TEST(Cli, SaSolveHalfplane) {
  const auto r = run({"sa-solve", "--system", kData + "/cube2_halfplane.json", "--degree", "2"});
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.payload["bound"], "-3/2");
  EXPECT_EQ(cli::render(r), slurp(kGolden + "/sa_halfplane_degree2.json"));
  const auto r4 = run({"sa-solve", "--system", kData + "/cube2_halfplane.json", "--degree", "4"});
  EXPECT_EQ(r4.payload["bound"], "-4/3");
  const auto r6 = run({"sa-solve", "--system", kData + "/cube2_halfplane.json", "--degree", "6", "--shape", "schmuedgen"});
  EXPECT_EQ(r6.payload["bound"], "-1");
}

TEST(Cli, WitnessMotzkin) {
  const auto r = run({"witness", "--kind", "motzkin", "--n", "2"});
  EXPECT_EQ(r.exit_code, 0);
  EXPECT_EQ(json_io::polynomial_from_json(r.payload), testkit::motzkin2());
  EXPECT_EQ(cli::render(r), slurp(kGolden + "/witness_motzkin2.json"));
}

TEST(Cli, WitnessCpopIsASolvableSystem) {
  const auto r = run({"witness", "--kind", "cpop_sonc", "--n", "2", "--t", "1"});
  ASSERT_EQ(r.exit_code, 0);
  const json_io::Problem p = json_io::problem_from_json(r.payload);
  EXPECT_EQ(*p.objective, witness_generalized_motzkin(2));
  EXPECT_EQ(p.system.size(), 1u);
}

TEST(Cli, SeparationGolden) {
  for (int n : {2, 3}) {
    const auto a = run({"separation", "--n", std::to_string(n)});
    const auto b = run({"separation", "--n", std::to_string(n)});
    EXPECT_EQ(a.exit_code, 0);
    EXPECT_EQ(cli::render(a), cli::render(b));
    EXPECT_EQ(cli::render(a), slurp(kGolden + "/separation_n" + std::to_string(n) + ".json"));
  }
}

TEST(Cli, ConvertChainVerifies) {
  const std::string poly = kData + "/binomial_square_poly.json";
  const auto sonc = run({"convert", "--cert", kData + "/binomial_square.json", "--kind", "sonc"});
  ASSERT_EQ(sonc.exit_code, 0);
  const std::string sonc_path = write_temp("sonc", sonc.payload);
  EXPECT_EQ(run({"verify", "--poly", poly, "--cert", sonc_path}).exit_code, 0);
  const auto sa = run({"convert", "--cert", sonc_path, "--kind", "sa", "--system", kData + "/cube2.json"});
  ASSERT_EQ(sa.exit_code, 0);
  EXPECT_EQ(sa.payload["degree"], 4);
  const std::string sa_path = write_temp("sa", sa.payload);
  EXPECT_EQ(run({"verify", "--poly", poly, "--cert", sa_path, "--system", kData + "/cube2.json"}).exit_code, 0);
  // Wrong λ is rejected with exit 1 and a constant residual.
  const auto off = run({"verify", "--poly", poly, "--cert", sonc_path, "--lambda", "1/3"});
  EXPECT_EQ(off.exit_code, 1);
  EXPECT_EQ(off.payload["accepted"], false);
  EXPECT_EQ(json_io::polynomial_from_json(off.payload["residual"]), Polynomial::constant(2, Rational(-1, 3)));
}

// Acceptance through the CLI matches the library on random certificates.
TEST(CliProperty, VerifyMatchesLibrary) {
  testkit::Rng rng(84);
  for (int it = 0; it < 25; ++it) {
    const int n = rng.uniform_int(1, 3);
    const ConstraintSystem sys = testkit::random_cube_system(rng, n);
    Certificate cert = testkit::random_sdsos_certificate(rng, sys, 4, CertificateShape::Putinar);
    if (rng.coin()) cert = convert_sdsos_to_sonc(cert);
    Polynomial f = testkit::certificate_sum(sys, cert);
    if (rng.coin()) f += rng.random_poly(n, 1, 2);
    const Rational lambda = rng.coin() ? Rational(0) : rng.small_rational();
    const bool expected = verify(f, lambda, sys, cert).accepted;
    const auto r = run({"verify", "--poly", write_temp("f", json_io::to_json(f)), "--cert",
                        write_temp("c", json_io::to_json(cert)), "--system", write_temp("s", json_io::to_json(sys)),
                        "--lambda", to_string(lambda)});
    EXPECT_EQ(r.exit_code, expected ? 0 : 1);
    EXPECT_EQ(r.payload["accepted"], expected);
  }
}

TEST(Cli, MomentAndCondition) {
  const auto m = run({"moment", "--pe", kData + "/pe_halfplane.json", "--degree", "2", "--system",
                      kData + "/cube2_halfplane.json"});
  ASSERT_EQ(m.exit_code, 0);
  EXPECT_EQ(m.payload["psd"], true);
  EXPECT_EQ(m.payload["dual_checks"]["sa_diagonal"]["passed"], true);
  EXPECT_EQ(m.payload["moment_matrix"]["index_sets"], Json::parse("[[],[0],[1]]"));

  const auto c = run({"condition", "--pe", kData + "/pe_halfplane.json", "--var", "0", "--bit", "1"});
  ASSERT_EQ(c.exit_code, 0);
  const PseudoExpectation pe = json_io::pseudoexpectation_from_json(c.payload);
  EXPECT_EQ(pe.level, 1);
  EXPECT_EQ(pe.moment({1}), Rational(1, 2));

  // Ẽ[x_1] = 1 leaves no mass on x_1 = 0.
  const std::string sure = write_temp("sure", json_io::parse(R"({"n": 1, "level": 2, "moments": [
      {"set": [], "value": "1"}, {"set": [0], "value": "1"}]})"));
  EXPECT_EQ(run({"condition", "--pe", sure, "--var", "0", "--bit", "0"}).exit_code, 1);
}

TEST(Cli, MmsOfMotzkinNewtonPolytope) {
  const auto r = run({"mms", "--poly", kData + "/motzkin2.json"});
  ASSERT_EQ(r.exit_code, 0);
  EXPECT_EQ(r.payload["class"], "M-simplex");
  EXPECT_EQ(r.payload["lattice_points"], 10);
  EXPECT_EQ(json_io::pointset_from_json(r.payload["mms"]).size(), 6u);
  EXPECT_EQ(run({"mms", "--points", kData + "/simplex_points.json"}).payload, r.payload);
}

TEST(Cli, ExitCodes) {
  EXPECT_EQ(run({"classify"}, "{not json").exit_code, 2);
  EXPECT_EQ(run({"classify", "--poly", "/nonexistent.json"}).exit_code, 2);
  EXPECT_EQ(run({}).exit_code, 2);
  EXPECT_EQ(run({"frobnicate"}).exit_code, 2);
  EXPECT_EQ(run({"sa-solve", "--system", kData + "/cube2_halfplane.json"}).exit_code, 2);
  EXPECT_EQ(run({"sa-solve", "--system", kData + "/cube2_halfplane.json", "--degree", "2", "--format", "xml"}).exit_code,
            2);
  const auto budget = run({"sa-solve", "--system", kData + "/cube2_halfplane.json", "--degree", "6", "--budget", "4"});
  EXPECT_EQ(budget.exit_code, 3);
  EXPECT_TRUE(budget.payload.contains("error"));
  // SA needs the hypercube: a precondition failure is reported as bad input.
  EXPECT_EQ(run({"sa-solve", "--system", write_temp("plain", json_io::parse(R"({"n": 1,
      "objective": {"n": 1, "terms": [{"coef": "1", "exp": [1]}]}})")),
                 "--degree", "2"})
                .exit_code,
            2);
  const auto help = run({"--help"});
  EXPECT_EQ(help.exit_code, 0);
  EXPECT_NE(cli::render(help).find("sa-solve"), std::string::npos);
}

TEST(Cli, TableFormat) {
  const auto r = run({"classify", "--poly", kData + "/motzkin2.json", "--format", "table"});
  EXPECT_EQ(cli::render(r), "circuit      true\nnonnegative  true\nsos          false\n");
}
