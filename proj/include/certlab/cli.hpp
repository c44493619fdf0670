#pragma once

#include <CLI11.hpp>

#include <algorithm>
#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "certlab/json_io.hpp"

namespace certlab::cli {

using json_io::Json;

enum ExitCode : int { kOk = 0, kRejected = 1, kMalformed = 2, kBudget = 3, kInternal = 4 };

struct CommandResult {
  int exit_code = kOk;
  Json payload;             // null when there is nothing to print (help)
  std::string diagnostics;  // for stderr
  std::string help;         // usage text for stdout
  std::string format = "json";
};

// Flat "key  value" lines for objects; nested values are printed as compact JSON.
inline std::string render_table(const Json& j) {
  auto cell = [](const Json& v) -> std::string {
    if (v.is_string()) return v.get<std::string>();
    if (v.is_null()) return "-";
    return v.dump();
  };
  std::ostringstream out;
  if (j.is_object()) {
    std::size_t width = 0;
    for (const auto& [k, v] : j.items()) width = std::max(width, k.size());
    for (const auto& [k, v] : j.items()) out << k << std::string(width - k.size() + 2, ' ') << cell(v) << '\n';
  } else if (j.is_array()) {
    for (const auto& v : j) out << cell(v) << '\n';
  } else {
    out << cell(j) << '\n';
  }
  return out.str();
}

inline std::string render(const CommandResult& r) {
  if (r.payload.is_null()) return r.help;
  return r.format == "table" ? render_table(r.payload) : json_io::dump(r.payload);
}

namespace detail {

struct Options {
  std::string poly = "-";
  std::string system;
  std::string cert;
  std::string points;
  std::string pe;
  std::string kind;
  std::string shape = "putinar";
  std::string lambda = "0";
  std::string format = "json";
  std::optional<std::int64_t> budget;
  int degree = 0;
  int n = 2;
  int t = 1;
  int var = 0;
  int bit = 0;
};

inline std::string read_text(const std::string& path, std::istream& in) {
  if (path == "-") return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  std::ifstream f(path);
  if (!f) throw ParseError("cannot read '" + path + "'");
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

inline Json read_json(const std::string& path, std::istream& in) { return json_io::parse(read_text(path, in)); }

inline std::uint64_t lattice_budget(const Options& o) {
  return o.budget ? static_cast<std::uint64_t>(*o.budget) : kDefaultLatticeBudget;
}

inline std::size_t column_budget(const Options& o) {
  return o.budget ? static_cast<std::size_t>(*o.budget) : kDefaultColumnBudget;
}

// Variable count of a certificate document: the "n" field if present, else the
// first ground element that fixes it.
inline std::optional<int> certificate_variables(const Json& cert) {
  if (const auto it = cert.find("n"); it != cert.end() && it->is_number_integer()) return it->get<int>();
  const auto entries = cert.find("entries");
  if (entries == cert.end() || !entries->is_array()) return std::nullopt;
  for (const auto& e : *entries) {
    const auto g = e.find("ground");
    if (g == e.end() || !g->is_object()) continue;
    if (const auto m = g->find("monomials"); m != g->end() && m->is_array() && !m->empty() && (*m)[0].is_array()) {
      return static_cast<int>((*m)[0].size());
    }
    if (const auto c = g->find("circuit"); c != g->end() && c->contains("n") && (*c)["n"].is_number_integer()) {
      return (*c)["n"].get<int>();
    }
    if (const auto p = g->find("multiplier"); p != g->end() && p->contains("n") && (*p)["n"].is_number_integer()) {
      return (*p)["n"].get<int>();
    }
  }
  return std::nullopt;
}

inline Json classify(const Polynomial& p, const Options& o) {
  const CircuitDetection det = detect_circuit(p);
  Json out{{"circuit", det.circuit.has_value()}, {"nonnegative", nullptr}, {"sos", nullptr}};
  if (det.circuit) {
    const bool nonneg = is_nonnegative_circuit(*det.circuit);
    out["nonnegative"] = nonneg;
    out["sos"] = nonneg && circuit_is_sos(*det.circuit, lattice_budget(o));
    return out;
  }
  out["rejection"] = to_string(*det.rejection);
  if (p.total_degree() <= 2) {
    // Quadratics: nonnegative ⟺ SOS ⟺ PSD Gram matrix over (1, x).
    const bool psd = psd_check(quadratic_gram(p)).psd;
    out["nonnegative"] = psd;
    out["sos"] = psd;
    out["sonc"] = quadratic_sonc_membership(p).member;
  }
  return out;
}

inline Json mms(const PointSet& points, const Options& o) {
  const PointSet verts = hull_vertices(points);
  Json out{{"vertices", json_io::to_json(verts.sorted())}};
  out["mms"] = json_io::to_json(maximal_mediated_set(verts, MediationScan::Batch, lattice_budget(o)));
  out["lattice_points"] = lattice_points_in_hull(verts, lattice_budget(o)).size();
  out["class"] = is_simplex_with_even_vertices(verts) ? Json(to_string(classify_simplex(verts, lattice_budget(o))))
                                                      : Json(nullptr);
  return out;
}

}  // namespace detail

// Runs one command line (without the program name). `in` stands in for stdin
// when a file argument is "-".
inline CommandResult run(const std::vector<std::string>& args, std::istream& in = std::cin) {
  using detail::Options;
  Options o;
  CommandResult result;
  CLI::App app{"Exact certificates for SOS, SDSOS, SONC and Sherali-Adams hierarchies", "certlab"};
  app.require_subcommand(1);
  app.fallthrough();
  app.add_option("--format", o.format, "Output format")->check(CLI::IsMember({"json", "table"}));
  app.add_option("--budget", o.budget, "Cap on LP columns and lattice enumeration")->check(CLI::PositiveNumber);

  auto poly_opt = [&](CLI::App* s) { return s->add_option("--poly", o.poly, "Polynomial JSON file ('-' for stdin)"); };
  auto system_opt = [&](CLI::App* s) { return s->add_option("--system", o.system, "Constraint system JSON file"); };
  auto degree_opt = [&](CLI::App* s) {
    return s->add_option("--degree", o.degree, "Certificate degree")->check(CLI::NonNegativeNumber);
  };
  auto pe_opt = [&](CLI::App* s) { return s->add_option("--pe", o.pe, "Pseudoexpectation JSON file")->required(); };

  auto* classify = app.add_subcommand("classify", "Circuit detection, nonnegativity and SOS membership");
  poly_opt(classify);

  auto* mms = app.add_subcommand("mms", "Maximal mediated set and simplex class");
  auto* mms_poly = poly_opt(mms);
  mms->add_option("--points", o.points, "PointSet JSON file")->excludes(mms_poly);

  auto* verify_cmd = app.add_subcommand("verify", "Verify a certificate for f - lambda");
  poly_opt(verify_cmd);
  system_opt(verify_cmd);
  verify_cmd->add_option("--cert", o.cert, "Certificate JSON file")->required();
  verify_cmd->add_option("--lambda", o.lambda, "Certified lower bound");

  auto* convert = app.add_subcommand("convert", "Convert SDSOS to SONC, or SONC to SA on the hypercube");
  convert->add_option("--cert", o.cert, "Certificate JSON file")->required();
  convert->add_option("--kind", o.kind, "Target kind")->required()->check(CLI::IsMember({"sonc", "sa"}));
  system_opt(convert);

  auto* sa = app.add_subcommand("sa-solve", "Best Sherali-Adams lower bound via exact LP");
  system_opt(sa)->required();
  degree_opt(sa)->required();
  sa->add_option("--poly", o.poly, "Objective JSON file overriding the system's objective");
  sa->add_option("--shape", o.shape, "Certificate shape")->check(CLI::IsMember({"putinar", "schmuedgen"}));

  auto* moment = app.add_subcommand("moment", "Localizing moment matrix and dual checks");
  pe_opt(moment);
  degree_opt(moment)->required();
  moment->add_option("--poly", o.poly, "Localizing polynomial (default 1)");
  system_opt(moment);

  auto* cond = app.add_subcommand("condition", "Condition a pseudoexpectation on x_var = bit");
  pe_opt(cond);
  cond->add_option("--var", o.var, "0-based variable index")->required();
  cond->add_option("--bit", o.bit, "0 or 1")->required()->check(CLI::IsMember({0, 1}));

  auto* witness = app.add_subcommand("witness", "Emit a witness polynomial or constrained problem");
  witness->add_option("--kind", o.kind, "Witness family")
      ->required()
      ->check(CLI::IsMember({"motzkin", "signed_quadric", "cpop_sos", "cpop_sonc"}));
  witness->add_option("--n", o.n, "Variable count")->check(CLI::PositiveNumber);
  witness->add_option("--t", o.t, "Degree parameter for constrained problems")->check(CLI::PositiveNumber);

  auto* sep = app.add_subcommand("separation", "Separation facts for N_n and M_n");
  sep->add_option("--n", o.n, "Variable count")->check(CLI::Range(2, 12));
  sep->add_option("--t", o.t, "Degree parameter")->check(CLI::PositiveNumber);

  if (const char* env = std::getenv("CERTLAB_BUDGET"); env && *env) {
    try {
      const long long b = std::stoll(env);
      if (b <= 0) throw std::invalid_argument("nonpositive");
      o.budget = b;
    } catch (const std::exception&) {
      result.exit_code = kMalformed;
      result.diagnostics = "CERTLAB_BUDGET must be a positive integer\n";
      return result;
    }
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream out;
    std::ostringstream err;
    const int code = app.exit(e, out, err);
    result.help = out.str();
    result.diagnostics = err.str();
    result.exit_code = code == 0 ? kOk : kMalformed;
    return result;
  }
  result.format = o.format;

  auto fail = [&](int code, const std::string& msg) {
    result.exit_code = code;
    result.payload = Json{{"error", msg}};
    result.diagnostics = msg + "\n";
  };

  try {
    if (classify->parsed()) {
      result.payload = detail::classify(json_io::polynomial_from_json(detail::read_json(o.poly, in)), o);
    } else if (mms->parsed()) {
      const PointSet pts = o.points.empty()
                               ? newton_vertices(json_io::polynomial_from_json(detail::read_json(o.poly, in)))
                               : json_io::pointset_from_json(detail::read_json(o.points, in));
      result.payload = detail::mms(pts, o);
    } else if (verify_cmd->parsed()) {
      json_io::Problem prob;
      if (!o.system.empty()) prob = json_io::problem_from_json(detail::read_json(o.system, in));
      Polynomial f;
      if (o.poly != "-" || !prob.objective) {
        f = json_io::polynomial_from_json(detail::read_json(o.poly, in));
      } else {
        f = *prob.objective;
      }
      if (o.system.empty()) prob.system = ConstraintSystem(f.n());
      if (prob.system.n != f.n()) throw ParseError("system and polynomial variable counts differ");
      const Certificate cert = json_io::certificate_from_json(detail::read_json(o.cert, in), f.n());
      const VerificationReport rep = verify(f, parse_rational(o.lambda), prob.system, cert);
      result.payload = json_io::to_json(rep);
      result.exit_code = rep.accepted ? kOk : kRejected;
    } else if (convert->parsed()) {
      const Json cj = detail::read_json(o.cert, in);
      std::optional<ConstraintSystem> sys;
      if (!o.system.empty()) sys = json_io::constraint_system_from_json(detail::read_json(o.system, in));
      std::optional<int> n = sys ? std::optional<int>(sys->n) : detail::certificate_variables(cj);
      if (!n) throw ParseError("cannot determine the variable count; pass --system");
      const Certificate cert = json_io::certificate_from_json(cj, *n);
      if (o.kind == "sonc") {
        result.payload = json_io::to_json(convert_sdsos_to_sonc(cert));
      } else {
        if (!sys) throw ParseError("conversion to sa needs --system with the hypercube constraints");
        result.payload = json_io::to_json(convert_sonc_to_sa(cert, *sys));
      }
    } else if (sa->parsed()) {
      json_io::Problem prob = json_io::problem_from_json(detail::read_json(o.system, in));
      if (o.poly != "-") prob.objective = json_io::polynomial_from_json(detail::read_json(o.poly, in));
      if (!prob.objective) throw ParseError("no objective: add \"objective\" to the system or pass --poly");
      if (prob.objective->n() != prob.system.n) throw ParseError("objective and system variable counts differ");
      const SASolution sol = sa_solve(*prob.objective, prob.system, o.degree, json_io::shape_from_string(o.shape),
                                      detail::column_budget(o));
      Json out{{"bound", sol.bound ? json_io::to_json(*sol.bound) : Json(nullptr)},
               {"degree", sol.degree},
               {"shape", to_string(sol.shape)},
               {"status", to_string(sol.status)}};
      if (sol.status == LPStatus::Optimal) out["certificate"] = json_io::to_json(sa_certificate(sol));
      if (sol.status == LPStatus::Infeasible) out["farkas"] = json_io::to_json(sol.outcome.dual);
      result.payload = out;
      result.exit_code = sol.status == LPStatus::Optimal ? kOk : kRejected;
    } else if (moment->parsed()) {
      const PseudoExpectation pe = json_io::pseudoexpectation_from_json(detail::read_json(o.pe, in));
      const Polynomial g = o.poly == "-" ? Polynomial::constant(pe.n, 1)
                                         : json_io::polynomial_from_json(detail::read_json(o.poly, in));
      const MomentMatrix mm = moment_matrix(pe, g, o.degree);
      Json out{{"moment_matrix", json_io::to_json(mm)}, {"psd", psd_check(mm.matrix).psd}};
      if (!o.system.empty()) {
        const ConstraintSystem sys = json_io::constraint_system_from_json(detail::read_json(o.system, in));
        if (sys.n != pe.n) throw ParseError("system and pseudoexpectation variable counts differ");
        out["dual_checks"] = {{"moment_psd", json_io::to_json(moment_psd_check(pe, sys, o.degree))},
                              {"sa_diagonal", json_io::to_json(sa_dual_diag_check(pe, sys, o.degree))},
                              {"sdsos", json_io::to_json(sdsos_dual_check(pe, sys, o.degree))}};
      }
      result.payload = out;
    } else if (cond->parsed()) {
      const PseudoExpectation pe = json_io::pseudoexpectation_from_json(detail::read_json(o.pe, in));
      if (o.var < 0 || o.var >= pe.n) throw ParseError("--var out of range");
      try {
        result.payload = json_io::to_json(condition(pe, o.var, o.bit));
      } catch (const DegenerateBranch& e) {
        fail(kRejected, e.what());
      }
    } else if (witness->parsed()) {
      if (o.kind == "motzkin") {
        result.payload = json_io::to_json(witness_generalized_motzkin(o.n));
      } else if (o.kind == "signed_quadric") {
        result.payload = json_io::to_json(witness_signed_quadric(o.n));
      } else {
        const Cpop c = witness_cpop(o.kind == "cpop_sos" ? CpopKind::SosFriendly : CpopKind::SoncFriendly, o.n, o.t);
        result.payload = json_io::to_json(json_io::Problem{c.objective, c.system});
      }
    } else if (sep->parsed()) {
      const SeparationReport r = separation_report(o.n, o.t);
      result.payload = json_io::to_json(r);
      result.exit_code = r.all_facts_hold() ? kOk : kRejected;
    }
  } catch (const BudgetExceeded& e) {
    fail(kBudget, e.what());
  } catch (const InternalError& e) {
    fail(kInternal, e.what());
  } catch (const Error& e) {
    fail(kMalformed, e.what());
  } catch (const Json::exception& e) {
    fail(kMalformed, std::string("parse error: ") + e.what());
  }
  return result;
}

}  // namespace certlab::cli
