// Command-line front end.
//
// Exit codes: 0 success, 1 invalid input or usage, 2 solver failure,
// 3 a verification check failed.

#include <CLI11.hpp>

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "incompat/compat.hpp"
#include "incompat/errors.hpp"
#include "incompat/games.hpp"
#include "incompat/json_io.hpp"
#include "incompat/robustness.hpp"
#include "incompat/suites.hpp"

namespace {

using incompat::io::Json;
using namespace incompat;

constexpr int kExitOk = 0;
constexpr int kExitInput = 1;
constexpr int kExitSolver = 2;
constexpr int kExitCheck = 3;

struct RunConfig {
  std::string kind;
  std::string input;
  std::string output;
  std::string suite;
  std::string demo;
  int dim = 2;
  std::uint64_t seed = 1;
  int trials = -1;
  double tol_gap = 1e-8;
  double tol_feas = 1e-8;
};

sdp::SolverOptions solver_options(const RunConfig& cfg) {
  sdp::SolverOptions o;
  o.gap_tol = cfg.tol_gap;
  o.feas_tol = cfg.tol_feas;
  return o;
}

Json read_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ContractError("cannot open input file " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return Json::parse(buf.str());
}

std::vector<ChoiMatrix> channels_field(const Json& j) {
  if (!j.contains("channels") || !j["channels"].is_array()) {
    throw ContractError("input needs a \"channels\" array");
  }
  std::vector<ChoiMatrix> out;
  for (const auto& c : j["channels"]) out.push_back(io::channel_from_json(c));
  return out;
}

PovmCollection povms_field(const Json& j) {
  if (!j.contains("povms") || !j["povms"].is_array()) {
    throw ContractError("input needs a \"povms\" array");
  }
  std::vector<Povm> out;
  for (const auto& p : j["povms"]) out.push_back(io::povm_from_json(p));
  return PovmCollection(std::move(out));
}

Povm povm_field(const Json& j) {
  if (!j.contains("povm")) throw ContractError("input needs a \"povm\" object");
  return io::povm_from_json(j["povm"]);
}

ChoiMatrix channel_field(const Json& j) {
  if (!j.contains("channel")) throw ContractError("input needs a \"channel\" object");
  return io::channel_from_json(j["channel"]);
}

Json cmd_robustness(const RunConfig& cfg) {
  const Json in = read_input(cfg.input);
  const auto opts = solver_options(cfg);
  RobustnessReport r;
  if (cfg.kind == "channels") {
    r = robustness_channels(channels_field(in), opts);
  } else if (cfg.kind == "measurements") {
    r = robustness_measurements(povms_field(in), opts);
  } else {
    r = robustness_pair(povm_field(in), channel_field(in), opts);
  }
  Json out;
  out["command"] = "robustness";
  out["report"] = io::to_json(r);
  out["solver"] = io::to_json(opts);
  return out;
}

Json cmd_compat(const RunConfig& cfg) {
  const Json in = read_input(cfg.input);
  const auto opts = solver_options(cfg);
  CompatibilityVerdict v;
  if (cfg.kind == "channels") {
    v = check_channels(channels_field(in), opts);
  } else if (cfg.kind == "measurements") {
    v = check_measurements(povms_field(in), opts);
  } else {
    v = check_pair(povm_field(in), channel_field(in), opts);
  }
  Json out;
  out["command"] = "compat";
  out["kind"] = cfg.kind;
  out["verdict"] = io::to_json(v);
  out["margin_tolerance"] = kCompatMarginTol;
  out["solver"] = io::to_json(opts);
  return out;
}

const char* relation_name(suites::Relation r) {
  switch (r) {
    case suites::Relation::kEqual:
      return "==";
    case suites::Relation::kAtMost:
      return "<=";
    case suites::Relation::kAtLeast:
      return ">=";
  }
  return "?";
}

Json suite_json(const suites::SuiteReport& rep) {
  Json checks = Json::array();
  for (const auto& c : rep.checks) {
    checks.push_back(Json{{"name", c.name},
                          {"value", c.value},
                          {"reference", c.reference},
                          {"relation", relation_name(c.relation)},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass}});
  }
  Json out;
  out["command"] = "verify";
  out["suite"] = rep.suite;
  out["dim"] = rep.dim;
  out["seed"] = rep.seed;
  out["trials"] = rep.trials;
  out["pass"] = rep.pass();
  out["checks"] = std::move(checks);
  return out;
}

Json cmd_verify(const RunConfig& cfg, bool& pass) {
  suites::SuiteConfig sc;
  sc.dim = cfg.dim;
  sc.seed = cfg.seed;
  sc.trials = cfg.trials;
  sc.solver = solver_options(cfg);
  const auto rep = suites::run(cfg.suite, sc);
  pass = rep.pass();
  Json out = suite_json(rep);
  out["solver"] = io::to_json(sc.solver);
  return out;
}

Json cmd_demo(const RunConfig& cfg, bool& pass) {
  const auto opts = solver_options(cfg);
  const int d = cfg.dim;
  Json out;
  out["command"] = "demo";
  out["demo"] = cfg.demo;
  out["dim"] = d;
  std::vector<suites::Check> checks;
  if (cfg.demo == "identity-pair") {
    const std::vector<ChoiMatrix> ids{identity_channel(d), identity_channel(d)};
    const RobustnessReport r = robustness_channels(ids, opts);
    const ChannelGame g = game_from_channel_witness(*r.witness);
    const double ratio = advantage_ratio(g.game, Strategy{ids, g.measurements}, opts);
    out["robustness"] = r.primal_value;
    out["dual"] = r.dual_value;
    out["one_plus_robustness"] = 1.0 + r.primal_value;
    out["expected_one_plus_robustness"] = 2.0 * d / (d + 1.0);
    out["witness_game_ratio"] = ratio;
    checks.push_back(suites::expect_near("1 + R_C = 2d/(d+1)", 1.0 + r.primal_value, 2.0 * d / (d + 1.0), 1e-6));
    checks.push_back(suites::expect_near("witness game ratio = 2d/(d+1)", ratio, 2.0 * d / (d + 1.0), 1e-5));
  } else if (cfg.demo == "bb84") {
    const Povm z = suites::computational_povm(2);
    const Povm x = suites::fourier_povm(2);
    const DiscriminationGame game = bb84_game();
    const double p = success_prob(game, Strategy{{}, {z, x}});
    const RobustnessReport r = robustness_measurements(PovmCollection({z, x}), opts);
    out["dim"] = 2;
    out["game"] = io::to_json(game);
    out["success_probability"] = p;
    out["expected_success_probability"] = 1.0;
    out["measurement_robustness"] = r.primal_value;
    checks.push_back(suites::expect_near("matched projectors discriminate perfectly", p, 1.0, 1e-12));
  } else {
    const JointChannel cloner = cloning_channel(d);
    const ChoiMatrix m0 = marginal(cloner, 0);
    const ChoiMatrix m1 = marginal(cloner, 1);
    // J = c Psi + (1 - c) I/d^2 gives <Psi|J|Psi> = c + (1 - c)/d^2.
    const double overlap = trace_product(m0.matrix(), max_entangled_state(d));
    const double inv = 1.0 / (d * d);
    const double c = (overlap - inv) / (1.0 - inv);
    const CompatibilityVerdict v = check_channels({m0, m1}, opts);
    out["visibility"] = c;
    out["expected_visibility"] = cloning_visibility(d);
    out["marginal_deviation"] =
        max_abs_diff(m0.matrix(), depolarizing_channel(d, cloning_visibility(d)).matrix());
    out["marginals_equal"] = max_abs_diff(m0.matrix(), m1.matrix());
    out["compatible"] = v.compatible;
    out["margin"] = v.margin;
    checks.push_back(suites::expect_near("c = (d+2)/(2(d+1))", c, cloning_visibility(d), 1e-9));
    suites::Check compat{"marginals compatible", v.compatible ? 1.0 : 0.0, 1.0, 0.0,
                         suites::Relation::kEqual, v.compatible};
    checks.push_back(compat);
  }
  pass = true;
  Json arr = Json::array();
  for (const auto& c : checks) {
    pass = pass && c.pass;
    arr.push_back(Json{{"name", c.name}, {"value", c.value}, {"reference", c.reference},
                       {"tolerance", c.tolerance}, {"pass", c.pass}});
  }
  out["checks"] = std::move(arr);
  out["pass"] = pass;
  out["solver"] = io::to_json(opts);
  return out;
}

void add_common(CLI::App* sub, RunConfig& cfg) {
  sub->add_option("--tol-gap", cfg.tol_gap, "relative duality gap tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--tol-feas", cfg.tol_feas, "relative feasibility tolerance")->check(CLI::PositiveNumber);
  sub->add_option("--out", cfg.output, "write the report here instead of stdout");
}

int emit(const Json& report, const RunConfig& cfg) {
  const std::string text = report.dump(2) + "\n";
  if (cfg.output.empty()) {
    std::cout << text;
    return kExitOk;
  }
  std::ofstream out(cfg.output);
  if (!out) {
    std::cerr << "error: cannot write " << cfg.output << "\n";
    return kExitInput;
  }
  out << text;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robustness of quantum incompatibility: compute, certify, verify."};
  app.require_subcommand(1);
  RunConfig cfg;
  const std::vector<std::string> kinds{"channels", "measurements", "pair"};

  auto* rob = app.add_subcommand("robustness", "robustness of a collection or pair");
  rob->add_option("kind", cfg.kind, "channels | measurements | pair")->required()->check(CLI::IsMember(kinds));
  rob->add_option("--input", cfg.input, "JSON instance")->required();
  add_common(rob, cfg);

  auto* com = app.add_subcommand("compat", "compatibility check with joint object");
  com->add_option("kind", cfg.kind, "channels | measurements | pair")->required()->check(CLI::IsMember(kinds));
  com->add_option("--input", cfg.input, "JSON instance")->required();
  add_common(com, cfg);

  auto* ver = app.add_subcommand("verify", "run a built-in verification suite");
  ver->add_option("suite", cfg.suite, "theorem1 | theorem2 | prop1 | prop2 | appendixC | duality")
      ->required()
      ->check(CLI::IsMember(incompat::suites::suite_names()));
  ver->add_option("--dim", cfg.dim, "Hilbert space dimension")->check(CLI::Range(2, 4));
  ver->add_option("--seed", cfg.seed, "seed of the randomized instances");
  ver->add_option("--trials", cfg.trials, "number of random instances")->check(CLI::NonNegativeNumber);
  add_common(ver, cfg);

  auto* demo = app.add_subcommand("demo", "worked examples with their reference values");
  demo->add_option("name", cfg.demo, "identity-pair | bb84 | cloning")
      ->required()
      ->check(CLI::IsMember({"identity-pair", "bb84", "cloning"}));
  demo->add_option("--dim", cfg.dim, "Hilbert space dimension")->check(CLI::Range(2, 4));
  add_common(demo, cfg);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInput;
  }

  try {
    bool pass = true;
    Json report;
    if (rob->parsed()) {
      report = cmd_robustness(cfg);
    } else if (com->parsed()) {
      report = cmd_compat(cfg);
    } else if (ver->parsed()) {
      report = cmd_verify(cfg, pass);
    } else {
      report = cmd_demo(cfg, pass);
    }
    const int rc = emit(report, cfg);
    if (rc != kExitOk) return rc;
    return pass ? kExitOk : kExitCheck;
  } catch (const Json::parse_error& e) {
    std::cerr << "error: malformed JSON: " << e.what() << "\n";
    return kExitInput;
  } catch (const Json::exception& e) {
    std::cerr << "error: invalid JSON content: " << e.what() << "\n";
    return kExitInput;
  } catch (const SolverError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const std::out_of_range& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  } catch (const DegenerateWitnessError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitSolver;
  }
}
