// plap: graph p-capacity, Sobolev constants and isocapacitary bound checks.
//
// Exit codes: 0 success, 1 operational error or bad usage, 2 a checked inequality was violated.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "plap/capacity.hpp"
#include "plap/checks.hpp"
#include "plap/format.hpp"
#include "plap/geometry_io.hpp"
#include "plap/isocap.hpp"
#include "plap/spectral.hpp"
#include "plap/suites.hpp"

namespace {

using plap::InputError;
using Json = nlohmann::ordered_json;

constexpr int kViolation = 2;

struct RunConfig {
  std::string command;
  std::string gen;
  std::string graph_path;
  std::string p = "2";
  std::string alpha = "1";
  std::string mode = "steklov";
  std::string a;
  std::string b;
  std::optional<std::uint64_t> seed;
  int starts = 8;
  double tol = 1e-8;
  std::string out;
  std::string format = "csv";
  std::int64_t budget = 250000;
  bool heuristic = false;
  bool oracle = false;
  int thresholds = 32;
  int profiles = 500;
  int draws = 100;
  int grid = 1000;
};

std::vector<double> parse_reals(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(item, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != item.size()) throw InputError(std::string(flag) + ": bad number '" + item + "'");
    out.push_back(x);
  }
  if (out.empty()) throw InputError(std::string(flag) + ": expected at least one value");
  return out;
}

double parse_real(const std::string& text, const char* flag) {
  const auto v = parse_reals(text, flag);
  if (v.size() != 1) throw InputError(std::string(flag) + ": expected a single value");
  return v.front();
}

plap::VertexSet parse_vertices(const std::string& text, const char* flag) {
  std::vector<int> members;
  for (double x : parse_reals(text, flag)) {
    if (x != static_cast<int>(x)) throw InputError(std::string(flag) + ": vertex ids must be integers");
    members.push_back(static_cast<int>(x));
  }
  return plap::VertexSet(std::move(members));
}

bool is_randomized_model(const std::string& gen) {
  const auto spec = plap::parse_model_spec(gen);
  return spec.name == "random_gnp" || spec.weighted;
}

std::uint64_t require_seed(const RunConfig& cfg, const char* why) {
  if (!cfg.seed) throw InputError(std::string("--seed is required ") + why);
  return *cfg.seed;
}

// Cotangent graphs are exact for p = 2 only; other exponents get a qualitative analog.
plap::WeightedGraph from_mesh(const RunConfig& cfg, const plap::MeshSpec& mesh) {
  auto mg = plap::mesh_to_graph(mesh);
  if (mg.clamped_weights > 0)
    std::cerr << "warning: " << mg.clamped_weights << " cotangent weights clamped to the positivity floor\n";
  if (cfg.command != "gen" && cfg.p != "2") std::cerr << "note: mesh graph is not FEM-consistent for p != 2\n";
  return std::move(mg.graph);
}

plap::WeightedGraph load_source(const RunConfig& cfg) {
  if (cfg.gen.empty() == cfg.graph_path.empty()) throw InputError("give exactly one of --gen and --graph");
  if (!cfg.gen.empty()) {
    const auto spec = plap::parse_model_spec(cfg.gen);
    if (spec.name == "disk") {
      const int level = spec.params.empty() ? 2 : static_cast<int>(spec.params.front());
      return from_mesh(cfg, plap::mesh_disk(level));
    }
    const std::uint64_t seed = is_randomized_model(cfg.gen) ? require_seed(cfg, "for random generators") : 0;
    return plap::gen_model(spec, seed);
  }
  const std::filesystem::path path(cfg.graph_path);
  if (path.extension() == ".off") return from_mesh(cfg, plap::load_off(path));
  return plap::load_graph(path);
}

void emit(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(cfg.out, std::ios::binary);
  if (!f) throw InputError("cannot write " + cfg.out);
  f << text;
}

Json vertices(const plap::VertexSet& s) { return Json(s.members); }

Json config_json(const RunConfig& cfg) {
  Json j;
  j["command"] = cfg.command;
  if (!cfg.gen.empty()) j["gen"] = cfg.gen;
  if (!cfg.graph_path.empty()) j["graph"] = cfg.graph_path;
  j["p"] = cfg.p;
  j["alpha"] = cfg.alpha;
  j["mode"] = cfg.mode;
  if (cfg.seed) j["seed"] = *cfg.seed;
  j["starts"] = cfg.starts;
  j["tol"] = cfg.tol;
  j["budget"] = cfg.budget;
  return j;
}

Json report_json(const plap::BoundCheckReport& r) {
  Json j;
  j["p"] = r.p;
  j["alpha"] = r.alpha;
  j["mode"] = plap::to_string(r.mode);
  if (r.error) {
    j["error"] = *r.error;
    return j;
  }
  j["gamma"] = r.gamma;
  j["gamma_mode"] = plap::to_string(r.gamma_mode);
  j["middle"] = r.middle;
  j["middle_cert"] = plap::to_string(r.middle_cert);
  j["lower_const"] = r.lower_const;
  j["upper_const"] = r.upper_const;
  j["lower_ok"] = plap::to_string(r.lower_ok);
  j["upper_ok"] = plap::to_string(r.upper_ok);
  j["slack_lower"] = r.slack_lower;
  j["slack_upper"] = r.slack_upper;
  j["seed"] = r.seed;
  j["cert_a"] = vertices(r.cert_a);
  j["cert_b"] = vertices(r.cert_b);
  return j;
}

// Writes graph, config and reports next to the output so the instance can be replayed.
void dump_violation(const RunConfig& cfg, const plap::WeightedGraph& g, const Json& reports) {
  const std::string path = cfg.out.empty() ? "violation.json" : cfg.out + ".violation.json";
  Json j;
  j["config"] = config_json(cfg);
  j["graph"] = plap::graph_to_json(g);
  j["reports"] = reports;
  std::ofstream f(path, std::ios::binary);
  f << plap::dump_json17(j) << '\n';
  std::cerr << "violation: instance written to " << path << '\n';
}

plap::BoundCheckOptions bound_options(const RunConfig& cfg, bool randomized) {
  plap::BoundCheckOptions opts;
  opts.isocap.budget = cfg.budget;
  opts.isocap.tol = cfg.tol;
  opts.allow_heuristic = true;
  opts.heuristic_thresholds = cfg.thresholds;
  opts.sobolev.starts = cfg.starts;
  opts.sobolev.seed = randomized ? require_seed(cfg, "when the Sobolev constant needs descent") : cfg.seed.value_or(0);
  return opts;
}

int cmd_gen(const RunConfig& cfg) {
  emit(cfg, plap::graph_to_string(load_source(cfg)));
  return 0;
}

int cmd_cap(const RunConfig& cfg) {
  const auto g = load_source(cfg);
  const double p = parse_real(cfg.p, "--p");
  if (cfg.a.empty() || cfg.b.empty()) throw InputError("cap needs --a and --b");
  const auto a = parse_vertices(cfg.a, "--a");
  const auto b = parse_vertices(cfg.b, "--b");
  a.validate(g);
  b.validate(g);
  if (cfg.oracle && p != 2.0) throw InputError("--oracle needs p = 2");
  const auto r = cfg.oracle ? plap::capacity_p2_oracle(g, a, b) : plap::capacity(g, a, b, p, cfg.tol);
  Json j;
  j["value"] = r.value;
  j["iterations"] = r.iterations;
  j["kkt_residual"] = r.kkt_residual;
  j["mode"] = plap::to_string(r.mode);
  j["converged"] = r.converged;
  emit(cfg, plap::dump_json17(j) + "\n");
  return 0;
}

int cmd_eig(const RunConfig& cfg) {
  const auto g = load_source(cfg);
  const double p = parse_real(cfg.p, "--p");
  plap::SobolevOptions opts;
  opts.starts = cfg.starts;
  opts.seed = p == 2.0 ? cfg.seed.value_or(0) : require_seed(cfg, "for p != 2");
  const auto r = plap::first_eigenvalue(g, p, plap::parse_problem(cfg.mode), opts);
  Json j;
  j["value"] = r.sobolev.value;
  j["mode"] = plap::to_string(r.sobolev.mode);
  j["certified"] = plap::to_string(r.sobolev.certified);
  j["residual"] = r.residual;
  j["recenter_c"] = r.sobolev.recenter_c;
  j["starts"] = r.sobolev.starts;
  j["best_start"] = r.sobolev.best_start;
  j["extremal"] = std::vector<double>(r.sobolev.extremal.begin(), r.sobolev.extremal.end());
  emit(cfg, plap::dump_json17(j) + "\n");
  return 0;
}

int cmd_isocap(const RunConfig& cfg) {
  const auto g = load_source(cfg);
  const double p = parse_real(cfg.p, "--p");
  const double alpha = parse_real(cfg.alpha, "--alpha");
  const auto problem = plap::parse_isocap_problem(cfg.mode);
  plap::IsocapOptions opts{cfg.budget, cfg.tol};
  plap::IsocapResult r;
  if (cfg.heuristic) {
    const auto seed_fn =
        (problem == plap::IsocapProblem::steklov ? plap::steklov_p2_oracle(g) : plap::neumann_p2_oracle(g)).extremal;
    r = plap::isocap_heuristic(g, p, alpha, problem, seed_fn, cfg.thresholds, opts);
  } else {
    r = plap::isocap_exact(g, p, alpha, problem, opts);
  }
  Json j;
  j["value"] = r.value;
  j["mode"] = plap::to_string(r.mode);
  j["cert_a"] = vertices(r.cert_a);
  j["cert_b"] = vertices(r.cert_b);
  j["capacity"] = r.capacity;
  j["pairs_evaluated"] = r.pairs_evaluated;
  j["p"] = r.p;
  j["alpha"] = r.alpha;
  emit(cfg, plap::dump_json17(j) + "\n");
  return 0;
}

int cmd_verify(const RunConfig& cfg) {
  const auto g = load_source(cfg);
  const double p = parse_real(cfg.p, "--p");
  const double alpha = parse_real(cfg.alpha, "--alpha");
  const auto opts = bound_options(cfg, !(p == 2.0 && alpha == 1.0));
  const auto r = plap::theorem_bounds_check(g, p, alpha, plap::parse_problem(cfg.mode), opts);
  const Json j = report_json(r);
  emit(cfg, plap::dump_json17(j) + "\n");
  if (r.violated()) {
    dump_violation(cfg, g, Json::array({j}));
    return kViolation;
  }
  return 0;
}

int cmd_sweep(const RunConfig& cfg) {
  const auto g = load_source(cfg);
  const auto ps = parse_reals(cfg.p, "--p");
  const auto alphas = parse_reals(cfg.alpha, "--alpha");
  bool randomized = false;
  for (double p : ps)
    for (double alpha : alphas) randomized = randomized || !(p == 2.0 && alpha == 1.0);
  const auto rows = plap::sweep(g, ps, alphas, plap::parse_problem(cfg.mode), bound_options(cfg, randomized));

  Json all = Json::array();
  bool violated = false;
  for (const auto& r : rows) {
    all.push_back(report_json(r));
    violated = violated || (!r.error && r.violated());
  }
  emit(cfg, cfg.format == "csv" ? plap::sweep_csv(rows) : plap::dump_json17(all) + "\n");
  if (violated) {
    dump_violation(cfg, g, all);
    return kViolation;
  }
  return 0;
}

int cmd_lemma(const RunConfig& cfg) {
  plap::LemmaSuiteOptions opts;
  opts.seed = require_seed(cfg, "for the randomized suites");
  opts.p_list = parse_reals(cfg.p, "--p");
  opts.alpha_list = parse_reals(cfg.alpha, "--alpha");
  opts.grid_n = cfg.grid;
  opts.profiles = cfg.profiles;
  opts.draws = cfg.draws;
  Json all = Json::array();
  for (const auto& s : plap::run_lemma_suites(opts)) {
    Json j;
    j["suite"] = s.name;
    j["cases"] = s.cases;
    j["violations"] = s.violations;
    j["worst"] = s.worst;
    all.push_back(j);
  }
  emit(cfg, plap::dump_json17(all) + "\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"p-capacity, Sobolev constants and isocapacitary bounds on weighted graphs"};
  app.require_subcommand(1);
  RunConfig cfg;

  const auto add_source = [&](CLI::App* sub) {
    auto* gen = sub->add_option("--gen", cfg.gen, "generator, e.g. path:3, grid2d:3x3, random_gnp:10,0.4[,w], disk:2");
    auto* file = sub->add_option("--graph", cfg.graph_path, "graph JSON or OFF mesh");
    gen->excludes(file);
  };
  const auto add_common = [&](CLI::App* sub) {
    add_source(sub);
    sub->add_option("--p", cfg.p, "exponent p > 1");
    sub->add_option("--seed", cfg.seed, "seed for every randomized component");
    sub->add_option("--tol", cfg.tol, "solver tolerance");
    sub->add_option("--out", cfg.out, "output path (default stdout)");
  };

  auto* gen = app.add_subcommand("gen", "write a generated graph as JSON");
  add_source(gen);
  gen->add_option("--seed", cfg.seed, "seed for random generators");
  gen->add_option("--out", cfg.out, "output path (default stdout)");

  auto* cap = app.add_subcommand("cap", "p-capacity between two vertex sets");
  add_common(cap);
  cap->add_option("--a", cfg.a, "comma vertex list")->required();
  cap->add_option("--b", cfg.b, "comma vertex list")->required();
  cap->add_flag("--oracle", cfg.oracle, "use the linear solve (p = 2 only)");

  auto* eig = app.add_subcommand("eig", "first nonlinear eigenvalue");
  add_common(eig);
  eig->add_option("--mode", cfg.mode, "steklov|neumann")->check(CLI::IsMember({"steklov", "neumann"}));
  eig->add_option("--starts", cfg.starts, "descent starts")->check(CLI::PositiveNumber);

  auto* iso = app.add_subcommand("isocap", "isocapacitary constant");
  add_common(iso);
  iso->add_option("--alpha", cfg.alpha, "exponent alpha > 0");
  iso->add_option("--mode", cfg.mode, "steklov|neumann|dirichlet")
      ->check(CLI::IsMember({"steklov", "neumann", "dirichlet"}));
  iso->add_option("--budget", cfg.budget, "maximum admissible pairs to enumerate");
  iso->add_flag("--heuristic", cfg.heuristic, "level sets of the p = 2 extremal instead of enumeration");
  iso->add_option("--thresholds", cfg.thresholds, "heuristic threshold count");

  auto* verify = app.add_subcommand("verify", "two-sided bound check for one (p, alpha)");
  auto* sweep = app.add_subcommand("sweep", "bound checks over p and alpha lists");
  for (auto* sub : {verify, sweep}) {
    add_common(sub);
    sub->add_option("--alpha", cfg.alpha, sub == sweep ? "comma list" : "exponent alpha");
    sub->add_option("--mode", cfg.mode, "steklov|neumann")->check(CLI::IsMember({"steklov", "neumann"}));
    sub->add_option("--starts", cfg.starts, "descent starts")->check(CLI::PositiveNumber);
    sub->add_option("--budget", cfg.budget, "maximum admissible pairs before the heuristic");
    sub->add_option("--thresholds", cfg.thresholds, "heuristic threshold count");
  }
  sweep->add_option("--format", cfg.format, "csv (default) or json")->check(CLI::IsMember({"json", "csv"}));

  auto* lemma = app.add_subcommand("lemma", "property suites for the supporting inequalities");
  lemma->add_option("--p", cfg.p, "comma list");
  lemma->add_option("--alpha", cfg.alpha, "comma list");
  lemma->add_option("--seed", cfg.seed, "suite seed");
  lemma->add_option("--profiles", cfg.profiles, "random profiles per suite");
  lemma->add_option("--draws", cfg.draws, "random (graph, function) draws");
  lemma->add_option("--grid", cfg.grid, "cells in the discretized minimization");
  lemma->add_option("--out", cfg.out, "output path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  if (lemma->parsed()) {
    if (lemma->get_option("--p")->count() == 0) cfg.p = "1.5,2,3";
    if (lemma->get_option("--alpha")->count() == 0) cfg.alpha = "1,2";
  }

  try {
    if (gen->parsed()) return cfg.command = "gen", cmd_gen(cfg);
    if (cap->parsed()) return cfg.command = "cap", cmd_cap(cfg);
    if (eig->parsed()) return cfg.command = "eig", cmd_eig(cfg);
    if (iso->parsed()) return cfg.command = "isocap", cmd_isocap(cfg);
    if (verify->parsed()) return cfg.command = "verify", cmd_verify(cfg);
    if (sweep->parsed()) return cfg.command = "sweep", cmd_sweep(cfg);
    if (lemma->parsed()) return cfg.command = "lemma", cmd_lemma(cfg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
