// drstqp: distributionally robust quadratic optimization over the simplex.
// One binary, subcommands per module; exit codes: 0 ok, 1 domain error,
// 2 usage error.
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "drstqp/calibrate.hpp"
#include "drstqp/cliquelab.hpp"
#include "drstqp/d3ro.hpp"
#include "drstqp/dro.hpp"
#include "drstqp/errors.hpp"
#include "drstqp/exec.hpp"
#include "drstqp/json_io.hpp"
#include "drstqp/specfun.hpp"
#include "drstqp/stqp.hpp"
#include "drstqp/verify.hpp"

namespace {

using drstqp::RngSpec;
using nlohmann::json;

struct GlobalOpts {
  std::uint64_t seed = 42;
  int threads = 0;
  std::string out;
  bool as_json = false;
};

json resolved_config(const std::string& cmd, const json& cfg, const GlobalOpts& g) {
  json full = cfg;
  full["command"] = cmd;
  full["seed"] = g.seed;
  full["threads"] = g.threads == 0 ? drstqp::worker_threads() : g.threads;
  return full;
}

// every run reports its resolved configuration; in --json mode it is embedded
// in the payload, otherwise printed as the first line
void print_config(const std::string& cmd, const json& cfg, const GlobalOpts& g) {
  if (!g.as_json) std::cout << "config: " << resolved_config(cmd, cfg, g).dump() << "\n";
}

struct Reporter {
  const GlobalOpts& g;
  std::string cmd;
  json cfg;

  void operator()(json payload, const std::string& human) const {
    if (g.as_json) {
      payload["config"] = resolved_config(cmd, cfg, g);
      std::cout << payload.dump(2) << "\n";
    } else {
      std::cout << human;
    }
    if (!g.out.empty()) drstqp::save_json(payload, g.out);
  }
};

std::string solution_text(const drstqp::StqpSolution& s) {
  std::ostringstream os;
  os.precision(10);
  os << "value " << s.value << "\n";
  os << "x =";
  for (double v : s.x.coords()) os << ' ' << v;
  os << "\nsupport =";
  for (int i : s.support) os << ' ' << i;
  os << "\nengine " << drstqp::engine_name(s.engine) << " ("
     << (s.global ? "global" : "local") << "), kkt residual " << s.kkt_residual
     << ", runtime " << s.runtime_s << " s\n";
  return os.str();
}

int run_stqp_solve(const std::string& matrix_path, const std::string& engine,
                   const GlobalOpts& g) {
  drstqp::SymMat q = drstqp::load_symmat(matrix_path);
  Reporter report{g, "stqp solve", {{"matrix", matrix_path}, {"engine", engine}}};
  print_config(report.cmd, report.cfg, g);
  drstqp::StqpSolution sol;
  RngSpec rng{g.seed, 0};
  if (engine == "enum") {
    sol = drstqp::solve_support_enum(q);
  } else if (engine == "replicator") {
    sol = drstqp::solve_replicator_multistart(q, 50, rng);
  } else {
    sol = drstqp::solve_auto(q, rng);
  }
  report(drstqp::to_json(sol), solution_text(sol));
  return 0;
}

int run_dro_solve(CLI::App* cmd, const GlobalOpts& g) {
  const std::string norm = cmd->get_option("--norm")->as<std::string>();
  std::string ens_path = cmd->get_option("--ensemble")->as<std::string>();
  std::string mat_path = cmd->get_option("--matrix")->as<std::string>();
  double p = cmd->get_option("--p")->as<double>();

  drstqp::SymMat qbar(1);
  drstqp::EmpiricalEnsemble ens;
  bool have_ens = !ens_path.empty();
  if (have_ens) {
    ens = drstqp::load_ensemble(ens_path);
    qbar = drstqp::sample_mean(ens);
  } else if (!mat_path.empty()) {
    qbar = drstqp::load_symmat(mat_path);
  } else {
    throw drstqp::DomainError("dro solve: need --ensemble or --matrix");
  }

  drstqp::UnifiedRadius radius{};
  auto* theta_opt = cmd->get_option("--theta");
  auto* goe_opt = cmd->get_option("--chance-goe");
  auto* wis_opt = cmd->get_option("--chance-wishart");
  json cfg{{"norm", norm}, {"p", p}};
  if (theta_opt->count() > 0) {
    radius = drstqp::radius_direct(theta_opt->as<double>());
    cfg["theta"] = radius.value;
  } else if (goe_opt->count() > 0) {
    auto v = goe_opt->as<std::vector<double>>();
    radius = drstqp::radius_chance_goe(v.at(0), v.at(1));
    cfg["chance_goe"] = {{"beta", v[0]}, {"alpha", v[1]}};
  } else if (wis_opt->count() > 0) {
    auto v = wis_opt->as<std::vector<double>>();
    radius = drstqp::radius_chance_wishart(v.at(0), int(v.at(1)), v.at(2));
    cfg["chance_wishart"] = {{"beta", v[0]}, {"k", int(v[1])}, {"alpha", v[2]}};
  } else {
    throw drstqp::DomainError("dro solve: need --theta, --chance-goe or --chance-wishart");
  }
  Reporter report{g, "dro solve", cfg};
  print_config(report.cmd, report.cfg, g);

  double constant = 0.0;
  drstqp::SymMat det(1);
  if (norm == "frob") {
    det = drstqp::reformulate_frobenius(qbar, radius.value);
  } else if (norm == "linf") {
    drstqp::MaxnormReform r = drstqp::reformulate_maxnorm(qbar, radius.value);
    constant = r.constant;
    det = r.matrix;
  } else {
    throw drstqp::DomainError("dro solve: --norm must be frob or linf");
  }
  drstqp::StqpSolution sol = drstqp::solve_auto(det, RngSpec{g.seed, 1});

  json payload{{"radius", radius.value},
               {"constant", constant},
               {"value", constant + sol.value},
               {"deterministic_matrix", drstqp::to_json(det)},
               {"solution", drstqp::to_json(sol)}};
  std::ostringstream human;
  human.precision(10);
  human << "radius " << radius.value << "\nrobust value " << constant + sol.value << "\n"
        << solution_text(sol);
  report(payload, human.str());
  return 0;
}

int run_d3ro_solve(const std::string& matrix_path, const std::string& radius_spec,
                   int starts, const GlobalOpts& g) {
  drstqp::SymMat qbar = drstqp::load_symmat(matrix_path);
  Reporter report{g, "d3ro solve",
                  {{"matrix", matrix_path}, {"radius", radius_spec}, {"starts", starts}}};
  print_config(report.cmd, report.cfg, g);

  auto colon = radius_spec.find(':');
  if (colon == std::string::npos) {
    throw drstqp::DomainError("d3ro solve: radius must look like const:0.5, invnorm:0.3, "
                              "invquad:R.json or goq:0.2");
  }
  const std::string kind = radius_spec.substr(0, colon);
  const std::string arg = radius_spec.substr(colon + 1);
  drstqp::RadiusFn radius;
  if (kind == "const") {
    radius = drstqp::RadiusFn::constant(std::stod(arg));
  } else if (kind == "invnorm") {
    radius = drstqp::RadiusFn::inv_norm_sq(std::stod(arg));
  } else if (kind == "invquad") {
    radius = drstqp::RadiusFn::inv_quad(drstqp::load_symmat(arg));
  } else if (kind == "goq") {
    radius = drstqp::RadiusFn::gamma_over_q(std::stod(arg));
  } else {
    throw drstqp::DomainError("d3ro solve: unknown radius kind " + kind);
  }

  drstqp::StqpSolution sol = drstqp::solve_d3(qbar, radius, starts, RngSpec{g.seed, 2});
  report(drstqp::to_json(sol), solution_text(sol));
  return 0;
}

drstqp::RadiusBound bound_from_flags(const std::string& kind, double c1, double c2, double a,
                                     int m, double c, double C, double K, double R) {
  if (kind == "expdecay") return drstqp::RadiusBound::exp_decay(c1, c2, a, m);
  if (kind == "transport") return drstqp::RadiusBound::transport(c);
  if (kind == "subgauss") return drstqp::RadiusBound::subgauss_uniform(C, K, m);
  if (kind == "subexp") return drstqp::RadiusBound::subexp_uniform(C, K, m);
  if (kind == "subexp-martingale") return drstqp::RadiusBound::subexp_martingale(R);
  throw drstqp::DomainError("calibrate: unknown bound kind " + kind);
}

int run_cliquelab_config(const std::string& config_path, const GlobalOpts& g) {
  json cfg = drstqp::load_json(config_path);
  print_config("cliquelab run", cfg, g);

  json gcfg = cfg.at("graph");
  RngSpec gseed{gcfg.value("seed", g.seed), 17};
  drstqp::WeightedGraph graph =
      drstqp::gen_graph(gcfg.at("n").get<int>(), gcfg.value("edge_prob", 0.3), gseed);

  drstqp::ExperimentGrid grid;
  const std::string model = cfg.at("model").get<std::string>();
  json grids = cfg.at("grids");
  grid.beta = grids.at("beta").get<std::vector<double>>();
  grid.N = cfg.value("N", 20);
  grid.trials = cfg.value("trials", 1);
  grid.seed = RngSpec{cfg.value("seed", g.seed), 18};

  std::vector<drstqp::RunRecord> records;
  if (model == "decision_independent") {
    grid.model = drstqp::ExperimentGrid::Model::DecisionIndependent;
    grid.theta_or_gamma = grids.at("theta").get<std::vector<double>>();
    records = drstqp::run_decision_independent(graph, grid);
  } else if (model == "decision_dependent") {
    grid.model = drstqp::ExperimentGrid::Model::DecisionDependent;
    grid.theta_or_gamma = grids.at("gamma").get<std::vector<double>>();
    records = drstqp::run_decision_dependent(graph, grid);
  } else {
    throw drstqp::DomainError("cliquelab run: model must be decision_independent or "
                              "decision_dependent");
  }

  std::filesystem::path dir = cfg.value("output_dir", std::string("out"));
  drstqp::emit_outputs(records, dir);
  std::cout << records.size() << " records -> " << dir.string() << "\n";
  return 0;
}

int run_cliquelab_demo(const std::string& example, const GlobalOpts& g) {
  std::filesystem::path dir = g.out.empty() ? std::filesystem::path("out") / ("demo-" + example)
                                            : std::filesystem::path(g.out);
  print_config("cliquelab demo", {{"example", example}, {"output_dir", dir.string()}}, g);

  auto run_grid = [&](drstqp::ExperimentGrid::Model model, int n, std::vector<double> vals,
                      std::vector<double> betas, int N, int trials,
                      const std::filesystem::path& where, bool freq_maps) {
    drstqp::WeightedGraph graph = drstqp::gen_graph(n, 0.3, RngSpec{g.seed, 17});
    drstqp::ExperimentGrid grid;
    grid.model = model;
    grid.theta_or_gamma = std::move(vals);
    grid.beta = std::move(betas);
    grid.N = N;
    grid.trials = trials;
    grid.seed = RngSpec{g.seed, 18};
    auto records = model == drstqp::ExperimentGrid::Model::DecisionIndependent
                       ? drstqp::run_decision_independent(graph, grid)
                       : drstqp::run_decision_dependent(graph, grid);
    drstqp::emit_outputs(records, where);
    if (freq_maps) {
      auto freqs = drstqp::solution_frequency(graph, records);
      json jf = json::array();
      int idx = 0;
      for (const auto& f : freqs) {
        json cell{{"param", f.theta_or_gamma}, {"beta", f.beta}, {"trials", f.trials},
                  {"node_freq", f.node_freq}};
        json edges = json::array();
        for (const auto& [e, v] : f.edge_freq) {
          edges.push_back({{"i", e.first}, {"j", e.second}, {"freq", v}});
        }
        cell["edge_freq"] = std::move(edges);
        jf.push_back(std::move(cell));
        std::ofstream svg(where / ("frequency_" + std::to_string(idx++) + ".svg"));
        svg << drstqp::svg_frequency_map(graph, f);
      }
      drstqp::save_json(jf, where / "frequency.json");
    }
    std::cout << records.size() << " records -> " << where.string() << "\n";
  };

  auto logspace = [](double lo, double hi, int k) {
    std::vector<double> v;
    for (int i = 0; i < k; ++i) {
      v.push_back(lo * std::pow(hi / lo, double(i) / double(k - 1)));
    }
    return v;
  };

  using Model = drstqp::ExperimentGrid::Model;
  if (example == "5.1") {
    run_grid(Model::DecisionIndependent, 12, {0.01, 0.6, 1.5}, {0.01, 0.1, 0.8}, 20, 3, dir,
             false);
  } else if (example == "5.2") {
    run_grid(Model::DecisionIndependent, 15, logspace(1e-3, 10.0, 13), {0.001}, 20, 10, dir,
             false);
  } else if (example == "5.3") {
    run_grid(Model::DecisionDependent, 10, logspace(1e-3, 1.0, 9), {0.01}, 50, 20, dir, false);
  } else if (example == "5.4") {
    for (int n : {10, 15, 25}) {
      run_grid(Model::DecisionDependent, n, {0.01}, {0.01}, 100, 3,
               dir / ("nodes_" + std::to_string(n)), false);
    }
    for (int N : {20, 50, 100}) {
      run_grid(Model::DecisionDependent, 20, {0.01}, {0.01}, N, 3,
               dir / ("samples_" + std::to_string(N)), false);
    }
  } else if (example == "5.5") {
    run_grid(Model::DecisionDependent, 10, {0.005, 0.05, 0.3}, {0.005, 0.08, 0.2}, 50, 15, dir,
             true);
  } else {
    throw drstqp::DomainError("cliquelab demo: example must be one of 5.1..5.5");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"distributionally robust standard quadratic optimization toolkit"};
  app.require_subcommand(1);
  GlobalOpts g;
  app.add_option("--seed", g.seed, "global random seed")->capture_default_str();
  app.add_option("--threads", g.threads, "worker thread cap (0 = hardware default)");
  app.add_option("--out", g.out, "write primary output to this path");
  app.add_flag("--json", g.as_json, "machine-readable output on stdout");

  // stqp
  auto* stqp_cmd = app.add_subcommand("stqp", "nominal solver");
  auto* stqp_solve = stqp_cmd->add_subcommand("solve", "minimize x^T Q x over the simplex");
  std::string stqp_matrix, stqp_engine = "auto";
  stqp_solve->add_option("--matrix", stqp_matrix, "matrix JSON file")->required();
  stqp_solve->add_option("--engine", stqp_engine, "enum|replicator|auto")
      ->check(CLI::IsMember({"enum", "replicator", "auto"}));

  // dro
  auto* dro_cmd = app.add_subcommand("dro", "constant-radius robust solver");
  auto* dro_solve = dro_cmd->add_subcommand("solve", "solve the deterministic equivalent");
  dro_solve->add_option("--norm", "frob|linf")->default_val("frob")
      ->check(CLI::IsMember({"frob", "linf"}));
  dro_solve->add_option("--ensemble", "ensemble JSON file")->default_val("");
  dro_solve->add_option("--matrix", "sample-mean matrix JSON file")->default_val("");
  dro_solve->add_option("--p", "transport order (result is p-independent)")->default_val(2.0);
  dro_solve->add_option("--theta", "constant radius");
  dro_solve->add_option("--chance-goe", "beta alpha")->expected(2);
  dro_solve->add_option("--chance-wishart", "beta k alpha")->expected(3);

  // d3ro
  auto* d3_cmd = app.add_subcommand("d3ro", "decision-dependent radius solver");
  auto* d3_solve = d3_cmd->add_subcommand("solve", "minimize x^T Q x + theta(x) x^T x");
  std::string d3_matrix, d3_radius;
  int d3_starts = 64;
  d3_solve->add_option("--matrix", d3_matrix, "sample-mean matrix JSON file")->required();
  d3_solve->add_option("--radius", d3_radius, "const:t | invnorm:g | invquad:R.json | goq:g")
      ->required();
  d3_solve->add_option("--starts", d3_starts, "multistart count")->capture_default_str();

  // calibrate
  auto* cal_cmd = app.add_subcommand("calibrate", "out-of-sample radius calibration");
  auto* cal_radius = cal_cmd->add_subcommand("radius", "evaluate a radius bound");
  std::string cal_kind = "transport";
  int cal_N = 100, cal_m = 1;
  double cal_beta = 0.05, cal_c1 = 1.0, cal_c2 = 1.0, cal_a = 1.5, cal_c = 2.0;
  double cal_C = 1.0, cal_K = 1.0, cal_R = 1.0;
  for (auto* sub : {cal_radius}) {
    sub->add_option("--kind", cal_kind, "expdecay|transport|subgauss|subexp|subexp-martingale")
        ->check(CLI::IsMember({"expdecay", "transport", "subgauss", "subexp",
                               "subexp-martingale"}));
    sub->add_option("--N", cal_N, "sample size");
    sub->add_option("--beta", cal_beta, "confidence complement");
    sub->add_option("--c1", cal_c1);
    sub->add_option("--c2", cal_c2);
    sub->add_option("--a", cal_a);
    sub->add_option("--m", cal_m, "ambient dimension n(n+1)/2");
    sub->add_option("--c", cal_c, "transportation constant");
    sub->add_option("--C", cal_C, "absolute constant");
    sub->add_option("--K", cal_K, "Orlicz norm bound");
    sub->add_option("--R", cal_R, "martingale Orlicz bound");
  }
  auto* cal_cov = cal_cmd->add_subcommand("coverage", "Monte-Carlo coverage of the ball");
  std::string cov_model = "goe", cov_kind = "transport";
  int cov_n = 3, cov_N = 200, cov_trials = 500, cov_k = 0, cov_m = 0;
  double cov_beta = 0.05, cov_c = 2.0, cov_R = 1.0, cov_C = 1.0, cov_K = 1.0;
  cal_cov->add_option("--model", cov_model, "goe|wishart")
      ->check(CLI::IsMember({"goe", "wishart"}));
  cal_cov->add_option("--n", cov_n, "matrix dimension");
  cal_cov->add_option("--N", cov_N, "samples per trial");
  cal_cov->add_option("--beta", cov_beta, "confidence complement");
  cal_cov->add_option("--trials", cov_trials, "Monte-Carlo trials");
  cal_cov->add_option("--kind", cov_kind, "radius bound kind")
      ->check(CLI::IsMember({"expdecay", "transport", "subgauss", "subexp",
                             "subexp-martingale"}));
  cal_cov->add_option("--k", cov_k, "Wishart degrees of freedom (default n)");
  cal_cov->add_option("--c", cov_c, "transportation constant");
  cal_cov->add_option("--R", cov_R, "martingale Orlicz bound");
  cal_cov->add_option("--C", cov_C, "absolute constant");
  cal_cov->add_option("--K", cov_K, "Orlicz norm bound");
  cal_cov->add_option("--m", cov_m, "dimension override for uniform bounds");

  // cliquelab
  auto* cl_cmd = app.add_subcommand("cliquelab", "weighted-clique experiments");
  auto* cl_run = cl_cmd->add_subcommand("run", "run a config file");
  std::string cl_config;
  cl_run->add_option("--config", cl_config, "experiment config JSON")->required();
  auto* cl_demo = cl_cmd->add_subcommand("demo", "run a named experiment preset");
  std::string cl_example;
  cl_demo->add_option("--example", cl_example, "5.1|5.2|5.3|5.4|5.5")->required()
      ->check(CLI::IsMember({"5.1", "5.2", "5.3", "5.4", "5.5"}));

  // verify
  auto* ver_cmd = app.add_subcommand("verify", "run property-test oracles");
  std::string ver_suite = "all";
  ver_cmd->add_option("--suite", ver_suite, "module suite name or all");

  // global flags are accepted before or after the subcommand
  auto enable_fallthrough = [](CLI::App* node, auto&& self) -> void {
    node->fallthrough();
    for (CLI::App* sub : node->get_subcommands({})) self(sub, self);
  };
  for (CLI::App* sub : app.get_subcommands({})) enable_fallthrough(sub, enable_fallthrough);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n" << app.help();
    return 2;
  }

  drstqp::set_worker_threads(g.threads);

  try {
    if (stqp_solve->parsed()) return run_stqp_solve(stqp_matrix, stqp_engine, g);
    if (dro_solve->parsed()) return run_dro_solve(dro_solve, g);
    if (d3_solve->parsed()) return run_d3ro_solve(d3_matrix, d3_radius, d3_starts, g);
    if (cal_radius->parsed()) {
      drstqp::RadiusBound b =
          bound_from_flags(cal_kind, cal_c1, cal_c2, cal_a, cal_m, cal_c, cal_C, cal_K, cal_R);
      Reporter report{g, "calibrate radius",
                      {{"kind", cal_kind}, {"N", cal_N}, {"beta", cal_beta}}};
      print_config(report.cmd, report.cfg, g);
      double theta = b.evaluate(cal_N, cal_beta);
      report(json{{"kind", cal_kind}, {"N", cal_N}, {"beta", cal_beta}, {"theta", theta}},
             "theta = " + std::to_string(theta) + "\n");
      return 0;
    }
    if (cal_cov->parsed()) {
      if (cov_k == 0) cov_k = cov_n;
      if (cov_m == 0) cov_m = cov_n * (cov_n + 1) / 2;
      drstqp::EnsembleModel model = cov_model == "goe"
                                        ? drstqp::EnsembleModel::goe(cov_n)
                                        : drstqp::EnsembleModel::wishart(cov_n, cov_k);
      drstqp::RadiusBound b =
          bound_from_flags(cov_kind, 1.0, 1.0, 1.5, cov_m, cov_c, cov_C, cov_K, cov_R);
      json cov_cfg{{"model", cov_model}, {"n", cov_n},         {"N", cov_N},
                   {"beta", cov_beta},   {"trials", cov_trials}, {"kind", cov_kind}};
      print_config("calibrate coverage", cov_cfg, g);
      std::ofstream csv;
      if (!g.out.empty()) {
        csv.open(g.out);
        if (!csv) throw std::runtime_error("cannot write " + g.out);
      }
      drstqp::CoverageReport r =
          drstqp::coverage_mc(model, cov_N, cov_trials, cov_beta, b, RngSpec{g.seed, 31},
                              drstqp::Exec::Par, g.out.empty() ? nullptr : &csv);
      json payload{{"model", r.model},       {"bound", r.bound},
                   {"n", r.n},               {"N", r.N},
                   {"trials", r.trials},     {"beta", r.beta},
                   {"theta", r.theta},       {"coverage", r.coverage},
                   {"frob_coverage", r.frob_coverage}, {"target", r.target},
                   {"wilson_lo", r.wilson_lo}, {"wilson_hi", r.wilson_hi}};
      std::ostringstream human;
      human.precision(6);
      human << "theta " << r.theta << ", coverage " << r.coverage << " (target >= " << r.target
            << "), wilson [" << r.wilson_lo << ", " << r.wilson_hi << "], frobenius event "
            << r.frob_coverage << "\n";
      Reporter report{g, "calibrate coverage", cov_cfg};
      report(payload, human.str());
      return 0;
    }
    if (cl_run->parsed()) return run_cliquelab_config(cl_config, g);
    if (cl_demo->parsed()) return run_cliquelab_demo(cl_example, g);
    if (ver_cmd->parsed()) {
      print_config("verify", {{"suite", ver_suite}}, g);
      auto results = drstqp::run_suite(ver_suite, g.seed);
      bool all_pass = true;
      for (const auto& r : results) {
        std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name;
        if (!r.detail.empty()) std::cout << "  (" << r.detail << ")";
        std::cout << "\n";
        all_pass = all_pass && r.pass;
      }
      return all_pass ? 0 : 1;
    }
  } catch (const drstqp::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::cerr << app.help();
  return 2;
}
