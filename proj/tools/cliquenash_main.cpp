// Command line front end: graph generation, reduction-game builders,
// equilibrium solvers, verification, clique recovery and the seeded
// experiment harness.
//
// Exit codes: 0 success, 1 usage or I/O error, 2 verification failed,
// 3 recovery failed, 4 budget exceeded.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "cliquenash/approx_nash.hpp"
#include "cliquenash/bayesian.hpp"
#include "cliquenash/game.hpp"
#include "cliquenash/harness.hpp"
#include "cliquenash/recovery.hpp"
#include "cliquenash/reductions.hpp"

namespace {

using namespace cliquenash;

constexpr int kOk = 0;
constexpr int kUsage = 1;
constexpr int kVerifyFailed = 2;
constexpr int kRecoveryFailed = 3;
constexpr int kBudgetExceeded = 4;

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content << "\n";
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << content << "\n";
}

struct GenGraphArgs {
  int n = 50;
  int k = 12;
  std::uint64_t seed = 1;
  std::string model = "planted";
  std::string out;
};

int run_gen_graph(const GenGraphArgs& a) {
  PlantedGraph g = [&]() {
    if (a.model == "planted") return sample_planted_clique(a.n, a.k, a.seed);
    if (a.model == "octahedron") return octahedron();
    if (a.model == "k5") return complete_graph(5);
    if (a.model == "circulant") return circulant_4regular(a.n);
    throw std::runtime_error("unknown graph model: " + a.model);
  }();
  spit(a.out, g.to_json());
  return kOk;
}

struct BuildGameArgs {
  std::string variant;
  std::string graph_path;
  std::string artifact_path;
  double eta = 0.07;
  std::string map = "eps";
  int n_big = 200;
  int n1 = 32;
  int n2 = 4;
  double lambda = 0.8;
  int num_types = 6;
  std::uint64_t seed = 1;
  std::string out;
  std::string emit_game;
};

ReductionParams map_params(const std::string& map, double eta) {
  if (map == "eps") return params_eps_hardness(eta);
  if (map == "value") return params_value_hardness(eta);
  throw std::runtime_error("unknown parameter map: " + map);
}

int run_build_game(const BuildGameArgs& a) {
  if (a.variant == "bne-lift") {
    const ReductionArtifact art = load_artifact(slurp(a.artifact_path));
    const BayesianGame lifted = lift_uniform_bayes(art, a.num_types);
    spit(a.out, lifted.to_json());
    return kOk;
  }
  const PlantedGraph graph = PlantedGraph::from_json(slurp(a.graph_path));
  if (a.variant == "bne-gadget") {
    const BayesianGame gadget = build_coloring_hardness_game(graph);
    spit(a.out, gadget.to_json());
    return kOk;
  }

  std::optional<ReductionArtifact> art;
  if (a.variant == "hk") {
    ReductionParams params = map_params(a.map, a.eta);
    params.n_big = a.n_big;
    art = build_hk_game(graph, params, a.seed);
  } else if (a.variant == "small-support") {
    art = build_small_support_game(graph, a.eta, a.n1, a.n2, a.seed);
  } else if (a.variant == "second-eq") {
    ReductionParams params = params_value_hardness(a.eta);
    params.n_big = a.n_big;
    art = build_second_equilibrium_game(build_hk_game(graph, params, a.seed), a.lambda);
  } else {
    throw std::runtime_error("unknown build-game variant: " + a.variant);
  }
  spit(a.out, art->to_json());
  if (!a.emit_game.empty()) spit(a.emit_game, art->game.to_json());
  return kOk;
}

struct SolveArgs {
  std::string algorithm;
  std::string game_path;
  std::string bgame_path;
  int start_row = 0;
  double eps = 0.5;
  int k = 3;
  double value_floor = -1.0;
  std::uint64_t budget = 50'000'000;
  std::uint64_t guess_budget = 10'000;
  std::uint64_t seed = 1;
  std::string out;
};

int run_solve(const SolveArgs& a) {
  using nlohmann::json;
  if (a.algorithm == "dmp") {
    const BimatrixGame game = BimatrixGame::from_json(slurp(a.game_path));
    spit(a.out, dmp_half_equilibrium(game, a.start_row).to_json());
    return kOk;
  }
  if (a.algorithm == "optimal-half") {
    const BimatrixGame game = BimatrixGame::from_json(slurp(a.game_path));
    auto [profile, val] = optimal_value_half_equilibrium(game);
    json j = json::parse(profile.to_json());
    j["value"] = val;
    spit(a.out, j.dump());
    return kOk;
  }
  if (a.algorithm == "small-support-search") {
    const BimatrixGame game = BimatrixGame::from_json(slurp(a.game_path));
    std::optional<double> floor;
    if (a.value_floor >= 0.0) floor = a.value_floor;
    const SmallSupportResult r = small_support_search(game, a.eps, a.k, floor, a.budget);
    if (r.status == SearchStatus::BudgetExceeded) {
      std::cerr << "budget exceeded after " << r.pairs_checked << " profiles\n";
      return kBudgetExceeded;
    }
    if (r.status == SearchStatus::NotFound) {
      std::cerr << "no profile in the searched class\n";
      return kVerifyFailed;
    }
    spit(a.out, r.profile->to_json());
    return kOk;
  }
  if (a.algorithm == "brute-bne") {
    const BayesianGame game = BayesianGame::from_json(slurp(a.bgame_path));
    const BruteForceResult r =
        brute_force_pure_bne(game, a.eps, static_cast<double>(a.budget));
    if (r.status == BneSearchStatus::BudgetExceeded) return kBudgetExceeded;
    if (r.status == BneSearchStatus::NoneExists) {
      std::cerr << "no pure eps-BNE exists\n";
      return kVerifyFailed;
    }
    spit(a.out, r.profile->to_json());
    return kOk;
  }
  if (a.algorithm == "qp-bne") {
    const BayesianGame game = BayesianGame::from_json(slurp(a.bgame_path));
    const BneAlgoResult r = qp_pure_bne_uniform(game, a.eps, a.seed, a.guess_budget);
    if (r.status == BneAlgoStatus::Ok) {
      json j = json::parse(r.profile->to_json());
      j["trace"] = json::parse(r.trace.to_json());
      spit(a.out, j.dump());
      return kOk;
    }
    if (r.status == BneAlgoStatus::NoBneFound) {
      std::cerr << "no pure BNE found by the exhaustive path\n";
      return kVerifyFailed;
    }
    std::cerr << "guess budget exhausted\n";
    return kBudgetExceeded;
  }
  throw std::runtime_error("unknown solve algorithm: " + a.algorithm);
}

struct VerifyArgs {
  std::string game_path;
  std::string profile_path;
  std::string bgame_path;
  std::string bprofile_path;
  double eps = 0.0;
  std::string out;
};

int run_verify(const VerifyArgs& a) {
  using nlohmann::json;
  if (!a.bgame_path.empty()) {
    const BayesianGame game = BayesianGame::from_json(slurp(a.bgame_path));
    const PureBayesProfile profile = PureBayesProfile::from_json(slurp(a.bprofile_path));
    const BneCertificate cert = bne_regret(game, profile);
    spit(a.out, cert.to_json());
    return cert.max_regret <= a.eps + kEqTolerance ? kOk : kVerifyFailed;
  }
  const BimatrixGame game = BimatrixGame::from_json(slurp(a.game_path));
  const MixedProfile profile = MixedProfile::from_json(slurp(a.profile_path));
  const RegretCertificate cert = regret(game, profile);
  json j;
  j["regret_row"] = cert.regret_row;
  j["regret_col"] = cert.regret_col;
  j["value"] = cert.value;
  j["payoff_row"] = cert.payoff_row;
  j["payoff_col"] = cert.payoff_col;
  spit(a.out, j.dump());
  return is_eps_equilibrium(game, profile, a.eps) ? kOk : kVerifyFailed;
}

struct RecoverArgs {
  std::string graph_path;
  std::string artifact_path;
  std::string profile_path;
  double s = 0.01;
  double t = 0.06;
  int target_size = 0;
  double density_threshold = 5.0 / 9.0;
  int clique_size = 0;
  std::string out;
};

int run_recover(const RecoverArgs& a) {
  using nlohmann::json;
  const PlantedGraph graph = PlantedGraph::from_json(slurp(a.graph_path));
  const ReductionArtifact art = load_artifact(slurp(a.artifact_path));
  const MixedProfile profile = MixedProfile::from_json(slurp(a.profile_path));

  ExtractionParams ep;
  ep.s = a.s;
  ep.t = a.t;
  ep.clique_size = a.clique_size > 0 ? a.clique_size : a.target_size;
  ep.target_size = a.target_size > 0
                       ? a.target_size
                       : ExtractionParams::default_target_size(graph.n(), art.params.c2);
  if (ep.clique_size <= 0) ep.clique_size = ep.target_size;
  ep.density_threshold = a.density_threshold;

  const PipelineOutcome out = soundness_pipeline(graph, art, profile, ep);
  json j;
  j["status"] = to_string(out.status);
  j["extraction"] = json::parse(out.extraction.report.to_json());
  j["detail"] = out.extraction.detail;
  j["clique"] = out.clique ? json(*out.clique) : json(nullptr);
  spit(a.out, j.dump());
  return out.status == PipelineStatus::Recovered ? kOk : kRecoveryFailed;
}

struct ExperimentArgs {
  std::string config_path;
  std::string replay_path;
  int replay_index = 0;
  std::string experiment = "completeness-eps";
  ExperimentConfig cfg;
  std::string format = "json";
  std::string out;
  bool have_config = false;
};

int run_experiment_cmd(ExperimentArgs& a) {
  if (!a.replay_path.empty()) {
    const bool same = replay_trial(slurp(a.replay_path), a.replay_index);
    std::cerr << (same ? "replay identical\n" : "replay mismatch\n");
    return same ? kOk : kVerifyFailed;
  }
  ExperimentConfig cfg;
  if (a.have_config) {
    cfg = ExperimentConfig::from_json(slurp(a.config_path));
  } else {
    cfg = a.cfg;
    cfg.experiment = experiment_id_from_string(a.experiment);
  }
  cfg.validate();
  const ExperimentResult result = run_experiment(cfg);
  const std::string path = !a.out.empty()          ? a.out
                           : !cfg.out.empty()      ? cfg.out
                                                   : default_output_path(cfg);
  if (a.format == "json") {
    spit(path, result.to_json());
  } else if (a.format == "csv") {
    spit(path, result.to_csv());
  } else {
    throw std::runtime_error("unknown format: " + a.format);
  }
  std::cerr << "summary: " << result.summary_json << "\n";
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"game-theory workbench: clique reductions, approximate equilibria, "
               "Bayesian games and seeded experiments"};
  app.require_subcommand(1);

  GenGraphArgs gen;
  CLI::App* c_gen = app.add_subcommand("gen-graph", "sample a (planted-clique) graph");
  c_gen->add_option("--n", gen.n, "vertex count");
  c_gen->add_option("--k", gen.k, "planted clique size (0: plain G(n,1/2))");
  c_gen->add_option("--seed", gen.seed, "rng seed");
  c_gen->add_option("--model", gen.model, "planted|octahedron|k5|circulant");
  c_gen->add_option("--out", gen.out, "output path (default stdout)");

  BuildGameArgs bld;
  CLI::App* c_bld = app.add_subcommand("build-game", "construct a reduction game");
  c_bld->add_option("--variant", bld.variant,
                    "hk|small-support|second-eq|bne-gadget|bne-lift")->required();
  c_bld->add_option("--graph", bld.graph_path, "input graph JSON");
  c_bld->add_option("--artifact", bld.artifact_path, "input artifact JSON (bne-lift)");
  c_bld->add_option("--eta", bld.eta, "parameter map knob");
  c_bld->add_option("--map", bld.map, "eps|value (hk variant)");
  c_bld->add_option("--n-big", bld.n_big, "random block rows");
  c_bld->add_option("--n1", bld.n1, "rows per B copy (small-support)");
  c_bld->add_option("--n2", bld.n2, "number of B copies (small-support)");
  c_bld->add_option("--lambda", bld.lambda, "second-eq corner payoff");
  c_bld->add_option("--num-types", bld.num_types, "types per player (bne-lift)");
  c_bld->add_option("--seed", bld.seed, "rng seed");
  c_bld->add_option("--out", bld.out, "artifact/bayesian-game output");
  c_bld->add_option("--emit-game", bld.emit_game, "also write the full game JSON");

  SolveArgs sol;
  CLI::App* c_sol = app.add_subcommand("solve", "run an equilibrium algorithm");
  c_sol->add_option("--algorithm", sol.algorithm,
                    "dmp|optimal-half|small-support-search|qp-bne|brute-bne")->required();
  c_sol->add_option("--game", sol.game_path, "bimatrix game JSON");
  c_sol->add_option("--bgame", sol.bgame_path, "bayesian game JSON");
  c_sol->add_option("--start-row", sol.start_row, "dmp start row");
  c_sol->add_option("--eps", sol.eps, "equilibrium slack");
  c_sol->add_option("--k", sol.k, "support bound");
  c_sol->add_option("--value-floor", sol.value_floor, "minimum value (negative: none)");
  c_sol->add_option("--budget", sol.budget, "profile budget");
  c_sol->add_option("--guess-budget", sol.guess_budget, "qp-bne guess budget");
  c_sol->add_option("--seed", sol.seed, "rng seed");
  c_sol->add_option("--out", sol.out, "profile output");

  VerifyArgs ver;
  CLI::App* c_ver = app.add_subcommand("verify", "check an eps-equilibrium claim");
  c_ver->add_option("--game", ver.game_path, "bimatrix game JSON");
  c_ver->add_option("--profile", ver.profile_path, "profile JSON");
  c_ver->add_option("--bgame", ver.bgame_path, "bayesian game JSON");
  c_ver->add_option("--bprofile", ver.bprofile_path, "pure bayes profile JSON");
  c_ver->add_option("--eps", ver.eps, "slack to verify against");
  c_ver->add_option("--out", ver.out, "certificate output");

  RecoverArgs rec;
  CLI::App* c_rec = app.add_subcommand("recover", "extract and reconstruct a clique");
  c_rec->add_option("--graph", rec.graph_path, "graph JSON")->required();
  c_rec->add_option("--artifact", rec.artifact_path, "artifact JSON")->required();
  c_rec->add_option("--profile", rec.profile_path, "profile JSON")->required();
  c_rec->add_option("--s", rec.s, "conditional-value slack");
  c_rec->add_option("--t", rec.t, "mass slack");
  c_rec->add_option("--target-size", rec.target_size, "extracted set size");
  c_rec->add_option("--density-threshold", rec.density_threshold, "default 5/9");
  c_rec->add_option("--clique-size", rec.clique_size, "required clique size");
  c_rec->add_option("--out", rec.out, "report output");

  ExperimentArgs exp;
  CLI::App* c_exp = app.add_subcommand("experiment", "run a seeded study");
  CLI::Option* opt_cfg = c_exp->add_option("--config", exp.config_path, "config JSON path");
  c_exp->add_option("--replay", exp.replay_path, "replay a recorded experiment output");
  c_exp->add_option("--trial", exp.replay_index, "trial index for --replay");
  c_exp->add_option("--experiment", exp.experiment, "experiment id");
  c_exp->add_option("--n", exp.cfg.n, "graph size");
  c_exp->add_option("--k", exp.cfg.k, "planted clique size");
  c_exp->add_option("--n-big", exp.cfg.n_big, "random block rows");
  c_exp->add_option("--n1", exp.cfg.n1, "rows per B copy");
  c_exp->add_option("--n2", exp.cfg.n2, "B copies");
  c_exp->add_option("--eta", exp.cfg.eta, "parameter knob");
  c_exp->add_option("--eps", exp.cfg.eps, "equilibrium slack");
  c_exp->add_option("--trials", exp.cfg.trials, "trial count");
  c_exp->add_option("--seed", exp.cfg.seed, "master seed");
  c_exp->add_option("--leak", exp.cfg.leak, "perturbation mass");
  c_exp->add_option("--subset-size", exp.cfg.subset_size, "profile support if k = 0");
  c_exp->add_option("--lambda", exp.cfg.lambda, "second-eq corner payoff");
  c_exp->add_option("--gadget", exp.cfg.gadget, "octahedron|k5|circulant");
  c_exp->add_option("--num-types", exp.cfg.num_types, "bne-uniform types");
  c_exp->add_option("--guess-budget", exp.cfg.guess_budget, "qp-bne guess budget");
  c_exp->add_option("--support-bound", exp.cfg.support_bound, "small-support bound");
  c_exp->add_option("--c2", exp.cfg.c2, "reconstruction constant");
  c_exp->add_option("--threads", exp.cfg.threads, "worker threads");
  c_exp->add_flag("--timing", exp.cfg.timing, "record wall times (breaks byte-reproducibility)");
  c_exp->add_option("--format", exp.format, "json|csv");
  c_exp->add_option("--out", exp.out, "output path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*c_gen) return run_gen_graph(gen);
    if (*c_bld) return run_build_game(bld);
    if (*c_sol) return run_solve(sol);
    if (*c_ver) return run_verify(ver);
    if (*c_rec) return run_recover(rec);
    if (*c_exp) {
      exp.have_config = opt_cfg->count() > 0;
      return run_experiment_cmd(exp);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
