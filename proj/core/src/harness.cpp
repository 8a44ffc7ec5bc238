#include "cliquenash/harness.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdlib>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <json.hpp>

#include "cliquenash/approx_nash.hpp"
#include "cliquenash/bayesian.hpp"
#include "cliquenash/game.hpp"
#include "cliquenash/recovery.hpp"
#include "cliquenash/reductions.hpp"
#include "cliquenash/rng.hpp"

namespace cliquenash {

using nlohmann::json;

std::string to_string(ExperimentId id) {
  switch (id) {
    case ExperimentId::CompletenessEps: return "completeness-eps";
    case ExperimentId::SoundnessEps: return "soundness-eps";
    case ExperimentId::CompletenessValue: return "completeness-value";
    case ExperimentId::SoundnessValue: return "soundness-value";
    case ExperimentId::SecondEquilibrium: return "second-equilibrium";
    case ExperimentId::SmallSupport: return "small-support";
    case ExperimentId::BneGadget: return "bne-gadget";
    case ExperimentId::BneUniform: return "bne-uniform";
  }
  return "unknown";
}

ExperimentId experiment_id_from_string(const std::string& name) {
  for (ExperimentId id :
       {ExperimentId::CompletenessEps, ExperimentId::SoundnessEps,
        ExperimentId::CompletenessValue, ExperimentId::SoundnessValue,
        ExperimentId::SecondEquilibrium, ExperimentId::SmallSupport,
        ExperimentId::BneGadget, ExperimentId::BneUniform}) {
    if (to_string(id) == name) return id;
  }
  throw std::invalid_argument("unknown experiment id: " + name);
}

std::string ExperimentConfig::to_json() const {
  json j;
  j["experiment"] = cliquenash::to_string(experiment);
  j["n"] = n;
  j["k"] = k;
  j["n_big"] = n_big;
  j["n1"] = n1;
  j["n2"] = n2;
  j["eta"] = eta;
  j["eps"] = eps;
  j["trials"] = trials;
  j["seed"] = seed;
  j["out"] = out;
  j["leak"] = leak;
  j["subset_size"] = subset_size;
  j["lambda"] = lambda;
  j["gadget"] = gadget;
  j["num_types"] = num_types;
  j["guess_budget"] = guess_budget;
  j["support_bound"] = support_bound;
  j["c2"] = c2;
  j["threads"] = threads;
  j["timing"] = timing;
  return j.dump();
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  json j = json::parse(text);
  ExperimentConfig c;
  c.experiment = experiment_id_from_string(j.at("experiment").get<std::string>());
  auto get = [&j](const char* key, auto fallback) {
    using T = decltype(fallback);
    return j.contains(key) ? j[key].get<T>() : fallback;
  };
  c.n = get("n", c.n);
  c.k = get("k", c.k);
  c.n_big = get("n_big", c.n_big);
  c.n1 = get("n1", c.n1);
  c.n2 = get("n2", c.n2);
  c.eta = get("eta", c.eta);
  c.eps = get("eps", c.eps);
  c.trials = get("trials", c.trials);
  c.seed = get("seed", c.seed);
  c.out = get("out", c.out);
  c.leak = get("leak", c.leak);
  c.subset_size = get("subset_size", c.subset_size);
  c.lambda = get("lambda", c.lambda);
  c.gadget = get("gadget", c.gadget);
  c.num_types = get("num_types", c.num_types);
  c.guess_budget = get("guess_budget", c.guess_budget);
  c.support_bound = get("support_bound", c.support_bound);
  c.c2 = get("c2", c.c2);
  c.threads = get("threads", c.threads);
  c.timing = get("timing", c.timing);
  c.validate();
  return c;
}

void ExperimentConfig::validate() const {
  if (trials < 1) throw std::invalid_argument("config: trials must be >= 1");
  if (n < 2) throw std::invalid_argument("config: n must be >= 2");
  if (k < 0 || k > n) throw std::invalid_argument("config: need 0 <= k <= n");
  if (threads < 1) throw std::invalid_argument("config: threads must be >= 1");
  if (eps < 0.0) throw std::invalid_argument("config: eps must be >= 0");
  if (!(leak >= 0.0 && leak < 1.0)) throw std::invalid_argument("config: leak in [0,1)");
}

namespace {

json optional_to_json(const std::optional<double>& v) {
  return v ? json(*v) : json(nullptr);
}

json optional_str_to_json(const std::optional<std::string>& v) {
  return v ? json(*v) : json(nullptr);
}

}  // namespace

std::string TrialRecord::to_json() const {
  json j;
  j["trial"] = trial;
  j["seed"] = seed;
  j["params"] = json::parse(params_json);
  j["regret_row"] = optional_to_json(regret_row);
  j["regret_col"] = optional_to_json(regret_col);
  j["value"] = optional_to_json(value);
  j["mass_row"] = optional_to_json(mass_row);
  j["mass_col"] = optional_to_json(mass_col);
  j["extraction_outcome"] = optional_str_to_json(extraction_outcome);
  j["extraction_outcome_perturbed"] = optional_str_to_json(extraction_outcome_perturbed);
  j["recovered_match"] = recovered_match ? json(*recovered_match) : json(nullptr);
  j["success"] = success;
  j["failure"] = optional_str_to_json(failure);
  j["wall_ms"] = optional_to_json(wall_ms);
  j["extra"] = extra;
  return j.dump();
}

std::string ExperimentResult::to_json() const {
  json j;
  j["config"] = json::parse(config.to_json());
  json trials = json::array();
  for (const TrialRecord& r : records) trials.push_back(json::parse(r.to_json()));
  j["trials"] = std::move(trials);
  j["summary"] = json::parse(summary_json);
  return j.dump(2);
}

std::string ExperimentResult::to_csv() const {
  std::ostringstream os;
  os << "trial,seed,experiment,success,regret_row,regret_col,value,mass_row,"
        "mass_col,extraction_outcome,extraction_outcome_perturbed,recovered_match,"
        "failure,wall_ms\n";
  auto num = [&os](const std::optional<double>& v) {
    if (v) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", *v);
      os << buf;
    }
    os << ",";
  };
  auto str = [&os](const std::optional<std::string>& v) {
    if (v) os << *v;
    os << ",";
  };
  for (const TrialRecord& r : records) {
    os << r.trial << "," << r.seed << "," << cliquenash::to_string(config.experiment)
       << "," << (r.success ? 1 : 0) << ",";
    num(r.regret_row);
    num(r.regret_col);
    num(r.value);
    num(r.mass_row);
    num(r.mass_col);
    str(r.extraction_outcome);
    str(r.extraction_outcome_perturbed);
    if (r.recovered_match) os << (*r.recovered_match ? 1 : 0);
    os << ",";
    str(r.failure);
    if (r.wall_ms) {
      char buf[32];
      std::snprintf(buf, sizeof(buf), "%.17g", *r.wall_ms);
      os << buf;
    }
    os << "\n";
  }
  return os.str();
}

namespace {

std::vector<int> profile_support_vertices(const ExperimentConfig& cfg,
                                          const PlantedGraph& graph,
                                          std::uint64_t trial_seed) {
  if (graph.planted() && !graph.planted()->empty()) return *graph.planted();
  // No planted clique: a seeded random subset stands in for the
  // claimed clique so the pipeline's negative control is exercised.
  Rng rng = Rng(trial_seed).derive(77);
  return rng.sample_subset(graph.n(), std::min(cfg.subset_size, graph.n()));
}

MixedProfile block_profile(const BlockLayout& layout, const std::vector<int>& vertices,
                           double leak) {
  std::vector<double> x(layout.total, 0.0);
  for (int v : vertices) x[v] += (1.0 - leak) / vertices.size();
  if (leak > 0.0) {
    const int tail = layout.total - layout.n;
    for (int i = layout.n; i < layout.total; ++i) x[i] += leak / tail;
  }
  return MixedProfile(x, x);
}

ExtractionParams extraction_params_for(const ExperimentConfig& cfg,
                                       const ReductionParams& params,
                                       int clique_size) {
  ExtractionParams ep;
  ep.s = params.s;
  // The mass slack must admit the deliberately leaked probability.
  ep.t = std::max(params.t, cfg.leak + 0.01);
  ep.target_size = std::min(
      clique_size, ExtractionParams::default_target_size(cfg.n, cfg.c2));
  ep.clique_size = clique_size;
  return ep;
}

void run_completeness(const ExperimentConfig& cfg, std::uint64_t trial_seed,
                      const ReductionParams& map, TrialRecord& rec) {
  const PlantedGraph graph = sample_planted_clique(cfg.n, cfg.k, trial_seed);
  ReductionParams params = map;
  params.n_big = cfg.n_big;
  params.c2 = cfg.c2;
  const ReductionArtifact art = build_hk_game(graph, params, trial_seed);
  rec.params_json = params.to_json();

  const std::vector<int> support = profile_support_vertices(cfg, graph, trial_seed);
  const MixedProfile profile = block_profile(art.layout, support, 0.0);
  const RegretCertificate cert = regret(art.game, profile);
  rec.regret_row = cert.regret_row;
  rec.regret_col = cert.regret_col;
  rec.value = cert.value;
  rec.mass_row = mass_on(profile.x(), art.layout.a_block_indices());
  rec.mass_col = mass_on(profile.y(), art.layout.a_block_indices());
  rec.success = std::max(cert.regret_row, cert.regret_col) <= cfg.eps + kEqTolerance;
  if (!rec.success) rec.failure = "profile is not an eps-equilibrium at desk scale";
}

void run_soundness(const ExperimentConfig& cfg, std::uint64_t trial_seed,
                   const ReductionParams& map, TrialRecord& rec) {
  const PlantedGraph graph = sample_planted_clique(cfg.n, cfg.k, trial_seed);
  ReductionParams params = map;
  params.n_big = cfg.n_big;
  params.c2 = cfg.c2;
  const ReductionArtifact art = build_hk_game(graph, params, trial_seed);
  rec.params_json = params.to_json();

  const std::vector<int> support = profile_support_vertices(cfg, graph, trial_seed);
  const ExtractionParams ep =
      extraction_params_for(cfg, params, static_cast<int>(support.size()));

  const MixedProfile clean = block_profile(art.layout, support, 0.0);
  const RegretCertificate cert = regret(art.game, clean);
  rec.regret_row = cert.regret_row;
  rec.regret_col = cert.regret_col;
  rec.value = cert.value;
  rec.mass_row = mass_on(clean.x(), art.layout.a_block_indices());
  rec.mass_col = mass_on(clean.y(), art.layout.a_block_indices());

  const PipelineOutcome clean_out = soundness_pipeline(graph, art, clean, ep);
  rec.extraction_outcome = to_string(clean_out.status);

  const MixedProfile leaked = block_profile(art.layout, support, cfg.leak);
  const PipelineOutcome leaked_out = soundness_pipeline(graph, art, leaked, ep);
  rec.extraction_outcome_perturbed = to_string(leaked_out.status);

  if (cfg.k > 0) {
    const bool clean_match = clean_out.clique && *clean_out.clique == *graph.planted();
    const bool leaked_match = leaked_out.clique && *leaked_out.clique == *graph.planted();
    rec.recovered_match = clean_match && leaked_match;
    rec.success = *rec.recovered_match;
    if (!rec.success) rec.failure = "pipeline did not recover the planted clique exactly";
  } else {
    // Negative control: the pipeline must fail on G(n, 1/2).
    rec.recovered_match = false;
    rec.success = clean_out.status != PipelineStatus::Recovered &&
                  leaked_out.status != PipelineStatus::Recovered;
    if (!rec.success) rec.failure = "pipeline claimed a clique in a plain random graph";
  }
}

void run_second_equilibrium(const ExperimentConfig& cfg, std::uint64_t trial_seed,
                            TrialRecord& rec) {
  const PlantedGraph graph = sample_planted_clique(cfg.n, cfg.k, trial_seed);
  ReductionParams params = params_value_hardness(cfg.eta);
  params.n_big = cfg.n_big;
  params.c2 = cfg.c2;
  const ReductionArtifact base = build_hk_game(graph, params, trial_seed);
  const ReductionArtifact art = build_second_equilibrium_game(base, cfg.lambda);
  rec.params_json = art.params.to_json();

  const int last = art.layout.total - 1;
  const MixedProfile corner = MixedProfile::pure(last, art.layout.total, last, art.layout.total);
  const RegretCertificate cert = regret(art.game, corner);
  rec.regret_row = cert.regret_row;
  rec.regret_col = cert.regret_col;
  rec.value = cert.value;
  rec.extra["corner_regret_exactly_zero"] =
      (cert.regret_row == 0.0 && cert.regret_col == 0.0) ? 1.0 : 0.0;

  const std::vector<int> support = profile_support_vertices(cfg, graph, trial_seed);
  const MixedProfile clique_profile = block_profile(art.layout, support, 0.0);
  rec.extra["tv_row"] = tv_distance(clique_profile.x(), corner.x());
  rec.extra["tv_col"] = tv_distance(clique_profile.y(), corner.y());
  const RegretCertificate clique_cert = regret(art.game, clique_profile);
  rec.extra["clique_profile_regret"] =
      std::max(clique_cert.regret_row, clique_cert.regret_col);
  rec.mass_row = mass_on(clique_profile.x(), art.layout.a_block_indices());
  rec.mass_col = mass_on(clique_profile.y(), art.layout.a_block_indices());

  rec.success = rec.extra["corner_regret_exactly_zero"] == 1.0 &&
                std::abs(rec.extra["tv_row"] - 1.0) <= 1e-12 &&
                std::abs(rec.extra["tv_col"] - 1.0) <= 1e-12;
  if (!rec.success) rec.failure = "corner equilibrium or tv-distance assertion failed";
}

void run_small_support(const ExperimentConfig& cfg, std::uint64_t trial_seed,
                       TrialRecord& rec) {
  const PlantedGraph graph = sample_planted_clique(cfg.n, cfg.k, trial_seed);
  const ReductionArtifact art =
      build_small_support_game(graph, cfg.eta, cfg.n1, cfg.n2, trial_seed);
  rec.params_json = art.params.to_json();

  const int bound = cfg.support_bound > 0
                        ? cfg.support_bound
                        : static_cast<int>(std::floor(std::log2(art.layout.total) / 2.0));
  std::vector<int> support = profile_support_vertices(cfg, graph, trial_seed);
  if (static_cast<int>(support.size()) > bound) support.resize(bound);
  rec.extra["support_bound"] = bound;

  const MixedProfile profile = block_profile(art.layout, support, 0.0);
  const RegretCertificate cert = regret(art.game, profile);
  rec.regret_row = cert.regret_row;
  rec.regret_col = cert.regret_col;
  rec.value = cert.value;
  rec.mass_row = mass_on(profile.x(), art.layout.a_block_indices());
  rec.mass_col = mass_on(profile.y(), art.layout.a_block_indices());

  const double target = 0.5 - cfg.eta;
  rec.extra["is_target_equilibrium"] =
      std::max(cert.regret_row, cert.regret_col) <= target + kEqTolerance ? 1.0 : 0.0;

  ExtractionParams ep;
  ep.s = art.params.s;
  ep.t = art.params.t;
  ep.target_size = std::min<int>(support.size(),
                                 ExtractionParams::default_target_size(cfg.n, cfg.c2));
  ep.clique_size = static_cast<int>(support.size());
  const PipelineOutcome out = soundness_pipeline(graph, art, profile, ep);
  rec.extraction_outcome = to_string(out.status);
  rec.recovered_match = out.clique.has_value();
  rec.success = rec.extra["is_target_equilibrium"] == 1.0;
  if (!rec.success) rec.failure = "clique profile exceeded the target regret";
}

void run_bne_gadget(const ExperimentConfig& cfg, std::uint64_t trial_seed,
                    TrialRecord& rec) {
  const PlantedGraph graph = cfg.gadget == "k5"          ? complete_graph(5)
                             : cfg.gadget == "circulant" ? circulant_4regular(cfg.n)
                                                         : octahedron();
  const BayesianGame game = build_coloring_hardness_game(graph);
  rec.params_json = std::string("{\"gadget\":\"") + cfg.gadget + "\"}";

  Rng rng = Rng(trial_seed).derive(5);
  PureBayesProfile profile;
  profile.s_row.resize(game.k_row());
  profile.s_col.resize(game.k_col());
  for (int& a : profile.s_row) a = static_cast<int>(rng.next_below(game.n_row()));
  for (int& a : profile.s_col) a = static_cast<int>(rng.next_below(game.n_col()));

  const BneCertificate cert = bne_regret(game, profile);
  rec.regret_row = *std::max_element(cert.regret_row.begin(), cert.regret_row.end());
  rec.regret_col = *std::max_element(cert.regret_col.begin(), cert.regret_col.end());

  const auto [d_row, d_col] = coin_flip_deltas(game, profile);
  double sum = 0.0;
  bool quantized = true;
  for (double d : d_row) {
    sum += d;
    if (std::abs(d - 0.004 * std::round(d / 0.004)) > kEqTolerance) quantized = false;
  }
  for (double d : d_col) {
    sum += d;
    if (std::abs(d - 0.004 * std::round(d / 0.004)) > kEqTolerance) quantized = false;
  }
  rec.extra["cancellation_sum"] = sum;
  rec.extra["quantized"] = quantized ? 1.0 : 0.0;
  rec.success = std::abs(sum) <= kEqTolerance && quantized;
  if (!rec.success) rec.failure = "gadget cancellation or quantization identity failed";
}

void run_bne_uniform(const ExperimentConfig& cfg, std::uint64_t trial_seed,
                     TrialRecord& rec) {
  PureBayesProfile planted;
  const BayesianGame game =
      build_planted_bne_game(cfg.num_types, 6, 0.2, trial_seed, &planted);
  rec.params_json = "{\"margin\":0.2,\"actions\":6}";

  const BneAlgoResult res =
      qp_pure_bne_uniform(game, cfg.eps, trial_seed, cfg.guess_budget);
  rec.extra["attempts"] = res.trace.attempts;
  rec.extra["sampling_path"] = res.trace.sampling_path ? 1.0 : 0.0;
  if (res.status == BneAlgoStatus::Ok) {
    const BneCertificate cert = bne_regret(game, *res.profile);
    rec.regret_row = *std::max_element(cert.regret_row.begin(), cert.regret_row.end());
    rec.regret_col = *std::max_element(cert.regret_col.begin(), cert.regret_col.end());
    rec.recovered_match =
        res.profile->s_row == planted.s_row && res.profile->s_col == planted.s_col;
    rec.success = cert.max_regret <= cfg.eps + kEqTolerance;
  } else {
    rec.success = false;
    rec.failure = "qp algorithm failed to return a verified profile";
  }
}

TrialRecord run_trial(const ExperimentConfig& cfg, int trial) {
  TrialRecord rec;
  rec.trial = trial;
  rec.seed = cfg.seed ^ static_cast<std::uint64_t>(trial);
  const auto start = std::chrono::steady_clock::now();

  switch (cfg.experiment) {
    case ExperimentId::CompletenessEps:
      run_completeness(cfg, rec.seed, params_eps_hardness(cfg.eta), rec);
      break;
    case ExperimentId::SoundnessEps:
      run_soundness(cfg, rec.seed, params_eps_hardness(cfg.eta), rec);
      break;
    case ExperimentId::CompletenessValue:
      run_completeness(cfg, rec.seed, params_value_hardness(cfg.eta), rec);
      break;
    case ExperimentId::SoundnessValue:
      run_soundness(cfg, rec.seed, params_value_hardness(cfg.eta), rec);
      break;
    case ExperimentId::SecondEquilibrium:
      run_second_equilibrium(cfg, rec.seed, rec);
      break;
    case ExperimentId::SmallSupport:
      run_small_support(cfg, rec.seed, rec);
      break;
    case ExperimentId::BneGadget:
      run_bne_gadget(cfg, rec.seed, rec);
      break;
    case ExperimentId::BneUniform:
      run_bne_uniform(cfg, rec.seed, rec);
      break;
  }

  if (cfg.timing) {
    rec.wall_ms = std::chrono::duration<double, std::milli>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  }
  return rec;
}

}  // namespace

ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::function<void(const TrialRecord&)>& on_record) {
  config.validate();
  ExperimentResult result;
  result.config = config;
  result.records.resize(config.trials);

  if (config.threads <= 1) {
    for (int t = 0; t < config.trials; ++t) {
      result.records[t] = run_trial(config, t);
      if (on_record) on_record(result.records[t]);
    }
  } else {
    // Worker pool over trials; the sink flushes the completed prefix
    // in trial order as it grows, so downstream writers see records
    // incrementally no matter which worker finished first.
    std::atomic<int> next{0};
    std::mutex mu;
    std::condition_variable cv;
    std::vector<char> done(config.trials, 0);
    std::vector<std::thread> pool;
    const int workers = std::min(config.threads, config.trials);
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&]() {
        while (true) {
          const int t = next.fetch_add(1);
          if (t >= config.trials) break;
          TrialRecord rec = run_trial(config, t);
          {
            std::lock_guard<std::mutex> lock(mu);
            result.records[t] = std::move(rec);
            done[t] = 1;
          }
          cv.notify_one();
        }
      });
    }
    {
      std::unique_lock<std::mutex> lock(mu);
      for (int flushed = 0; flushed < config.trials; ++flushed) {
        cv.wait(lock, [&] { return done[flushed] != 0; });
        if (on_record) on_record(result.records[flushed]);
      }
    }
    for (std::thread& th : pool) th.join();
  }

  int successes = 0;
  double sum_rr = 0.0, sum_rc = 0.0;
  int regret_count = 0;
  for (const TrialRecord& r : result.records) {
    if (r.success) ++successes;
    if (r.regret_row && r.regret_col) {
      sum_rr += *r.regret_row;
      sum_rc += *r.regret_col;
      ++regret_count;
    }
  }
  json summary;
  summary["experiment"] = to_string(config.experiment);
  summary["trials"] = config.trials;
  summary["success_count"] = successes;
  summary["success_frequency"] = static_cast<double>(successes) / config.trials;
  summary["mean_regret_row"] =
      regret_count ? json(sum_rr / regret_count) : json(nullptr);
  summary["mean_regret_col"] =
      regret_count ? json(sum_rc / regret_count) : json(nullptr);
  result.summary_json = summary.dump();
  return result;
}

bool replay_trial(const std::string& experiment_output_json, int trial) {
  json j = json::parse(experiment_output_json);
  ExperimentConfig config = ExperimentConfig::from_json(j.at("config").dump());
  if (trial < 0 || trial >= static_cast<int>(j.at("trials").size())) {
    throw std::invalid_argument("replay: trial index out of range");
  }
  const json original = j["trials"][trial];

  ExperimentConfig single = config;
  single.timing = false;
  json fresh = json::parse(run_trial(single, trial).to_json());

  json expected = original;
  expected["wall_ms"] = nullptr;  // timing never participates in replay
  return fresh == expected;
}

std::string default_output_path(const ExperimentConfig& config) {
  const char* dir = std::getenv("CLIQUENASH_OUT_DIR");
  const std::string base = dir && *dir ? dir : ".";
  return base + "/" + to_string(config.experiment) + "-" +
         std::to_string(config.seed) + ".json";
}

}  // namespace cliquenash
