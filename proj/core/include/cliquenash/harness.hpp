#ifndef CLIQUENASH_HARNESS_HPP
#define CLIQUENASH_HARNESS_HPP

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace cliquenash {

/// Identifiers of the seeded desk-scale studies.
enum class ExperimentId {
  CompletenessEps,
  SoundnessEps,
  CompletenessValue,
  SoundnessValue,
  SecondEquilibrium,
  SmallSupport,
  BneGadget,
  BneUniform,
};

std::string to_string(ExperimentId id);
ExperimentId experiment_id_from_string(const std::string& name);

struct ExperimentConfig {
  ExperimentId experiment = ExperimentId::CompletenessEps;
  int n = 200;
  int k = 26;
  int n_big = 4000;
  int n1 = 32;
  int n2 = 4;
  double eta = 0.07;
  double eps = 0.01;
  int trials = 50;
  std::uint64_t seed = 1;
  std::string out;
  double leak = 0.05;          // J-block mass of the perturbed profile
  int subset_size = 26;        // profile support when no clique is planted
  double lambda = 0.8;
  std::string gadget = "octahedron";  // octahedron | k5 | circulant
  int num_types = 6;
  std::uint64_t guess_budget = 10000;
  int support_bound = 0;       // 0: floor(log2(total)/2)
  double c2 = 6.0;
  int threads = 1;
  bool timing = false;         // real wall times break byte-reproducibility

  std::string to_json() const;
  static ExperimentConfig from_json(const std::string& text);
  void validate() const;
};

/// One seeded trial. Fields that do not apply to an experiment are
/// serialized as explicit nulls; failures carry their cause.
struct TrialRecord {
  int trial = 0;
  std::uint64_t seed = 0;
  std::string params_json = "{}";
  std::optional<double> regret_row, regret_col, value, mass_row, mass_col;
  std::optional<std::string> extraction_outcome;
  std::optional<std::string> extraction_outcome_perturbed;
  std::optional<bool> recovered_match;
  bool success = false;
  std::optional<std::string> failure;
  std::optional<double> wall_ms;
  std::map<std::string, double> extra;

  std::string to_json() const;
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<TrialRecord> records;
  std::string summary_json = "{}";

  std::string to_json() const;
  std::string to_csv() const;
};

/// Runs config.trials seeded trials (per-trial seed: master xor trial
/// index), optionally on a small worker pool. Results are identical
/// regardless of thread count; on_record fires in trial order.
ExperimentResult run_experiment(const ExperimentConfig& config,
                                const std::function<void(const TrialRecord&)>& on_record = {});

/// Reruns one trial of a previously written experiment output and
/// compares the regenerated record. True iff identical (wall time
/// excluded).
bool replay_trial(const std::string& experiment_output_json, int trial);

/// Default output path: $CLIQUENASH_OUT_DIR (or ".") / <id>-<seed>.json.
std::string default_output_path(const ExperimentConfig& config);

}  // namespace cliquenash

#endif
