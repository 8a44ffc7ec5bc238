#ifndef CLIQUENASH_RECOVERY_HPP
#define CLIQUENASH_RECOVERY_HPP

#include <optional>
#include <string>
#include <vector>

#include "cliquenash/game.hpp"
#include "cliquenash/graph.hpp"
#include "cliquenash/reductions.hpp"

namespace cliquenash {

/// Thresholds of the dense-subgraph extraction. s bounds the slack in
/// the conditional value, t the probability mass allowed outside the
/// adjacency block; both sets are truncated to target_size. The
/// clique_size is what the downstream reconstruction must certify.
struct ExtractionParams {
  double s = 0.0;
  double t = 0.0;
  int target_size = 0;
  double density_threshold = 5.0 / 9.0;
  int clique_size = 0;

  /// The extraction analysis needs 1 - t - 3 sqrt(s)/2 >= alpha + eps.
  bool extraction_condition_holds(double alpha, double eps) const;

  /// target_size = floor(c2 log2 n).
  static int default_target_size(int n, double c2);
};

struct ExtractionReport {
  std::vector<int> s1;
  std::vector<int> s2;
  double achieved_density = 0.0;
  double mass_row = 0.0;
  double mass_col = 0.0;
  double conditional_value = 0.0;

  std::string to_json() const;
};

enum class ExtractionStatus { Success, PreconditionViolated, Failed };

struct ExtractionOutcome {
  ExtractionStatus status = ExtractionStatus::Failed;
  ExtractionReport report;
  std::string detail;  // which bound failed, empty on success
};

/// Thresholding step of the soundness analysis: restrict the profile
/// to the adjacency block, keep rows with near-maximal payoff against
/// the restricted column strategy, then columns dense against those
/// rows. Truncation to target_size keeps the highest-scoring vertices
/// (ties to the lowest index) so the sets stay deterministic.
ExtractionOutcome extract_dense_subgraph(const PlantedGraph& graph,
                                         const ReductionArtifact& artifact,
                                         const MixedProfile& profile,
                                         const ExtractionParams& params);

/// True iff all pairs in S are adjacent.
bool verify_clique(const PlantedGraph& graph, const std::vector<int>& s);

/// Clique recovery from a dense seed pair: score vertices by their
/// adjacency into S1 union S2, keep scores >= 3/4, greedily grow a
/// clique in descending score order and verify it. Returns a clique of
/// size >= k or nothing; never an unverified set.
std::optional<std::vector<int>> reconstruct_clique(const PlantedGraph& graph,
                                                   const std::vector<int>& s1,
                                                   const std::vector<int>& s2, int k);

enum class PipelineStatus {
  Recovered,
  PreconditionViolated,
  ExtractionFailed,
  ReconstructionFailed
};

std::string to_string(PipelineStatus status);

struct PipelineOutcome {
  PipelineStatus status = PipelineStatus::ReconstructionFailed;
  std::optional<std::vector<int>> clique;
  ExtractionOutcome extraction;
};

/// extract_dense_subgraph followed by reconstruct_clique, with
/// structured failure causes.
PipelineOutcome soundness_pipeline(const PlantedGraph& graph,
                                   const ReductionArtifact& artifact,
                                   const MixedProfile& profile,
                                   const ExtractionParams& params);

}  // namespace cliquenash

#endif
