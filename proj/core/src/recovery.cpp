#include "cliquenash/recovery.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

namespace cliquenash {

using nlohmann::json;

bool ExtractionParams::extraction_condition_holds(double alpha, double eps) const {
  return 1.0 - t - 1.5 * std::sqrt(s) >= alpha + eps;
}

int ExtractionParams::default_target_size(int n, double c2) {
  return static_cast<int>(std::floor(c2 * std::log2(static_cast<double>(n))));
}

std::string ExtractionReport::to_json() const {
  json j;
  j["s1"] = s1;
  j["s2"] = s2;
  j["achieved_density"] = achieved_density;
  j["mass_row"] = mass_row;
  j["mass_col"] = mass_col;
  j["conditional_value"] = conditional_value;
  return j.dump();
}

namespace {

// Keep the target_size highest-scoring vertices; ties resolve to the
// lower index. A plain lowest-index cut would let marginal vertices
// displace top ones at desk scale, so the cut follows the statistic
// that defined the set.
std::vector<int> truncate_by_score(const std::vector<int>& candidates,
                                   const std::vector<double>& score, int target_size) {
  std::vector<int> picked = candidates;
  std::stable_sort(picked.begin(), picked.end(), [&](int a, int b) {
    if (score[a] != score[b]) return score[a] > score[b];
    return a < b;
  });
  picked.resize(target_size);
  std::sort(picked.begin(), picked.end());
  return picked;
}

}  // namespace

ExtractionOutcome extract_dense_subgraph(const PlantedGraph& graph,
                                         const ReductionArtifact& artifact,
                                         const MixedProfile& profile,
                                         const ExtractionParams& params) {
  ExtractionOutcome out;
  const int n = artifact.layout.n;
  if (graph.n() != n) {
    throw std::invalid_argument("extract_dense_subgraph: graph does not match artifact");
  }
  if (params.target_size < 1 || params.target_size > n) {
    throw std::invalid_argument("extract_dense_subgraph: bad target_size");
  }
  const std::vector<int> a_block = artifact.layout.a_block_indices();

  const double p_mass = mass_on(profile.x(), a_block);
  const double q_mass = mass_on(profile.y(), a_block);
  out.report.mass_row = p_mass;
  out.report.mass_col = q_mass;
  if (p_mass < 1.0 - params.t - kEqTolerance) {
    out.status = ExtractionStatus::PreconditionViolated;
    out.detail = "row mass on A-block below 1 - t";
    return out;
  }
  if (q_mass < 1.0 - params.t - kEqTolerance) {
    out.status = ExtractionStatus::PreconditionViolated;
    out.detail = "column mass on A-block below 1 - t";
    return out;
  }

  const std::vector<double> x_tilde = restrict_normalize(profile.x(), a_block);
  const std::vector<double> y_tilde = restrict_normalize(profile.y(), a_block);

  // Conditional value on the A block; both payoff matrices equal
  // alpha * A there, so this is alpha * (x~^T A y~).
  double xay = 0.0;
  std::vector<double> a_y(n, 0.0);
  for (int i = 0; i < n; ++i) {
    double acc = 0.0;
    for (int j = 0; j < n; ++j) {
      if (graph.adjacent(i, j)) acc += y_tilde[j];
    }
    a_y[i] = acc;
    xay += x_tilde[i] * acc;
  }
  const double alpha = artifact.params.alpha;
  out.report.conditional_value = alpha * xay;
  if (alpha * xay < (1.0 - params.s) * alpha - kEqTolerance) {
    out.status = ExtractionStatus::PreconditionViolated;
    out.detail = "conditional value on A-block below (1 - s) alpha";
    return out;
  }

  // S1': rows with near-maximal adjacency payoff against y~.
  const double row_threshold = 1.0 - 2.0 * std::sqrt(params.s) / 3.0;
  std::vector<int> s1_full;
  for (int i = 0; i < n; ++i) {
    if (a_y[i] >= row_threshold - 1e-12) s1_full.push_back(i);
  }
  if (static_cast<int>(s1_full.size()) < params.target_size) {
    out.status = ExtractionStatus::Failed;
    out.detail = "S1 candidate set smaller than target size";
    return out;
  }
  out.report.s1 = truncate_by_score(s1_full, a_y, params.target_size);

  // S2': columns dense against the uniform distribution on S1.
  std::vector<double> xbar_a(n, 0.0);
  for (int j = 0; j < n; ++j) {
    int hits = 0;
    for (int i : out.report.s1) {
      if (graph.adjacent(i, j)) ++hits;
    }
    xbar_a[j] = static_cast<double>(hits) / out.report.s1.size();
  }
  std::vector<int> s2_full;
  for (int j = 0; j < n; ++j) {
    if (xbar_a[j] >= params.density_threshold - 1e-12) s2_full.push_back(j);
  }
  if (static_cast<int>(s2_full.size()) < params.target_size) {
    out.status = ExtractionStatus::Failed;
    out.detail = "S2 candidate set smaller than target size";
    return out;
  }
  out.report.s2 = truncate_by_score(s2_full, xbar_a, params.target_size);

  out.report.achieved_density = graph.density(out.report.s1, out.report.s2);
  if (out.report.achieved_density < params.density_threshold - 1e-12) {
    out.status = ExtractionStatus::Failed;
    out.detail = "achieved density below threshold";
    return out;
  }
  out.status = ExtractionStatus::Success;
  return out;
}

bool verify_clique(const PlantedGraph& graph, const std::vector<int>& s) {
  return graph.is_clique(s);
}

std::optional<std::vector<int>> reconstruct_clique(const PlantedGraph& graph,
                                                   const std::vector<int>& s1,
                                                   const std::vector<int>& s2, int k) {
  if (s1.empty() || s2.empty()) return std::nullopt;

  std::vector<int> seed_union = s1;
  seed_union.insert(seed_union.end(), s2.begin(), s2.end());
  std::sort(seed_union.begin(), seed_union.end());
  seed_union.erase(std::unique(seed_union.begin(), seed_union.end()), seed_union.end());

  std::vector<std::pair<double, int>> ranked;  // (-score, vertex)
  for (int v = 0; v < graph.n(); ++v) {
    const double score =
        static_cast<double>(graph.neighbors_in(v, seed_union)) / seed_union.size();
    if (score >= 0.75) ranked.emplace_back(-score, v);
  }
  std::sort(ranked.begin(), ranked.end());

  std::vector<int> clique;
  for (auto [neg_score, v] : ranked) {
    bool compatible = true;
    for (int u : clique) {
      if (!graph.adjacent(u, v)) {
        compatible = false;
        break;
      }
    }
    if (compatible) clique.push_back(v);
  }
  std::sort(clique.begin(), clique.end());
  if (static_cast<int>(clique.size()) < k) return std::nullopt;
  if (!verify_clique(graph, clique)) return std::nullopt;
  return clique;
}

std::string to_string(PipelineStatus status) {
  switch (status) {
    case PipelineStatus::Recovered: return "recovered";
    case PipelineStatus::PreconditionViolated: return "precondition-violated";
    case PipelineStatus::ExtractionFailed: return "extraction-failed";
    case PipelineStatus::ReconstructionFailed: return "reconstruction-failed";
  }
  return "unknown";
}

PipelineOutcome soundness_pipeline(const PlantedGraph& graph,
                                   const ReductionArtifact& artifact,
                                   const MixedProfile& profile,
                                   const ExtractionParams& params) {
  PipelineOutcome out;
  out.extraction = extract_dense_subgraph(graph, artifact, profile, params);
  if (out.extraction.status == ExtractionStatus::PreconditionViolated) {
    out.status = PipelineStatus::PreconditionViolated;
    return out;
  }
  if (out.extraction.status == ExtractionStatus::Failed) {
    out.status = PipelineStatus::ExtractionFailed;
    return out;
  }
  out.clique = reconstruct_clique(graph, out.extraction.report.s1,
                                  out.extraction.report.s2, params.clique_size);
  out.status = out.clique ? PipelineStatus::Recovered : PipelineStatus::ReconstructionFailed;
  return out;
}

}  // namespace cliquenash
