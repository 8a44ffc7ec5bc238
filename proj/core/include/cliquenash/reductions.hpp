#ifndef CLIQUENASH_REDUCTIONS_HPP
#define CLIQUENASH_REDUCTIONS_HPP

#include <cstdint>
#include <map>
#include <string>

#include "cliquenash/game.hpp"
#include "cliquenash/graph.hpp"

namespace cliquenash {

/// Knobs and derived constants of the graph-to-game reductions. Desk
/// runs override the astronomically large asymptotic block sizes with
/// explicit n_big / n1 / n2; the exact formula values stay available
/// via asymptotic_block_size() and asymptotic_copy_count_log10().
struct ReductionParams {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
  double lambda_ = 0.0;
  double c2 = 6.0;  // reconstruction constant, configurable
  int n_big = 0;
  int n1 = 0;
  int n2 = 0;
  double eps = 0.0;
  double eta = 0.0;
  double delta = 0.0;
  double s = 0.0;
  double t = 0.0;
  std::map<std::string, std::string> metadata;

  std::string to_json() const;
  static ReductionParams from_json(const std::string& text);
};

/// Parameter map for the hardness of (1/2 - eta)-equilibria with
/// near-maximal value: t = 4 eta / 7, alpha = 1/2 + t,
/// beta = gamma = 1/3, delta = t^2.
ReductionParams params_eps_hardness(double eta);

/// Parameter map for value distinguishing: eps = (eta/5)^2,
/// alpha = 1 - eta, beta = alpha - eps, gamma = 4 sqrt(eps). Flags
/// eta >= 1/4 in metadata (the analysis needs alpha > 3/4).
ReductionParams params_value_hardness(double eta);

/// Parameter map for the (1/4 - eta) small-support variant. The source
/// analysis only says the parameters follow by modification; these
/// defaults re-solve its inequality chain with the incentive target
/// 1/4 - eta, giving beta - alpha = 1/4 - eta - eta^2/8. Derivation
/// recorded in metadata.
ReductionParams params_small_support_quarter(double eta);

/// Asymptotic block size N = n^((c2+1) ln(1/beta)); returned as a
/// double because it overflows any integer for honest constants.
double asymptotic_block_size(int n, double beta, double c2);

/// Asymptotic copy count for the small-support construction, as a
/// base-10 logarithm: N2 = n^c' with (eta^2/8)^2 c' = 4c and
/// c = (c2+1) ln(1/beta). The value itself overflows doubles for every
/// admissible eta, which is the point of the desk-scale overrides.
double asymptotic_copy_count_log10(int n, double beta, double c2, double eta);

/// Planted clique size C log2 n, rounded down.
int clique_size(int n, double c);

/// Index bookkeeping for a reduction game: which strategies belong to
/// the adjacency block, the random block(s), and the optional extra
/// strategy appended by the second-equilibrium construction.
struct BlockLayout {
  std::string kind;  // "hk", "small-support", "second-eq"
  int n = 0;         // adjacency block size
  int n1 = 0;        // rows per B copy (small-support only)
  int n2 = 0;        // number of B copies (small-support only)
  int total = 0;     // strategies per side
  bool has_extra = false;  // trailing strategy of the second-eq game

  std::vector<int> a_block_indices() const;
  std::vector<int> tail_indices() const;  // everything past the A block

  std::string to_json() const;
  static BlockLayout from_json(const std::string& text);
};

/// A reduction game with its provenance: source graph, parameters,
/// layout and the seed that generated the random blocks. Replayable:
/// serialization stores everything but the matrices.
struct ReductionArtifact {
  BimatrixGame game;
  BlockLayout layout;
  ReductionParams params;
  PlantedGraph source;
  std::uint64_t seed = 0;

  /// JSON without the payoff matrices; load_artifact rebuilds them.
  std::string to_json() const;
};

ReductionArtifact load_artifact(const std::string& text);

/// The basic hidden-clique game:
///   M_row = [ alpha A   0       ]   M_col = [ alpha A   B^T     ]
///           [ B         gamma J ]           [ 0         gamma J ]
/// with B an n_big x n i.i.d. Bernoulli(beta) matrix.
ReductionArtifact build_hk_game(const PlantedGraph& graph, double alpha, double beta,
                                double gamma, int n_big, std::uint64_t seed);

/// Convenience overload wiring a parameter map through.
ReductionArtifact build_hk_game(const PlantedGraph& graph, const ReductionParams& params,
                                std::uint64_t seed);

/// Appends one strategy per side to a base game: the new row pays the
/// row player lambda against old columns and 1 at the corner, and
/// symmetrically for the column player. (e_last, e_last) is an exact
/// pure equilibrium by construction.
ReductionArtifact build_second_equilibrium_game(const ReductionArtifact& base,
                                                double lambda_ = 0.8);

/// The small-support game: n2 stacked copies of one Bernoulli(beta)
/// block B for the row player (B^T side by side for the column
/// player), and complementary uniform 0/1 blocks R and J - R in the
/// bottom-right corner. alpha = 1/2 + eta/8,
/// beta = 1 - (7/8) eta - eta^2/8.
ReductionArtifact build_small_support_game(const PlantedGraph& graph, double eta,
                                           int n1, int n2, std::uint64_t seed);

}  // namespace cliquenash

#endif
