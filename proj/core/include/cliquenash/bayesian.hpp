#ifndef CLIQUENASH_BAYESIAN_HPP
#define CLIQUENASH_BAYESIAN_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cliquenash/game.hpp"
#include "cliquenash/matrix.hpp"
#include "cliquenash/reductions.hpp"

namespace cliquenash {

class NotFourRegularError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Incentive threshold of the 3-coloring hardness gadget.
inline constexpr double kColoringGadgetEps = 0.004;

/// Two-player Bayesian game. Payoff tensors are flat with index order
/// (action_row, action_col, type_row, type_col), type_col fastest:
///   idx = ((a_row * n_col + a_col) * k_row + t_row) * k_col + t_col.
class BayesianGame {
 public:
  BayesianGame(int k_row, int k_col, int n_row, int n_col, Matrix type_dist,
               std::vector<double> u_row, std::vector<double> u_col);

  static BayesianGame uniform_types(int k, int n_row, int n_col,
                                    std::vector<double> u_row,
                                    std::vector<double> u_col);

  int k_row() const { return k_row_; }
  int k_col() const { return k_col_; }
  int n_row() const { return n_row_; }
  int n_col() const { return n_col_; }
  bool uniform() const { return uniform_; }
  const Matrix& type_dist() const { return type_dist_; }

  double u_row(int a_row, int a_col, int t_row, int t_col) const {
    return u_row_[index(a_row, a_col, t_row, t_col)];
  }
  double u_col(int a_row, int a_col, int t_row, int t_col) const {
    return u_col_[index(a_row, a_col, t_row, t_col)];
  }

  double marginal_row(int t_row) const { return marg_row_[t_row]; }
  double marginal_col(int t_col) const { return marg_col_[t_col]; }

  std::string to_json() const;
  static BayesianGame from_json(const std::string& text);

 private:
  std::size_t index(int a_row, int a_col, int t_row, int t_col) const {
    return ((static_cast<std::size_t>(a_row) * n_col_ + a_col) * k_row_ + t_row) *
               k_col_ + t_col;
  }

  int k_row_, k_col_, n_row_, n_col_;
  Matrix type_dist_;
  std::vector<double> u_row_, u_col_;
  std::vector<double> marg_row_, marg_col_;
  bool uniform_ = false;
};

/// Pure strategy pair: one action per type for each player.
struct PureBayesProfile {
  std::vector<int> s_row;
  std::vector<int> s_col;

  std::string to_json() const;
  static PureBayesProfile from_json(const std::string& text);
};

/// Per-type payoffs and deviation gains. Types with zero marginal
/// probability are never observed and carry regret 0.
struct BneCertificate {
  std::vector<double> p_row, p_col;
  std::vector<double> regret_row, regret_col;
  double max_regret = 0.0;

  std::string to_json() const;
};

BneCertificate bne_regret(const BayesianGame& game, const PureBayesProfile& profile);

bool is_eps_bne(const BayesianGame& game, const PureBayesProfile& profile, double eps);

enum class BneSearchStatus { Found, NoneExists, BudgetExceeded };

struct BruteForceResult {
  BneSearchStatus status = BneSearchStatus::NoneExists;
  std::optional<PureBayesProfile> profile;
  std::uint64_t pairs_scanned = 0;
};

/// Exhaustive scan over pure profile pairs in lexicographic order,
/// pruned by per-type regret early exit. The budget bounds
/// n_row^k_row * n_col^k_col up front.
BruteForceResult brute_force_pure_bne(const BayesianGame& game, double eps,
                                      double budget = 1e10);

/// Sample count m = ceil(40 ln(n k) / eps^2) used by the estimator
/// stage (natural log).
int bne_sample_count(int n, int k, double eps);

/// Everything the quasi-polynomial algorithm saw: sampled types and
/// guessed opposing actions, the payoff estimates q with their
/// per-type maxima, the LP solution and the rounding stream.
struct BneAlgoTrace {
  bool sampling_path = false;
  int m = 0;
  std::vector<int> sampled_col_types;  // used to estimate q_row
  std::vector<int> sampled_row_types;  // used to estimate q_col
  std::vector<int> guessed_col_actions;
  std::vector<int> guessed_row_actions;
  Matrix q_row, q_col;
  std::vector<double> m_row, m_col;  // per-type maxima of q
  Matrix x_row, x_col;               // LP solution
  std::uint64_t rounding_seed = 0;
  int attempts = 0;

  std::string to_json() const;
};

enum class BneAlgoStatus { Ok, NoBneFound, BudgetExhausted, BruteForceBudgetExceeded };

struct BneAlgoResult {
  BneAlgoStatus status = BneAlgoStatus::BudgetExhausted;
  std::optional<PureBayesProfile> profile;
  BneAlgoTrace trace;
};

/// Pure eps-BNE for uniform-type games. Small type spaces go to brute
/// force (at slack eps/2, covering the relaxed existence assumption);
/// otherwise sample m types per side, guess the opposing actions,
/// solve the closeness LP over near-maximal supports and round by
/// sampling, re-drawing guesses up to guess_budget. Never returns an
/// unverified profile.
BneAlgoResult qp_pure_bne_uniform(const BayesianGame& game, double eps,
                                  std::uint64_t seed, std::uint64_t guess_budget,
                                  double brute_budget = 1e10);

/// Proper edge coloring with at most max_degree + 1 colors
/// (Misra-Gries). Keys are (min, max) endpoint pairs, colors 1-based.
std::map<std::pair<int, int>, int> edge_coloring(const PlantedGraph& graph);

/// The 3-coloring hardness gadget over a connected 4-regular graph.
/// Types are vertices; actions are (color, coin) pairs encoded
/// 2*(color-1) + coin. Mass 4/5 spreads over ordered edge pairs, 1/5
/// over the diagonal. Collisions pay powers-of-two stakes keyed by a
/// proper 5-edge-coloring.
BayesianGame build_coloring_hardness_game(const PlantedGraph& graph);

inline int gadget_action(int color, int coin) { return 2 * (color - 1) + coin; }
inline int gadget_color(int action) { return action / 2 + 1; }
inline int gadget_coin(int action) { return action % 2; }

/// Bayesian game with num_types uniform independent types per player
/// and payoffs equal to the bimatrix game's for every type pair.
BayesianGame lift_uniform_bayes(const BimatrixGame& game, int num_types);
BayesianGame lift_uniform_bayes(const ReductionArtifact& artifact, int num_types);

/// Empirical action distribution of a pure Bayesian profile, viewed
/// as a mixed strategy of the lifted bimatrix game.
MixedProfile pure_bayes_to_mixed(const BayesianGame& lifted, const PureBayesProfile& profile);

/// Per-type payoff change from flipping only the coin coordinate of
/// the played gadget action. Over all vertices these changes cancel.
std::pair<std::vector<double>, std::vector<double>> coin_flip_deltas(
    const BayesianGame& game, const PureBayesProfile& profile);

/// Uniform-type game with one boosted profile: the planted action of
/// each type pointwise dominates every alternative by at least margin,
/// making the planted profile the unique exact pure BNE.
BayesianGame build_planted_bne_game(int k, int n, double margin, std::uint64_t seed,
                                    PureBayesProfile* planted_out = nullptr);

}  // namespace cliquenash

#endif
