#ifndef CLIQUENASH_APPROX_NASH_HPP
#define CLIQUENASH_APPROX_NASH_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "cliquenash/game.hpp"

namespace cliquenash {

/// The DMP half-equilibrium: the column player best-responds to the
/// chosen pure row, the row player mixes the start row with a best
/// response to that column. Row support <= 2, column support = 1.
MixedProfile dmp_half_equilibrium(const BimatrixGame& game, int start_row);

/// Half-equilibrium of maximum value: for every pure strategy of one
/// player, solve the stability LP for the other side and keep the best
/// feasible objective. Ties across pure strategies break to the lowest
/// index (column LPs before row LPs). The returned value is at least
/// the value of every exact Nash equilibrium.
std::pair<MixedProfile, double> optimal_value_half_equilibrium(const BimatrixGame& game);

enum class SearchStatus { Found, NotFound, BudgetExceeded };

struct SmallSupportResult {
  SearchStatus status = SearchStatus::NotFound;
  std::optional<MixedProfile> profile;
  double value = 0.0;
  std::uint64_t pairs_checked = 0;
};

/// Exhaustive search over k-uniform profiles (uniform distributions
/// over multisets of size <= k per side, so k >= 1 includes pure
/// strategies). Returns the first profile in lexicographic multiset
/// order that is an eps-equilibrium and meets the value floor.
SmallSupportResult small_support_search(const BimatrixGame& game, double eps, int k,
                                        std::optional<double> value_floor = std::nullopt,
                                        std::uint64_t budget = 50'000'000);

struct NashPoint {
  MixedProfile profile;
  double value = 0.0;
};

/// Test oracle: support enumeration over equal-size supports up to
/// max_support. Solves the indifference system per support pair and
/// keeps solutions whose regrets are at most 1e-8. Intended for small
/// games (<= ~6 strategies per side).
std::vector<NashPoint> enumerate_nash_support(const BimatrixGame& game, int max_support,
                                              std::uint64_t budget = 20'000'000);

}  // namespace cliquenash

#endif
