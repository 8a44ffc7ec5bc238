#include "cliquenash/approx_nash.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "cliquenash/linprog.hpp"

namespace cliquenash {

namespace {

int argmax_lowest(const std::vector<double>& v) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(v.size()); ++i) {
    if (v[i] > v[best]) best = i;
  }
  return best;
}

}  // namespace

MixedProfile dmp_half_equilibrium(const BimatrixGame& game, int start_row) {
  if (start_row < 0 || start_row >= game.rows()) {
    throw std::invalid_argument("dmp: start row out of range");
  }
  // Column best response to the pure start row.
  std::vector<double> col_payoffs(game.cols());
  for (int j = 0; j < game.cols(); ++j) col_payoffs[j] = game.m_col()(start_row, j);
  const int j = argmax_lowest(col_payoffs);

  // Row best response to that column.
  std::vector<double> row_payoffs(game.rows());
  for (int i = 0; i < game.rows(); ++i) row_payoffs[i] = game.m_row()(i, j);
  const int k = argmax_lowest(row_payoffs);

  std::vector<double> x(game.rows(), 0.0), y(game.cols(), 0.0);
  x[start_row] += 0.5;
  x[k] += 0.5;
  y[j] = 1.0;
  return MixedProfile(std::move(x), std::move(y));
}

namespace {

// Stability LP for a fixed pure column j: maximize the profile value
// over row mixtures x whose pairing with e_j leaves both players at
// most 1/2 regret.
LinearProgram half_eq_lp_for_column(const BimatrixGame& game, int j) {
  const int rows = game.rows();
  const int cols = game.cols();
  LinearProgram lp;
  lp.objective.resize(rows);
  for (int i = 0; i < rows; ++i) {
    lp.objective[i] = 0.5 * (game.m_row()(i, j) + game.m_col()(i, j));
  }
  // Column stability: x^T M_col e_j' <= x^T M_col e_j + 1/2 for all j'.
  // Row stability:    max_i M_row(i, j) <= x^T M_row e_j + 1/2, one row
  // per pure deviation i as stated.
  const int n_ineq = (cols - 1) + rows;
  lp.ineq_lhs = Matrix(n_ineq, rows);
  lp.ineq_rhs.assign(n_ineq, 0.5);
  int r = 0;
  for (int jp = 0; jp < cols; ++jp) {
    if (jp == j) continue;
    for (int i = 0; i < rows; ++i) {
      lp.ineq_lhs(r, i) = game.m_col()(i, jp) - game.m_col()(i, j);
    }
    ++r;
  }
  for (int i = 0; i < rows; ++i) {
    for (int ip = 0; ip < rows; ++ip) lp.ineq_lhs(r, ip) = -game.m_row()(ip, j);
    lp.ineq_rhs[r] = 0.5 - game.m_row()(i, j);
    ++r;
  }
  lp.eq_lhs = Matrix(1, rows, 1.0);
  lp.eq_rhs = {1.0};
  return lp;
}

BimatrixGame transposed(const BimatrixGame& game) {
  Matrix mr(game.cols(), game.rows());
  Matrix mc(game.cols(), game.rows());
  for (int i = 0; i < game.rows(); ++i) {
    for (int j = 0; j < game.cols(); ++j) {
      mr(j, i) = game.m_col()(i, j);
      mc(j, i) = game.m_row()(i, j);
    }
  }
  return BimatrixGame(std::move(mr), std::move(mc));
}

}  // namespace

std::pair<MixedProfile, double> optimal_value_half_equilibrium(const BimatrixGame& game) {
  std::optional<MixedProfile> best;
  double best_value = -1.0;

  // One LP per pure column strategy, then the symmetric orientation
  // (pure row strategies) via the transposed game.
  for (int j = 0; j < game.cols(); ++j) {
    const LpSolution sol = solve(half_eq_lp_for_column(game, j));
    if (sol.status != LpStatus::Optimal) continue;
    if (sol.objective_value > best_value) {
      std::vector<double> x = sol.point;
      double sum = 0.0;
      for (double& e : x) {
        e = std::max(0.0, e);
        sum += e;
      }
      for (double& e : x) e /= sum;
      std::vector<double> y(game.cols(), 0.0);
      y[j] = 1.0;
      best = MixedProfile(std::move(x), std::move(y));
      best_value = sol.objective_value;
    }
  }
  const BimatrixGame flipped = transposed(game);
  for (int i = 0; i < game.rows(); ++i) {
    const LpSolution sol = solve(half_eq_lp_for_column(flipped, i));
    if (sol.status != LpStatus::Optimal) continue;
    if (sol.objective_value > best_value) {
      std::vector<double> y = sol.point;
      double sum = 0.0;
      for (double& e : y) {
        e = std::max(0.0, e);
        sum += e;
      }
      for (double& e : y) e /= sum;
      std::vector<double> x(game.rows(), 0.0);
      x[i] = 1.0;
      best = MixedProfile(std::move(x), std::move(y));
      best_value = sol.objective_value;
    }
  }
  if (!best) {
    // Cannot happen: the LP for the DMP column is always feasible.
    throw std::runtime_error("optimal_value_half_equilibrium: all LPs infeasible");
  }
  return {*best, best_value};
}

namespace {

// Enumerates multisets of {0..n-1} of the given size in lexicographic
// order, invoking fn with the multiset as a sorted index vector.
// Returns false if fn stopped the enumeration.
template <typename Fn>
bool for_each_multiset(int n, int size, Fn&& fn) {
  std::vector<int> ms(size, 0);
  while (true) {
    if (!fn(ms)) return false;
    int pos = size - 1;
    while (pos >= 0 && ms[pos] == n - 1) --pos;
    if (pos < 0) return true;
    const int v = ms[pos] + 1;
    for (int q = pos; q < size; ++q) ms[q] = v;
  }
}

std::vector<double> multiset_to_distribution(const std::vector<int>& ms, int n) {
  std::vector<double> v(n, 0.0);
  for (int i : ms) v[i] += 1.0;
  for (double& e : v) e /= static_cast<double>(ms.size());
  return v;
}

}  // namespace

SmallSupportResult small_support_search(const BimatrixGame& game, double eps, int k,
                                        std::optional<double> value_floor,
                                        std::uint64_t budget) {
  if (k < 1) throw std::invalid_argument("small_support_search: k must be >= 1");
  if (eps < 0.0) throw std::invalid_argument("small_support_search: eps must be >= 0");
  SmallSupportResult result;

  for (int sr = 1; sr <= k; ++sr) {
    for (int sc = 1; sc <= k; ++sc) {
      const bool keep_going = for_each_multiset(game.rows(), sr, [&](const std::vector<int>& mr) {
        std::vector<double> x = multiset_to_distribution(mr, game.rows());
        return for_each_multiset(game.cols(), sc, [&](const std::vector<int>& mc) {
          if (result.pairs_checked >= budget) return false;
          ++result.pairs_checked;
          MixedProfile p(x, multiset_to_distribution(mc, game.cols()));
          const RegretCertificate cert = regret(game, p);
          if (std::max(cert.regret_row, cert.regret_col) <= eps + kEqTolerance &&
              (!value_floor || cert.value >= *value_floor - kEqTolerance)) {
            result.status = SearchStatus::Found;
            result.profile = std::move(p);
            result.value = cert.value;
            return false;
          }
          return true;
        });
      });
      if (!keep_going) {
        if (result.status == SearchStatus::Found) return result;
        result.status = SearchStatus::BudgetExceeded;
        return result;
      }
    }
  }
  result.status = SearchStatus::NotFound;
  return result;
}

namespace {

// Gaussian elimination with partial pivoting; returns false when the
// system is (numerically) singular.
bool solve_square(std::vector<std::vector<double>> a, std::vector<double> b,
                  std::vector<double>& out) {
  const int n = static_cast<int>(b.size());
  for (int col = 0; col < n; ++col) {
    int piv = col;
    for (int r = col + 1; r < n; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    if (std::abs(a[piv][col]) < 1e-12) return false;
    std::swap(a[piv], a[col]);
    std::swap(b[piv], b[col]);
    for (int r = col + 1; r < n; ++r) {
      const double f = a[r][col] / a[col][col];
      if (f == 0.0) continue;
      for (int c = col; c < n; ++c) a[r][c] -= f * a[col][c];
      b[r] -= f * b[col];
    }
  }
  out.assign(n, 0.0);
  for (int r = n - 1; r >= 0; --r) {
    double acc = b[r];
    for (int c = r + 1; c < n; ++c) acc -= a[r][c] * out[c];
    out[r] = acc / a[r][r];
  }
  return true;
}

// Mixture on the given support making the opponent indifferent across
// their support. Unknowns: the support weights plus the opponent's
// common payoff.
std::optional<std::vector<double>> indifference_mixture(
    const Matrix& opponent_payoff, bool mixing_side_is_rows,
    const std::vector<int>& mix_support, const std::vector<int>& opp_support,
    int mix_dim) {
  const int s = static_cast<int>(mix_support.size());
  std::vector<std::vector<double>> a(s + 1, std::vector<double>(s + 1, 0.0));
  std::vector<double> b(s + 1, 0.0);
  for (int r = 0; r < s; ++r) {
    const int opp = opp_support[r];
    for (int c = 0; c < s; ++c) {
      const int mine = mix_support[c];
      a[r][c] = mixing_side_is_rows ? opponent_payoff(mine, opp)
                                    : opponent_payoff(opp, mine);
    }
    a[r][s] = -1.0;  // common payoff variable
  }
  for (int c = 0; c < s; ++c) a[s][c] = 1.0;
  b[s] = 1.0;

  std::vector<double> sol;
  if (!solve_square(std::move(a), std::move(b), sol)) return std::nullopt;

  std::vector<double> mix(mix_dim, 0.0);
  double total = 0.0;
  for (int c = 0; c < s; ++c) {
    double w = sol[c];
    if (w < -1e-9) return std::nullopt;     // negative probability
    if (w < 1e-10) w = 0.0;                 // snap numerical dust to zero
    mix[mix_support[c]] = w;
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-7) return std::nullopt;
  for (double& e : mix) e /= total;
  return mix;
}

}  // namespace

std::vector<NashPoint> enumerate_nash_support(const BimatrixGame& game, int max_support,
                                              std::uint64_t budget) {
  const int rows = game.rows();
  const int cols = game.cols();
  const int cap = std::min(max_support, std::min(rows, cols));
  if (cap < 1) throw std::invalid_argument("enumerate_nash_support: max_support < 1");

  std::vector<NashPoint> found;
  std::uint64_t pairs = 0;

  auto already_found = [&](const MixedProfile& p) {
    for (const NashPoint& np : found) {
      double diff = 0.0;
      for (int i = 0; i < rows; ++i) diff = std::max(diff, std::abs(np.profile.x()[i] - p.x()[i]));
      for (int j = 0; j < cols; ++j) diff = std::max(diff, std::abs(np.profile.y()[j] - p.y()[j]));
      if (diff <= 1e-8) return true;
    }
    return false;
  };

  // Equal-size support pairs, the generic case. Size-1 covers all pure
  // equilibria; degenerate continua are represented by their vertices.
  std::vector<int> sup_r, sup_c;
  for (int size = 1; size <= cap; ++size) {
    std::vector<int> comb_r(size);
    for (int i = 0; i < size; ++i) comb_r[i] = i;
    auto next_comb = [](std::vector<int>& comb, int n) {
      int i = static_cast<int>(comb.size()) - 1;
      while (i >= 0 && comb[i] == n - static_cast<int>(comb.size()) + i) --i;
      if (i < 0) return false;
      ++comb[i];
      for (int j = i + 1; j < static_cast<int>(comb.size()); ++j) comb[j] = comb[j - 1] + 1;
      return true;
    };
    do {
      std::vector<int> comb_c(size);
      for (int i = 0; i < size; ++i) comb_c[i] = i;
      do {
        if (++pairs > budget) {
          throw std::runtime_error("enumerate_nash_support: budget exceeded");
        }
        // x on comb_r makes the column player indifferent on comb_c;
        // y on comb_c makes the row player indifferent on comb_r.
        auto x = indifference_mixture(game.m_col(), true, comb_r, comb_c, rows);
        if (!x) continue;
        auto y = indifference_mixture(game.m_row(), false, comb_c, comb_r, cols);
        if (!y) continue;
        MixedProfile p(*x, *y);
        const RegretCertificate cert = regret(game, p);
        if (std::max(cert.regret_row, cert.regret_col) <= 1e-8 && !already_found(p)) {
          found.push_back(NashPoint{std::move(p), cert.value});
        }
      } while (next_comb(comb_c, cols));
    } while (next_comb(comb_r, rows));
  }
  return found;
}

}  // namespace cliquenash
