#include "cliquenash/bayesian.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "cliquenash/linprog.hpp"
#include "cliquenash/rng.hpp"

namespace cliquenash {

using nlohmann::json;

BayesianGame::BayesianGame(int k_row, int k_col, int n_row, int n_col, Matrix type_dist,
                           std::vector<double> u_row, std::vector<double> u_col)
    : k_row_(k_row), k_col_(k_col), n_row_(n_row), n_col_(n_col),
      type_dist_(std::move(type_dist)), u_row_(std::move(u_row)), u_col_(std::move(u_col)) {
  if (k_row_ < 1 || k_col_ < 1 || n_row_ < 1 || n_col_ < 1) {
    throw std::invalid_argument("bayesian game: empty type or action space");
  }
  if (type_dist_.rows() != k_row_ || type_dist_.cols() != k_col_) {
    throw std::invalid_argument("bayesian game: type distribution shape mismatch");
  }
  const std::size_t expect = static_cast<std::size_t>(n_row_) * n_col_ * k_row_ * k_col_;
  if (u_row_.size() != expect || u_col_.size() != expect) {
    throw std::invalid_argument("bayesian game: payoff tensor size mismatch");
  }
  double total = 0.0;
  for (double p : type_dist_.data()) {
    if (!(p >= 0.0)) throw std::invalid_argument("bayesian game: negative type probability");
    total += p;
  }
  if (std::abs(total - 1.0) > kEqTolerance) {
    throw std::invalid_argument("bayesian game: type distribution must sum to 1");
  }
  for (double v : u_row_) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("bayesian game: u_row outside [0,1]");
  }
  for (double v : u_col_) {
    if (!(v >= 0.0 && v <= 1.0)) throw std::invalid_argument("bayesian game: u_col outside [0,1]");
  }
  marg_row_.assign(k_row_, 0.0);
  marg_col_.assign(k_col_, 0.0);
  for (int i = 0; i < k_row_; ++i) {
    for (int j = 0; j < k_col_; ++j) {
      marg_row_[i] += type_dist_(i, j);
      marg_col_[j] += type_dist_(i, j);
    }
  }
  const double unif = 1.0 / (static_cast<double>(k_row_) * k_col_);
  uniform_ = true;
  for (double p : type_dist_.data()) {
    if (std::abs(p - unif) > 1e-12) {
      uniform_ = false;
      break;
    }
  }
}

BayesianGame BayesianGame::uniform_types(int k, int n_row, int n_col,
                                         std::vector<double> u_row,
                                         std::vector<double> u_col) {
  Matrix dist(k, k, 1.0 / (static_cast<double>(k) * k));
  return BayesianGame(k, k, n_row, n_col, std::move(dist), std::move(u_row),
                      std::move(u_col));
}

std::string BayesianGame::to_json() const {
  json j;
  j["k_row"] = k_row_;
  j["k_col"] = k_col_;
  j["n_row"] = n_row_;
  j["n_col"] = n_col_;
  json dist = json::array();
  for (int i = 0; i < k_row_; ++i) {
    json row = json::array();
    for (int c = 0; c < k_col_; ++c) row.push_back(type_dist_(i, c));
    dist.push_back(std::move(row));
  }
  j["type_dist"] = std::move(dist);
  j["u_row"] = u_row_;
  j["u_col"] = u_col_;
  j["uniform"] = uniform_;
  return j.dump();
}

BayesianGame BayesianGame::from_json(const std::string& text) {
  json j = json::parse(text);
  const int k_row = j.at("k_row").get<int>();
  const int k_col = j.at("k_col").get<int>();
  const int n_row = j.at("n_row").get<int>();
  const int n_col = j.at("n_col").get<int>();
  Matrix dist(k_row, k_col);
  const auto& d = j.at("type_dist");
  if (static_cast<int>(d.size()) != k_row) {
    throw std::invalid_argument("bayesian game: type_dist row mismatch");
  }
  for (int i = 0; i < k_row; ++i) {
    if (static_cast<int>(d[i].size()) != k_col) {
      throw std::invalid_argument("bayesian game: type_dist column mismatch");
    }
    for (int c = 0; c < k_col; ++c) dist(i, c) = d[i][c].get<double>();
  }
  BayesianGame game(k_row, k_col, n_row, n_col, std::move(dist),
                    j.at("u_row").get<std::vector<double>>(),
                    j.at("u_col").get<std::vector<double>>());
  if (j.contains("uniform") && j["uniform"].get<bool>() != game.uniform()) {
    throw std::invalid_argument("bayesian game: uniform flag inconsistent with table");
  }
  return game;
}

std::string PureBayesProfile::to_json() const {
  json j;
  j["s_row"] = s_row;
  j["s_col"] = s_col;
  return j.dump();
}

PureBayesProfile PureBayesProfile::from_json(const std::string& text) {
  json j = json::parse(text);
  return PureBayesProfile{j.at("s_row").get<std::vector<int>>(),
                          j.at("s_col").get<std::vector<int>>()};
}

std::string BneCertificate::to_json() const {
  json j;
  j["p_row"] = p_row;
  j["p_col"] = p_col;
  j["regret_row"] = regret_row;
  j["regret_col"] = regret_col;
  j["max_regret"] = max_regret;
  return j.dump();
}

namespace {

void check_profile(const BayesianGame& g, const PureBayesProfile& p) {
  if (static_cast<int>(p.s_row.size()) != g.k_row() ||
      static_cast<int>(p.s_col.size()) != g.k_col()) {
    throw std::invalid_argument("profile type-map sizes do not match game");
  }
  for (int a : p.s_row) {
    if (a < 0 || a >= g.n_row()) throw std::invalid_argument("profile: bad row action");
  }
  for (int a : p.s_col) {
    if (a < 0 || a >= g.n_col()) throw std::invalid_argument("profile: bad column action");
  }
}

}  // namespace

BneCertificate bne_regret(const BayesianGame& game, const PureBayesProfile& profile) {
  check_profile(game, profile);
  BneCertificate cert;
  cert.p_row.assign(game.k_row(), 0.0);
  cert.p_col.assign(game.k_col(), 0.0);
  cert.regret_row.assign(game.k_row(), 0.0);
  cert.regret_col.assign(game.k_col(), 0.0);

  for (int t = 0; t < game.k_row(); ++t) {
    const double marg = game.marginal_row(t);
    if (marg <= 0.0) continue;  // unobserved type, regret 0
    double played = 0.0;
    double best = 0.0;
    for (int a = 0; a < game.n_row(); ++a) {
      double q = 0.0;
      for (int u = 0; u < game.k_col(); ++u) {
        const double w = game.type_dist()(t, u);
        if (w > 0.0) q += (w / marg) * game.u_row(a, profile.s_col[u], t, u);
      }
      if (a == profile.s_row[t]) played = q;
      best = std::max(best, q);
    }
    cert.p_row[t] = played;
    cert.regret_row[t] = std::max(0.0, best - played);
  }
  for (int t = 0; t < game.k_col(); ++t) {
    const double marg = game.marginal_col(t);
    if (marg <= 0.0) continue;
    double played = 0.0;
    double best = 0.0;
    for (int a = 0; a < game.n_col(); ++a) {
      double q = 0.0;
      for (int u = 0; u < game.k_row(); ++u) {
        const double w = game.type_dist()(u, t);
        if (w > 0.0) q += (w / marg) * game.u_col(profile.s_row[u], a, u, t);
      }
      if (a == profile.s_col[t]) played = q;
      best = std::max(best, q);
    }
    cert.p_col[t] = played;
    cert.regret_col[t] = std::max(0.0, best - played);
  }
  double mr = 0.0;
  for (double r : cert.regret_row) mr = std::max(mr, r);
  for (double r : cert.regret_col) mr = std::max(mr, r);
  cert.max_regret = mr;
  return cert;
}

bool is_eps_bne(const BayesianGame& game, const PureBayesProfile& profile, double eps) {
  if (eps < 0.0) throw std::invalid_argument("eps must be nonnegative");
  return bne_regret(game, profile).max_regret <= eps + kEqTolerance;
}

namespace {

// Lexicographically increments a base-radix odometer; false on wrap.
bool next_tuple(std::vector<int>& digits, int radix) {
  for (int i = static_cast<int>(digits.size()) - 1; i >= 0; --i) {
    if (++digits[i] < radix) return true;
    digits[i] = 0;
  }
  return false;
}

// Per-type sets of actions whose conditional payoff is within eps of
// the per-type maximum, for the column player against a fixed s_row.
std::vector<std::vector<int>> column_allowed_actions(const BayesianGame& g,
                                                     const std::vector<int>& s_row,
                                                     double eps) {
  std::vector<std::vector<int>> allowed(g.k_col());
  std::vector<double> q(g.n_col());
  for (int t = 0; t < g.k_col(); ++t) {
    const double marg = g.marginal_col(t);
    if (marg <= 0.0) {
      for (int a = 0; a < g.n_col(); ++a) allowed[t].push_back(a);
      continue;
    }
    double best = 0.0;
    for (int a = 0; a < g.n_col(); ++a) {
      double acc = 0.0;
      for (int u = 0; u < g.k_row(); ++u) {
        const double w = g.type_dist()(u, t);
        if (w > 0.0) acc += (w / marg) * g.u_col(s_row[u], a, u, t);
      }
      q[a] = acc;
      best = std::max(best, acc);
    }
    for (int a = 0; a < g.n_col(); ++a) {
      if (q[a] >= best - eps - kEqTolerance) allowed[t].push_back(a);
    }
  }
  return allowed;
}

// True iff every row type's played action is within eps of its best
// response against s_col; exits on the first violating type.
bool row_condition_holds(const BayesianGame& g, const std::vector<int>& s_row,
                         const std::vector<int>& s_col, double eps) {
  for (int t = 0; t < g.k_row(); ++t) {
    const double marg = g.marginal_row(t);
    if (marg <= 0.0) continue;
    double played = 0.0;
    for (int u = 0; u < g.k_col(); ++u) {
      const double w = g.type_dist()(t, u);
      if (w > 0.0) played += (w / marg) * g.u_row(s_row[t], s_col[u], t, u);
    }
    const double bar = played + eps + kEqTolerance;
    for (int a = 0; a < g.n_row(); ++a) {
      if (a == s_row[t]) continue;
      double q = 0.0;
      for (int u = 0; u < g.k_col(); ++u) {
        const double w = g.type_dist()(t, u);
        if (w > 0.0) {
          q += (w / marg) * g.u_row(a, s_col[u], t, u);
          if (q > bar) return false;  // payoffs are nonnegative
        }
      }
    }
  }
  return true;
}

}  // namespace

BruteForceResult brute_force_pure_bne(const BayesianGame& game, double eps,
                                      double budget) {
  if (eps < 0.0) throw std::invalid_argument("eps must be nonnegative");
  BruteForceResult result;
  const double total_pairs = std::pow(static_cast<double>(game.n_row()), game.k_row()) *
                             std::pow(static_cast<double>(game.n_col()), game.k_col());
  if (!(total_pairs <= budget)) {
    result.status = BneSearchStatus::BudgetExceeded;
    return result;
  }

  std::vector<int> s_row(game.k_row(), 0);
  do {
    const auto allowed = column_allowed_actions(game, s_row, eps);
    // Walk the product of allowed column actions in lexicographic
    // order; every eps-BNE partner of s_row lies inside it.
    std::vector<int> pos(game.k_col(), 0);
    std::vector<int> s_col(game.k_col());
    bool more = true;
    while (more) {
      for (int t = 0; t < game.k_col(); ++t) s_col[t] = allowed[t][pos[t]];
      ++result.pairs_scanned;
      if (row_condition_holds(game, s_row, s_col, eps)) {
        result.status = BneSearchStatus::Found;
        result.profile = PureBayesProfile{s_row, s_col};
        return result;
      }
      more = false;
      for (int i = game.k_col() - 1; i >= 0; --i) {
        if (++pos[i] < static_cast<int>(allowed[i].size())) {
          more = true;
          break;
        }
        pos[i] = 0;
      }
    }
  } while (next_tuple(s_row, game.n_row()));

  result.status = BneSearchStatus::NoneExists;
  return result;
}

int bne_sample_count(int n, int k, double eps) {
  if (eps <= 0.0) throw std::invalid_argument("bne_sample_count: eps must be positive");
  return static_cast<int>(
      std::ceil(40.0 * std::log(static_cast<double>(n) * k) / (eps * eps)));
}

std::string BneAlgoTrace::to_json() const {
  json j;
  j["sampling_path"] = sampling_path;
  j["m"] = m;
  j["sampled_col_types"] = sampled_col_types;
  j["sampled_row_types"] = sampled_row_types;
  j["guessed_col_actions"] = guessed_col_actions;
  j["guessed_row_actions"] = guessed_row_actions;
  auto mat = [](const Matrix& m2) {
    json rows = json::array();
    for (int i = 0; i < m2.rows(); ++i) {
      json r = json::array();
      for (int c = 0; c < m2.cols(); ++c) r.push_back(m2(i, c));
      rows.push_back(std::move(r));
    }
    return rows;
  };
  j["q_row"] = mat(q_row);
  j["q_col"] = mat(q_col);
  j["m_row"] = m_row;
  j["m_col"] = m_col;
  j["x_row"] = mat(x_row);
  j["x_col"] = mat(x_col);
  j["rounding_seed"] = rounding_seed;
  j["attempts"] = attempts;
  return j.dump();
}

namespace {

struct LpVarIndex {
  // var id per (type, action), -1 when outside the allowed support
  std::vector<int> row_vars, col_vars;
  int count = 0;

  int row_id(int t, int a, int n) const { return row_vars[t * n + a]; }
  int col_id(int t, int a, int n) const { return col_vars[t * n + a]; }
};

LpVarIndex build_var_index(const BayesianGame& g,
                           const std::vector<std::vector<int>>& allowed_row,
                           const std::vector<std::vector<int>>& allowed_col) {
  LpVarIndex idx;
  idx.row_vars.assign(static_cast<std::size_t>(g.k_row()) * g.n_row(), -1);
  idx.col_vars.assign(static_cast<std::size_t>(g.k_col()) * g.n_col(), -1);
  for (int t = 0; t < g.k_row(); ++t) {
    for (int a : allowed_row[t]) idx.row_vars[t * g.n_row() + a] = idx.count++;
  }
  for (int t = 0; t < g.k_col(); ++t) {
    for (int a : allowed_col[t]) idx.col_vars[t * g.n_col() + a] = idx.count++;
  }
  return idx;
}

}  // namespace

BneAlgoResult qp_pure_bne_uniform(const BayesianGame& game, double eps,
                                  std::uint64_t seed, std::uint64_t guess_budget,
                                  double brute_budget) {
  if (!game.uniform()) {
    throw std::invalid_argument("qp_pure_bne_uniform: type distribution must be uniform");
  }
  if (!(eps > 0.0)) throw std::invalid_argument("qp_pure_bne_uniform: eps must be positive");

  BneAlgoResult result;
  const int n = std::max(game.n_row(), game.n_col());
  const int k = std::max(game.k_row(), game.k_col());
  const int m = bne_sample_count(n, k, eps);

  if (std::min(game.k_row(), game.k_col()) <= m) {
    // Few types: exhaustive scan at slack eps/2, which also covers the
    // relaxed assumption that only an (eps/2)-BNE exists.
    BruteForceResult brute = brute_force_pure_bne(game, eps / 2.0, brute_budget);
    if (brute.status == BneSearchStatus::BudgetExceeded) {
      result.status = BneAlgoStatus::BruteForceBudgetExceeded;
      return result;
    }
    if (brute.status == BneSearchStatus::NoneExists) {
      result.status = BneAlgoStatus::NoBneFound;
      return result;
    }
    if (!is_eps_bne(game, *brute.profile, eps)) {
      throw std::logic_error("qp_pure_bne_uniform: brute-force result failed verification");
    }
    result.status = BneAlgoStatus::Ok;
    result.profile = brute.profile;
    result.trace.sampling_path = false;
    result.trace.attempts = 1;
    return result;
  }

  result.trace.sampling_path = true;
  result.trace.m = m;

  Rng base(seed);
  Rng type_rng = base.derive(1);
  result.trace.sampled_col_types = type_rng.sample_subset(game.k_col(), m);
  result.trace.sampled_row_types = type_rng.sample_subset(game.k_row(), m);

  // Exhaustive guess enumeration only fits tiny joint spaces; the
  // randomized loop otherwise replaces the nondeterministic guess.
  const double joint_guesses = std::pow(static_cast<double>(game.n_col()), m) *
                               std::pow(static_cast<double>(game.n_row()), m);
  const bool enumerate_guesses = joint_guesses <= static_cast<double>(guess_budget);

  std::vector<int> g_col(m, 0), g_row(m, 0);
  constexpr int kRoundingDraws = 10;

  for (std::uint64_t attempt = 0; attempt < guess_budget; ++attempt) {
    result.trace.attempts = static_cast<int>(attempt) + 1;
    if (enumerate_guesses) {
      if (attempt > 0) {
        if (!next_tuple(g_col, game.n_col()) && !next_tuple(g_row, game.n_row())) break;
      }
    } else {
      Rng guess_rng = base.derive(100 + attempt);
      for (int r = 0; r < m; ++r) {
        g_col[r] = static_cast<int>(guess_rng.next_below(game.n_col()));
        g_row[r] = static_cast<int>(guess_rng.next_below(game.n_row()));
      }
    }
    result.trace.guessed_col_actions = g_col;
    result.trace.guessed_row_actions = g_row;

    // Payoff estimates from the sampled types and guessed actions.
    Matrix q_row(game.k_row(), game.n_row());
    Matrix q_col(game.k_col(), game.n_col());
    for (int i = 0; i < game.k_row(); ++i) {
      for (int j = 0; j < game.n_row(); ++j) {
        double acc = 0.0;
        for (int r = 0; r < m; ++r) {
          acc += game.u_row(j, g_col[r], i, result.trace.sampled_col_types[r]);
        }
        q_row(i, j) = acc / m;
      }
    }
    for (int i = 0; i < game.k_col(); ++i) {
      for (int j = 0; j < game.n_col(); ++j) {
        double acc = 0.0;
        for (int r = 0; r < m; ++r) {
          acc += game.u_col(g_row[r], j, result.trace.sampled_row_types[r], i);
        }
        q_col(i, j) = acc / m;
      }
    }
    result.trace.q_row = q_row;
    result.trace.q_col = q_col;
    result.trace.m_row.assign(game.k_row(), 0.0);
    result.trace.m_col.assign(game.k_col(), 0.0);

    // Support restriction: only actions with q above the per-type
    // maximum minus eps/8 may carry probability (strictness realized
    // as a 1e-12 shift).
    std::vector<std::vector<int>> allowed_row(game.k_row()), allowed_col(game.k_col());
    for (int t = 0; t < game.k_row(); ++t) {
      double best = 0.0;
      for (int a = 0; a < game.n_row(); ++a) best = std::max(best, q_row(t, a));
      result.trace.m_row[t] = best;
      for (int a = 0; a < game.n_row(); ++a) {
        if (q_row(t, a) >= best - eps / 8.0 + 1e-12) allowed_row[t].push_back(a);
      }
    }
    for (int t = 0; t < game.k_col(); ++t) {
      double best = 0.0;
      for (int a = 0; a < game.n_col(); ++a) best = std::max(best, q_col(t, a));
      result.trace.m_col[t] = best;
      for (int a = 0; a < game.n_col(); ++a) {
        if (q_col(t, a) >= best - eps / 8.0 + 1e-12) allowed_col[t].push_back(a);
      }
    }

    const LpVarIndex idx = build_var_index(game, allowed_row, allowed_col);

    LinearProgram lp;
    lp.objective.assign(idx.count, 0.0);  // pure feasibility
    const int n_eq = game.k_row() + game.k_col();
    lp.eq_lhs = Matrix(n_eq, idx.count);
    lp.eq_rhs.assign(n_eq, 1.0);
    int er = 0;
    for (int t = 0; t < game.k_row(); ++t, ++er) {
      for (int a : allowed_row[t]) lp.eq_lhs(er, idx.row_id(t, a, game.n_row())) = 1.0;
    }
    for (int t = 0; t < game.k_col(); ++t, ++er) {
      for (int a : allowed_col[t]) lp.eq_lhs(er, idx.col_id(t, a, game.n_col())) = 1.0;
    }

    const int n_ineq = 2 * (game.k_row() * game.n_row() + game.k_col() * game.n_col());
    lp.ineq_lhs = Matrix(n_ineq, idx.count);
    lp.ineq_rhs.assign(n_ineq, 0.0);
    int ir = 0;
    // | q_row(i,j) - (1/k) sum X_col(y,z) u_row(j,z,i,y) | <= eps/4
    for (int i = 0; i < game.k_row(); ++i) {
      for (int j = 0; j < game.n_row(); ++j) {
        for (int y = 0; y < game.k_col(); ++y) {
          for (int z : allowed_col[y]) {
            const double coef = game.u_row(j, z, i, y) / game.k_col();
            const int var = idx.col_id(y, z, game.n_col());
            lp.ineq_lhs(ir, var) = coef;       // expr <= q + eps/4
            lp.ineq_lhs(ir + 1, var) = -coef;  // -expr <= eps/4 - q
          }
        }
        lp.ineq_rhs[ir] = q_row(i, j) + eps / 4.0;
        lp.ineq_rhs[ir + 1] = eps / 4.0 - q_row(i, j);
        ir += 2;
      }
    }
    for (int i = 0; i < game.k_col(); ++i) {
      for (int j = 0; j < game.n_col(); ++j) {
        for (int y = 0; y < game.k_row(); ++y) {
          for (int z : allowed_row[y]) {
            const double coef = game.u_col(z, j, y, i) / game.k_row();
            const int var = idx.row_id(y, z, game.n_row());
            lp.ineq_lhs(ir, var) = coef;
            lp.ineq_lhs(ir + 1, var) = -coef;
          }
        }
        lp.ineq_rhs[ir] = q_col(i, j) + eps / 4.0;
        lp.ineq_rhs[ir + 1] = eps / 4.0 - q_col(i, j);
        ir += 2;
      }
    }

    const LpSolution lp_sol = solve(lp);
    if (lp_sol.status != LpStatus::Optimal) continue;

    result.trace.x_row = Matrix(game.k_row(), game.n_row());
    result.trace.x_col = Matrix(game.k_col(), game.n_col());
    for (int t = 0; t < game.k_row(); ++t) {
      for (int a : allowed_row[t]) {
        result.trace.x_row(t, a) = std::max(0.0, lp_sol.point[idx.row_id(t, a, game.n_row())]);
      }
    }
    for (int t = 0; t < game.k_col(); ++t) {
      for (int a : allowed_col[t]) {
        result.trace.x_col(t, a) = std::max(0.0, lp_sol.point[idx.col_id(t, a, game.n_col())]);
      }
    }

    // Round by sampling each type's action from its LP distribution.
    for (int draw = 0; draw < kRoundingDraws; ++draw) {
      Rng round_rng = base.derive(1'000'000 + attempt * kRoundingDraws + draw);
      result.trace.rounding_seed = 1'000'000 + attempt * kRoundingDraws + draw;
      PureBayesProfile candidate;
      candidate.s_row.resize(game.k_row());
      candidate.s_col.resize(game.k_col());
      auto sample_from = [&round_rng](const Matrix& x, int t, int n_actions) {
        double total = 0.0;
        for (int a = 0; a < n_actions; ++a) total += x(t, a);
        double u = round_rng.next_double() * total;
        for (int a = 0; a < n_actions; ++a) {
          u -= x(t, a);
          if (u <= 0.0 && x(t, a) > 0.0) return a;
        }
        for (int a = n_actions - 1; a >= 0; --a) {
          if (x(t, a) > 0.0) return a;
        }
        return 0;
      };
      for (int t = 0; t < game.k_row(); ++t) {
        candidate.s_row[t] = sample_from(result.trace.x_row, t, game.n_row());
      }
      for (int t = 0; t < game.k_col(); ++t) {
        candidate.s_col[t] = sample_from(result.trace.x_col, t, game.n_col());
      }
      if (is_eps_bne(game, candidate, eps)) {
        result.status = BneAlgoStatus::Ok;
        result.profile = std::move(candidate);
        return result;
      }
    }
  }
  result.status = BneAlgoStatus::BudgetExhausted;
  return result;
}

// --- Misra-Gries edge coloring ------------------------------------

namespace {

class EdgeColoring {
 public:
  EdgeColoring(const PlantedGraph& g, int max_colors)
      : g_(g), n_(g.n()), max_colors_(max_colors),
        color_(static_cast<std::size_t>(n_) * n_, 0),
        used_(n_, std::vector<char>(max_colors + 1, 0)) {}

  int color(int u, int v) const { return color_[static_cast<std::size_t>(u) * n_ + v]; }

  bool is_free(int v, int c) const { return c >= 1 && c <= max_colors_ && !used_[v][c]; }

  int free_color(int v) const {
    for (int c = 1; c <= max_colors_; ++c) {
      if (!used_[v][c]) return c;
    }
    throw std::logic_error("edge coloring: no free color");
  }

  void set_color(int u, int v, int c) {
    const int old = color(u, v);
    if (old != 0) {
      used_[u][old] = 0;
      used_[v][old] = 0;
    }
    color_[static_cast<std::size_t>(u) * n_ + v] = c;
    color_[static_cast<std::size_t>(v) * n_ + u] = c;
    if (c != 0) {
      used_[u][c] = 1;
      used_[v][c] = 1;
    }
  }

  std::vector<int> maximal_fan(int u, int start) const {
    std::vector<int> fan{start};
    std::vector<char> in_fan(n_, 0);
    in_fan[start] = 1;
    bool extended = true;
    while (extended) {
      extended = false;
      for (int w = 0; w < n_; ++w) {
        if (w == u || in_fan[w] || !g_.adjacent(u, w)) continue;
        const int c = color(u, w);
        if (c != 0 && is_free(fan.back(), c)) {
          fan.push_back(w);
          in_fan[w] = 1;
          extended = true;
          break;
        }
      }
    }
    return fan;
  }

  // Swap colors c and d along the maximal alternating path from u that
  // starts with a d-colored edge. The path is uncolored wholesale
  // before reassignment: edges at a shared vertex swap colors with
  // each other, and interleaving would corrupt the used-color table.
  void invert_path(int u, int c, int d) {
    std::vector<std::pair<int, int>> path;
    int cur = u;
    int prev = -1;
    int want = d;
    while (true) {
      int next = -1;
      for (int w = 0; w < n_; ++w) {
        if (w != prev && w != cur && g_.adjacent(cur, w) && color(cur, w) == want) {
          next = w;
          break;
        }
      }
      if (next < 0) break;
      path.emplace_back(cur, next);
      prev = cur;
      cur = next;
      want = (want == d) ? c : d;
      if (static_cast<int>(path.size()) > 2 * n_) {
        throw std::logic_error("edge coloring: alternating path did not terminate");
      }
    }
    std::vector<int> swapped;
    swapped.reserve(path.size());
    for (auto [a, b] : path) {
      swapped.push_back(color(a, b) == c ? d : c);
      set_color(a, b, 0);
    }
    for (std::size_t i = 0; i < path.size(); ++i) {
      set_color(path[i].first, path[i].second, swapped[i]);
    }
  }

  // Index w of the longest valid fan prefix end with d free, or -1.
  int find_rotation_end(int u, const std::vector<int>& fan, int d) const {
    for (int i = 0; i < static_cast<int>(fan.size()); ++i) {
      if (i > 0) {
        const int c = color(u, fan[i]);
        if (c == 0 || !is_free(fan[i - 1], c)) break;
      }
      if (is_free(fan[i], d)) return i;
    }
    return -1;
  }

  void rotate_and_color(int u, const std::vector<int>& fan, int w, int d) {
    // Uncolor the rotated edges first for the same reason as in
    // invert_path: the shift moves a color between edges sharing u.
    std::vector<int> shifted(w + 1);
    for (int i = 0; i < w; ++i) shifted[i] = color(u, fan[i + 1]);
    shifted[w] = d;
    for (int i = 1; i <= w; ++i) set_color(u, fan[i], 0);
    for (int i = 0; i <= w; ++i) set_color(u, fan[i], shifted[i]);
  }

  void color_edge(int u, int v) {
    std::vector<int> fan = maximal_fan(u, v);
    const int c = free_color(u);
    const int d = free_color(fan.back());
    if (c != d) invert_path(u, c, d);
    int w = find_rotation_end(u, fan, d);
    if (w < 0) {
      // The inversion may have shortened the usable prefix; rebuild
      // the fan against the updated coloring.
      fan = maximal_fan(u, v);
      w = find_rotation_end(u, fan, d);
    }
    if (w < 0) throw std::logic_error("edge coloring: no rotation point");
    rotate_and_color(u, fan, w, d);
  }

 private:
  const PlantedGraph& g_;
  int n_;
  int max_colors_;
  std::vector<int> color_;
  std::vector<std::vector<char>> used_;
};

}  // namespace

std::map<std::pair<int, int>, int> edge_coloring(const PlantedGraph& graph) {
  int max_deg = 0;
  for (int v = 0; v < graph.n(); ++v) max_deg = std::max(max_deg, graph.degree(v));
  if (max_deg == 0) return {};

  EdgeColoring ec(graph, max_deg + 1);
  for (auto [u, v] : graph.edge_list()) ec.color_edge(u, v);

  std::map<std::pair<int, int>, int> out;
  for (auto [u, v] : graph.edge_list()) {
    const int c = ec.color(u, v);
    if (c < 1 || c > max_deg + 1) throw std::logic_error("edge coloring: bad color");
    out[{u, v}] = c;
  }
  // Properness: edges sharing a vertex must differ.
  for (int v = 0; v < graph.n(); ++v) {
    std::vector<char> seen(max_deg + 2, 0);
    for (int u = 0; u < graph.n(); ++u) {
      if (u == v || !graph.adjacent(u, v)) continue;
      const int c = out.at({std::min(u, v), std::max(u, v)});
      if (seen[c]) throw std::logic_error("edge coloring: collision at a vertex");
      seen[c] = 1;
    }
  }
  return out;
}

BayesianGame build_coloring_hardness_game(const PlantedGraph& graph) {
  if (!graph.is_regular(4)) {
    throw NotFourRegularError("coloring gadget requires a 4-regular graph");
  }
  if (!graph.is_connected()) {
    throw NotFourRegularError("coloring gadget requires a connected graph");
  }
  const auto coloring = edge_coloring(graph);
  for (const auto& [e, c] : coloring) {
    if (c > 5) throw std::logic_error("coloring gadget: more than 5 edge colors");
  }

  const int n = graph.n();
  const auto edges = graph.edge_list();
  const int num_actions = 6;

  Matrix dist(n, n, 0.0);
  const double edge_mass = 0.8 / (2.0 * edges.size());
  for (auto [u, v] : edges) {
    dist(u, v) += edge_mass;
    dist(v, u) += edge_mass;
  }
  for (int v = 0; v < n; ++v) dist(v, v) += 0.2 / n;

  const std::size_t sz = static_cast<std::size_t>(num_actions) * num_actions * n * n;
  std::vector<double> u_row(sz, 0.0), u_col(sz, 0.0);
  auto idx = [n, num_actions](int ar, int ac, int tr, int tc) {
    return ((static_cast<std::size_t>(ar) * num_actions + ac) * n + tr) * n + tc;
  };

  for (int ar = 0; ar < num_actions; ++ar) {
    for (int ac = 0; ac < num_actions; ++ac) {
      const bool same_color = gadget_color(ar) == gadget_color(ac);
      const bool same_coin = gadget_coin(ar) == gadget_coin(ac);
      // Diagonal pairs: match colors or fight over 0.64.
      for (int v = 0; v < n; ++v) {
        double ur = 0.0, uc = 0.0;
        if (same_color) {
          ur = uc = 1.0;
        } else if (same_coin) {
          ur = 0.64;
        } else {
          uc = 0.64;
        }
        u_row[idx(ar, ac, v, v)] = ur;
        u_col[idx(ar, ac, v, v)] = uc;
      }
      // Edge pairs: differ or fight over the edge's stake.
      for (auto [u, v] : edges) {
        const double stake = 0.01 * std::pow(2.0, coloring.at({u, v}));
        double ur = 0.0, uc = 0.0;
        if (!same_color) {
          ur = uc = 1.0;
        } else if (same_coin) {
          ur = stake;
        } else {
          uc = stake;
        }
        u_row[idx(ar, ac, u, v)] = ur;
        u_col[idx(ar, ac, u, v)] = uc;
        u_row[idx(ar, ac, v, u)] = ur;
        u_col[idx(ar, ac, v, u)] = uc;
      }
      // Non-adjacent off-diagonal pairs carry no mass and stay 0.
    }
  }
  return BayesianGame(n, n, num_actions, num_actions, std::move(dist),
                      std::move(u_row), std::move(u_col));
}

BayesianGame lift_uniform_bayes(const BimatrixGame& game, int num_types) {
  if (num_types < 1) throw std::invalid_argument("lift: num_types must be >= 1");
  const std::size_t sz = static_cast<std::size_t>(game.rows()) * game.cols() *
                         num_types * num_types;
  if (sz > 200'000'000ull) {
    throw std::invalid_argument("lift: payoff tensor would be too large");
  }
  std::vector<double> u_row(sz), u_col(sz);
  std::size_t p = 0;
  for (int ar = 0; ar < game.rows(); ++ar) {
    for (int ac = 0; ac < game.cols(); ++ac) {
      const double vr = game.m_row()(ar, ac);
      const double vc = game.m_col()(ar, ac);
      for (int t = 0; t < num_types * num_types; ++t, ++p) {
        u_row[p] = vr;
        u_col[p] = vc;
      }
    }
  }
  Matrix dist(num_types, num_types,
              1.0 / (static_cast<double>(num_types) * num_types));
  return BayesianGame(num_types, num_types, game.rows(), game.cols(), std::move(dist),
                      std::move(u_row), std::move(u_col));
}

BayesianGame lift_uniform_bayes(const ReductionArtifact& artifact, int num_types) {
  return lift_uniform_bayes(artifact.game, num_types);
}

MixedProfile pure_bayes_to_mixed(const BayesianGame& lifted,
                                 const PureBayesProfile& profile) {
  check_profile(lifted, profile);
  std::vector<double> x(lifted.n_row(), 0.0), y(lifted.n_col(), 0.0);
  for (int a : profile.s_row) x[a] += 1.0 / profile.s_row.size();
  for (int a : profile.s_col) y[a] += 1.0 / profile.s_col.size();
  return MixedProfile(std::move(x), std::move(y));
}

std::pair<std::vector<double>, std::vector<double>> coin_flip_deltas(
    const BayesianGame& game, const PureBayesProfile& profile) {
  check_profile(game, profile);
  std::vector<double> d_row(game.k_row(), 0.0), d_col(game.k_col(), 0.0);
  for (int t = 0; t < game.k_row(); ++t) {
    const double marg = game.marginal_row(t);
    if (marg <= 0.0) continue;
    const int a = profile.s_row[t];
    const int flipped = a ^ 1;  // coin is the low bit of the action code
    double delta = 0.0;
    for (int u = 0; u < game.k_col(); ++u) {
      const double w = game.type_dist()(t, u);
      if (w > 0.0) {
        delta += (w / marg) * (game.u_row(flipped, profile.s_col[u], t, u) -
                               game.u_row(a, profile.s_col[u], t, u));
      }
    }
    d_row[t] = delta;
  }
  for (int t = 0; t < game.k_col(); ++t) {
    const double marg = game.marginal_col(t);
    if (marg <= 0.0) continue;
    const int a = profile.s_col[t];
    const int flipped = a ^ 1;
    double delta = 0.0;
    for (int u = 0; u < game.k_row(); ++u) {
      const double w = game.type_dist()(u, t);
      if (w > 0.0) {
        delta += (w / marg) * (game.u_col(profile.s_row[u], flipped, u, t) -
                               game.u_col(profile.s_row[u], a, u, t));
      }
    }
    d_col[t] = delta;
  }
  return {std::move(d_row), std::move(d_col)};
}

BayesianGame build_planted_bne_game(int k, int n, double margin, std::uint64_t seed,
                                    PureBayesProfile* planted_out) {
  if (k < 1 || n < 2) throw std::invalid_argument("planted bne game: need k >= 1, n >= 2");
  if (!(margin > 0.0 && margin <= 0.3)) {
    throw std::invalid_argument("planted bne game: margin must lie in (0, 0.3]");
  }
  Rng rng = Rng(seed).derive(21);
  PureBayesProfile planted;
  planted.s_row.resize(k);
  planted.s_col.resize(k);
  for (int t = 0; t < k; ++t) {
    planted.s_row[t] = static_cast<int>(rng.next_below(n));
    planted.s_col[t] = static_cast<int>(rng.next_below(n));
  }

  // Base payoffs stay below 1 - margin - 0.1; planted actions sit in
  // the top band, dominating pointwise.
  const double base_cap = 1.0 - margin - 0.1;
  const std::size_t sz = static_cast<std::size_t>(n) * n * k * k;
  std::vector<double> u_row(sz), u_col(sz);
  auto idx = [n, k](int ar, int ac, int tr, int tc) {
    return ((static_cast<std::size_t>(ar) * n + ac) * k + tr) * k + tc;
  };
  for (int ar = 0; ar < n; ++ar) {
    for (int ac = 0; ac < n; ++ac) {
      for (int tr = 0; tr < k; ++tr) {
        for (int tc = 0; tc < k; ++tc) {
          u_row[idx(ar, ac, tr, tc)] = base_cap * rng.next_double();
          u_col[idx(ar, ac, tr, tc)] = base_cap * rng.next_double();
        }
      }
    }
  }
  for (int tr = 0; tr < k; ++tr) {
    for (int ac = 0; ac < n; ++ac) {
      for (int tc = 0; tc < k; ++tc) {
        u_row[idx(planted.s_row[tr], ac, tr, tc)] = 0.95 + 0.05 * rng.next_double();
      }
    }
  }
  for (int tc = 0; tc < k; ++tc) {
    for (int ar = 0; ar < n; ++ar) {
      for (int tr = 0; tr < k; ++tr) {
        u_col[idx(ar, planted.s_col[tc], tr, tc)] = 0.95 + 0.05 * rng.next_double();
      }
    }
  }
  if (planted_out) *planted_out = planted;
  return BayesianGame::uniform_types(k, n, n, std::move(u_row), std::move(u_col));
}

}  // namespace cliquenash
