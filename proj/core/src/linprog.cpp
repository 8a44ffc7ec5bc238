#include "cliquenash/linprog.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

namespace cliquenash {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kPhase1Tol = 1e-8;
constexpr double kFeasCheckTol = 1e-7;

void validate(const LinearProgram& lp) {
  const int n = lp.num_vars();
  if (n == 0) throw std::invalid_argument("lp: no variables");
  auto check_block = [n](const Matrix& a, const std::vector<double>& b,
                         const char* what) {
    if (a.rows() != static_cast<int>(b.size())) {
      throw std::invalid_argument(std::string("lp: ") + what + " row count mismatch");
    }
    if (a.rows() > 0 && a.cols() != n) {
      throw std::invalid_argument(std::string("lp: ") + what + " column count mismatch");
    }
    for (double v : a.data()) {
      if (!std::isfinite(v)) throw std::invalid_argument("lp: non-finite coefficient");
    }
    for (double v : b) {
      if (!std::isfinite(v)) throw std::invalid_argument("lp: non-finite rhs");
    }
  };
  check_block(lp.ineq_lhs, lp.ineq_rhs, "ineq");
  check_block(lp.eq_lhs, lp.eq_rhs, "eq");
  for (double v : lp.objective) {
    if (!std::isfinite(v)) throw std::invalid_argument("lp: non-finite objective");
  }
  if (!lp.lower_bounds.empty() &&
      static_cast<int>(lp.lower_bounds.size()) != n) {
    throw std::invalid_argument("lp: lower bound count mismatch");
  }
}

// Dense tableau in minimization form over shifted variables w >= 0.
class Tableau {
 public:
  Tableau(int rows, int cols) : rows_(rows), cols_(cols), a_(static_cast<std::size_t>(rows) * (cols + 1), 0.0) {}

  double& at(int i, int j) { return a_[static_cast<std::size_t>(i) * (cols_ + 1) + j]; }
  double at(int i, int j) const { return a_[static_cast<std::size_t>(i) * (cols_ + 1) + j]; }
  double& rhs(int i) { return a_[static_cast<std::size_t>(i) * (cols_ + 1) + cols_]; }
  double rhs(int i) const { return a_[static_cast<std::size_t>(i) * (cols_ + 1) + cols_]; }
  double* row(int i) { return a_.data() + static_cast<std::size_t>(i) * (cols_ + 1); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  void pivot(int leave_row, int enter_col) {
    double* prow = row(leave_row);
    const double inv = 1.0 / prow[enter_col];
    const int w = cols_ + 1;
    for (int j = 0; j < w; ++j) prow[j] *= inv;
    prow[enter_col] = 1.0;
    for (int i = 0; i < rows_; ++i) {
      if (i == leave_row) continue;
      double* r = row(i);
      const double f = r[enter_col];
      if (f == 0.0) continue;
      for (int j = 0; j < w; ++j) r[j] -= f * prow[j];
      r[enter_col] = 0.0;
    }
  }

 private:
  int rows_;
  int cols_;
  std::vector<double> a_;
};

struct SimplexState {
  Tableau t;
  std::vector<int> basis;
  std::vector<char> eligible;  // per-column: may enter the basis
};

// Reduced costs for the minimization cost vector c over the current basis.
std::vector<double> reduced_costs(const SimplexState& s, const std::vector<double>& c) {
  std::vector<double> r = c;
  for (int i = 0; i < s.t.rows(); ++i) {
    const double cb = c[s.basis[i]];
    if (cb == 0.0) continue;
    for (int j = 0; j < s.t.cols(); ++j) r[j] -= cb * s.t.at(i, j);
  }
  return r;
}

enum class IterResult { Optimal, Unbounded };

// Runs simplex iterations for cost c until optimality or unboundedness.
// Reduced costs are maintained incrementally as an extra work row.
IterResult run_simplex(SimplexState& s, const std::vector<double>& c) {
  std::vector<double> red = reduced_costs(s, c);
  const int max_iters = 400000;
  for (int iter = 0; iter < max_iters; ++iter) {
    // Refresh reduced costs periodically; the incremental updates
    // accumulate roundoff over long runs.
    if (iter > 0 && iter % 512 == 0) red = reduced_costs(s, c);
    // Bland entering: lowest-index eligible column with negative reduced cost.
    int enter = -1;
    for (int j = 0; j < s.t.cols(); ++j) {
      if (s.eligible[j] && red[j] < -kPivotTol) {
        enter = j;
        break;
      }
    }
    if (enter < 0) return IterResult::Optimal;

    // Ratio test; ties broken by lowest basis variable index (Bland).
    int leave = -1;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (int i = 0; i < s.t.rows(); ++i) {
      const double a = s.t.at(i, enter);
      if (a > kPivotTol) {
        const double ratio = s.t.rhs(i) / a;
        if (ratio < best_ratio - kPivotTol ||
            (ratio < best_ratio + kPivotTol &&
             (leave < 0 || s.basis[i] < s.basis[leave]))) {
          best_ratio = ratio;
          leave = i;
        }
      }
    }
    if (leave < 0) return IterResult::Unbounded;

    const double factor = red[enter];
    s.t.pivot(leave, enter);
    s.basis[leave] = enter;
    // Update reduced costs against the normalized pivot row.
    if (factor != 0.0) {
      for (int j = 0; j < s.t.cols(); ++j) red[j] -= factor * s.t.at(leave, j);
      red[enter] = 0.0;
    }
  }
  throw std::runtime_error("lp: iteration limit exceeded");
}

}  // namespace

std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
  }
  return "unknown";
}

LpSolution solve(const LinearProgram& lp) {
  validate(lp);
  const int n = lp.num_vars();
  const int m_ineq = lp.ineq_lhs.rows();
  const int m_eq = lp.eq_lhs.rows();
  const int m = m_ineq + m_eq;

  std::vector<double> lb = lp.lower_bounds;
  if (lb.empty()) lb.assign(n, 0.0);

  // Shift v = w + lb so that w >= 0, fold the shift into the rhs.
  std::vector<double> rhs(m, 0.0);
  for (int i = 0; i < m_ineq; ++i) {
    double shift = 0.0;
    for (int j = 0; j < n; ++j) shift += lp.ineq_lhs(i, j) * lb[j];
    rhs[i] = lp.ineq_rhs[i] - shift;
  }
  for (int i = 0; i < m_eq; ++i) {
    double shift = 0.0;
    for (int j = 0; j < n; ++j) shift += lp.eq_lhs(i, j) * lb[j];
    rhs[m_ineq + i] = lp.eq_rhs[i] - shift;
  }

  // Column layout: structural | slack (one per ineq) | artificial.
  // Every row is written as an equation; rows with negative rhs are
  // negated afterwards, which may flip a slack to a surplus and force
  // an artificial basis column for that row.
  std::vector<int> art_rows;
  for (int i = 0; i < m_ineq; ++i) {
    if (rhs[i] < 0.0) art_rows.push_back(i);
  }
  for (int i = 0; i < m_eq; ++i) art_rows.push_back(m_ineq + i);

  const int n_art = static_cast<int>(art_rows.size());
  const int cols = n + m_ineq + n_art;
  SimplexState s{Tableau(m, cols), std::vector<int>(m, -1),
                 std::vector<char>(cols, 1)};

  for (int i = 0; i < m_ineq; ++i) {
    const double sign = rhs[i] < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) s.t.at(i, j) = sign * lp.ineq_lhs(i, j);
    s.t.at(i, n + i) = sign;  // slack (negated rows get a surplus)
    s.t.rhs(i) = sign * rhs[i];
  }
  for (int i = 0; i < m_eq; ++i) {
    const int row = m_ineq + i;
    const double sign = rhs[row] < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < n; ++j) s.t.at(row, j) = sign * lp.eq_lhs(i, j);
    s.t.rhs(row) = sign * rhs[row];
  }

  // Initial basis: slacks where available, artificials elsewhere.
  std::vector<double> phase1_cost(cols, 0.0);
  {
    int art = 0;
    std::vector<char> needs_art(m, 0);
    for (int r : art_rows) needs_art[r] = 1;
    for (int i = 0; i < m; ++i) {
      if (!needs_art[i]) {
        s.basis[i] = n + i;  // slack basic at rhs >= 0
      } else {
        const int col = n + m_ineq + art;
        s.t.at(i, col) = 1.0;
        s.basis[i] = col;
        phase1_cost[col] = 1.0;
        ++art;
      }
    }
  }

  LpSolution sol;

  if (n_art > 0) {
    run_simplex(s, phase1_cost);
    double infeas = 0.0;
    for (int i = 0; i < m; ++i) {
      if (s.basis[i] >= n + m_ineq) infeas += s.t.rhs(i);
    }
    if (infeas > kPhase1Tol) {
      sol.status = LpStatus::Infeasible;
      return sol;
    }
    // Drive remaining (degenerate, zero-valued) artificials out of the
    // basis where possible. Rows that cannot pivot are redundant and
    // stay inert through phase 2.
    for (int i = 0; i < m; ++i) {
      if (s.basis[i] < n + m_ineq) continue;
      for (int j = 0; j < n + m_ineq; ++j) {
        if (std::abs(s.t.at(i, j)) > 1e-7) {
          s.t.pivot(i, j);
          s.basis[i] = j;
          break;
        }
      }
    }
    for (int j = n + m_ineq; j < cols; ++j) s.eligible[j] = 0;
  }

  std::vector<double> phase2_cost(cols, 0.0);
  for (int j = 0; j < n; ++j) phase2_cost[j] = -lp.objective[j];  // maximize

  if (run_simplex(s, phase2_cost) == IterResult::Unbounded) {
    sol.status = LpStatus::Unbounded;
    return sol;
  }

  std::vector<double> w(n, 0.0);
  for (int i = 0; i < m; ++i) {
    if (s.basis[i] < n) w[s.basis[i]] = s.t.rhs(i);
  }
  sol.point.resize(n);
  double obj = 0.0;
  for (int j = 0; j < n; ++j) {
    sol.point[j] = w[j] + lb[j];
    obj += lp.objective[j] * sol.point[j];
  }
  sol.objective_value = obj;
  sol.status = LpStatus::Optimal;

  // Postcondition: the reported point satisfies every constraint.
  for (int i = 0; i < m_ineq; ++i) {
    double lhs = 0.0;
    for (int j = 0; j < n; ++j) lhs += lp.ineq_lhs(i, j) * sol.point[j];
    if (lhs > lp.ineq_rhs[i] + kFeasCheckTol) {
      throw std::runtime_error("lp: optimal point violates inequality");
    }
  }
  for (int i = 0; i < m_eq; ++i) {
    double lhs = 0.0;
    for (int j = 0; j < n; ++j) lhs += lp.eq_lhs(i, j) * sol.point[j];
    if (std::abs(lhs - lp.eq_rhs[i]) > kFeasCheckTol) {
      throw std::runtime_error("lp: optimal point violates equality");
    }
  }
  return sol;
}

}  // namespace cliquenash
