#ifndef CLIQUENASH_LINPROG_HPP
#define CLIQUENASH_LINPROG_HPP

#include <string>
#include <vector>

#include "cliquenash/matrix.hpp"

namespace cliquenash {

/// Dense linear program
///   maximize    objective . v
///   subject to  ineq_lhs v <= ineq_rhs
///               eq_lhs   v  = eq_rhs
///               v >= lower_bounds   (all zeros when empty)
struct LinearProgram {
  std::vector<double> objective;
  Matrix ineq_lhs;
  std::vector<double> ineq_rhs;
  Matrix eq_lhs;
  std::vector<double> eq_rhs;
  std::vector<double> lower_bounds;

  int num_vars() const { return static_cast<int>(objective.size()); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded };

std::string to_string(LpStatus status);

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> point;
  double objective_value = 0.0;
};

/// Two-phase primal simplex with Bland's anti-cycling rule (entering:
/// lowest eligible index; leaving: lowest basis index among minimal
/// ratios). Deterministic: the same program always yields the same
/// solution, bit for bit.
LpSolution solve(const LinearProgram& lp);

}  // namespace cliquenash

#endif
