#ifndef CLIQUENASH_GAME_HPP
#define CLIQUENASH_GAME_HPP

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cliquenash/matrix.hpp"

namespace cliquenash {

/// Tolerance used for simplex sums and equilibrium slack throughout.
inline constexpr double kEqTolerance = 1e-9;

/// Thrown when a conditioning set carries zero probability mass.
class EmptyConditioningError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Two-player game in normal form. Both payoff matrices share shape
/// and every entry lies in [0,1]; construction rejects anything else.
/// Immutable after construction.
class BimatrixGame {
 public:
  BimatrixGame(Matrix m_row, Matrix m_col,
               std::vector<std::string> labels_row = {},
               std::vector<std::string> labels_col = {});

  const Matrix& m_row() const { return m_row_; }
  const Matrix& m_col() const { return m_col_; }
  int rows() const { return m_row_.rows(); }
  int cols() const { return m_row_.cols(); }

  const std::vector<std::string>& labels_row() const { return labels_row_; }
  const std::vector<std::string>& labels_col() const { return labels_col_; }

  std::string to_json() const;
  static BimatrixGame from_json(const std::string& text);

 private:
  Matrix m_row_;
  Matrix m_col_;
  std::vector<std::string> labels_row_;
  std::vector<std::string> labels_col_;
};

/// Affine-rescale a pair of payoff matrices into [0,1] (per matrix).
/// A constant matrix maps to all 0.5.
BimatrixGame normalize(const Matrix& m_row, const Matrix& m_col);

/// A mixed-strategy pair. Entries are nonnegative and each vector sums
/// to 1 within 1e-9.
class MixedProfile {
 public:
  MixedProfile(std::vector<double> x, std::vector<double> y);

  static MixedProfile pure(int i, int rows, int j, int cols);
  static MixedProfile uniform_over(const std::vector<int>& rows_support, int rows,
                                   const std::vector<int>& cols_support, int cols);

  const std::vector<double>& x() const { return x_; }
  const std::vector<double>& y() const { return y_; }

  std::vector<int> support_x() const;
  std::vector<int> support_y() const;

  std::string to_json() const;
  static MixedProfile from_json(const std::string& text);

 private:
  std::vector<double> x_;
  std::vector<double> y_;
};

/// Witness for an epsilon-equilibrium check: per-player regrets plus
/// the payoffs and value they were computed from.
struct RegretCertificate {
  double regret_row = 0.0;
  double regret_col = 0.0;
  double value = 0.0;
  double payoff_row = 0.0;
  double payoff_col = 0.0;
};

/// x^T M_row y and x^T M_col y.
std::pair<double, double> payoffs(const BimatrixGame& game, const MixedProfile& p);

/// Average of the two players' payoffs.
double value(const BimatrixGame& game, const MixedProfile& p);

/// Best-response gain for each player, clamped at zero.
RegretCertificate regret(const BimatrixGame& game, const MixedProfile& p);

/// True iff max regret is at most eps + 1e-9. Throws on eps < 0.
bool is_eps_equilibrium(const BimatrixGame& game, const MixedProfile& p, double eps);

/// Value conditioned on both players playing inside S:
/// v(x_S, y_S) / (|x_S| |y_S|). Throws EmptyConditioningError when
/// either restricted mass is zero.
double conditional_value(const BimatrixGame& game, const MixedProfile& p,
                         const std::vector<int>& s);

/// Total variation distance between two probability vectors.
double tv_distance(const std::vector<double>& a, const std::vector<double>& b);

/// v restricted to S and renormalized; zero off S. Throws on zero mass.
std::vector<double> restrict_normalize(const std::vector<double>& v,
                                       const std::vector<int>& s);

/// l1 mass of v on the index set S.
double mass_on(const std::vector<double>& v, const std::vector<int>& s);

}  // namespace cliquenash

#endif
