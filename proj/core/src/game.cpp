#include "cliquenash/game.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <json.hpp>

namespace cliquenash {

using nlohmann::json;

namespace {

void check_unit_interval(const Matrix& m, const char* name) {
  for (double v : m.data()) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw std::invalid_argument(std::string(name) +
                                  ": payoff entries must lie in [0,1]");
    }
  }
}

std::vector<double> vec_from_json(const json& j) {
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(v.get<double>());
  return out;
}

Matrix matrix_from_json(const json& j, int rows, int cols) {
  if (static_cast<int>(j.size()) != rows) {
    throw std::invalid_argument("matrix row count mismatch");
  }
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(j[i].size()) != cols) {
      throw std::invalid_argument("matrix column count mismatch");
    }
    for (int jj = 0; jj < cols; ++jj) m(i, jj) = j[i][jj].get<double>();
  }
  return m;
}

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace

BimatrixGame::BimatrixGame(Matrix m_row, Matrix m_col,
                           std::vector<std::string> labels_row,
                           std::vector<std::string> labels_col)
    : m_row_(std::move(m_row)), m_col_(std::move(m_col)),
      labels_row_(std::move(labels_row)), labels_col_(std::move(labels_col)) {
  if (m_row_.rows() != m_col_.rows() || m_row_.cols() != m_col_.cols()) {
    throw std::invalid_argument("payoff matrices must share shape");
  }
  if (m_row_.rows() == 0 || m_row_.cols() == 0) {
    throw std::invalid_argument("game must have at least one strategy per side");
  }
  check_unit_interval(m_row_, "m_row");
  check_unit_interval(m_col_, "m_col");
  if (!labels_row_.empty() && static_cast<int>(labels_row_.size()) != rows()) {
    throw std::invalid_argument("row label count mismatch");
  }
  if (!labels_col_.empty() && static_cast<int>(labels_col_.size()) != cols()) {
    throw std::invalid_argument("column label count mismatch");
  }
}

std::string BimatrixGame::to_json() const {
  json j;
  j["rows"] = rows();
  j["cols"] = cols();
  j["m_row"] = matrix_to_json(m_row_);
  j["m_col"] = matrix_to_json(m_col_);
  return j.dump();
}

BimatrixGame BimatrixGame::from_json(const std::string& text) {
  json j = json::parse(text);
  const int rows = j.at("rows").get<int>();
  const int cols = j.at("cols").get<int>();
  return BimatrixGame(matrix_from_json(j.at("m_row"), rows, cols),
                      matrix_from_json(j.at("m_col"), rows, cols));
}

BimatrixGame normalize(const Matrix& m_row, const Matrix& m_col) {
  auto rescale = [](const Matrix& m) {
    double lo = std::numeric_limits<double>::infinity();
    double hi = -std::numeric_limits<double>::infinity();
    for (double v : m.data()) {
      if (!std::isfinite(v)) throw std::invalid_argument("non-finite payoff");
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    Matrix out(m.rows(), m.cols());
    if (hi - lo < 1e-300) {
      for (double& v : out.data()) v = 0.5;
      return out;
    }
    for (int i = 0; i < m.rows(); ++i) {
      for (int j = 0; j < m.cols(); ++j) out(i, j) = (m(i, j) - lo) / (hi - lo);
    }
    return out;
  };
  return BimatrixGame(rescale(m_row), rescale(m_col));
}

namespace {

void check_probability_vector(const std::vector<double>& v, const char* name) {
  if (v.empty()) throw std::invalid_argument(std::string(name) + ": empty vector");
  double sum = 0.0;
  for (double e : v) {
    if (!(e >= 0.0)) {
      throw std::invalid_argument(std::string(name) + ": negative probability");
    }
    sum += e;
  }
  if (std::abs(sum - 1.0) > kEqTolerance) {
    throw std::invalid_argument(std::string(name) + ": probabilities must sum to 1");
  }
}

}  // namespace

MixedProfile::MixedProfile(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  check_probability_vector(x_, "x");
  check_probability_vector(y_, "y");
}

MixedProfile MixedProfile::pure(int i, int rows, int j, int cols) {
  std::vector<double> x(rows, 0.0), y(cols, 0.0);
  x.at(i) = 1.0;
  y.at(j) = 1.0;
  return MixedProfile(std::move(x), std::move(y));
}

MixedProfile MixedProfile::uniform_over(const std::vector<int>& rows_support, int rows,
                                        const std::vector<int>& cols_support, int cols) {
  std::vector<double> x(rows, 0.0), y(cols, 0.0);
  if (rows_support.empty() || cols_support.empty()) {
    throw std::invalid_argument("uniform_over: empty support");
  }
  for (int i : rows_support) x.at(i) += 1.0 / rows_support.size();
  for (int j : cols_support) y.at(j) += 1.0 / cols_support.size();
  return MixedProfile(std::move(x), std::move(y));
}

std::vector<int> MixedProfile::support_x() const {
  std::vector<int> s;
  for (int i = 0; i < static_cast<int>(x_.size()); ++i) {
    if (x_[i] > 0.0) s.push_back(i);
  }
  return s;
}

std::vector<int> MixedProfile::support_y() const {
  std::vector<int> s;
  for (int j = 0; j < static_cast<int>(y_.size()); ++j) {
    if (y_[j] > 0.0) s.push_back(j);
  }
  return s;
}

std::string MixedProfile::to_json() const {
  json j;
  j["x"] = x_;
  j["y"] = y_;
  return j.dump();
}

MixedProfile MixedProfile::from_json(const std::string& text) {
  json j = json::parse(text);
  return MixedProfile(vec_from_json(j.at("x")), vec_from_json(j.at("y")));
}

std::pair<double, double> payoffs(const BimatrixGame& game, const MixedProfile& p) {
  if (static_cast<int>(p.x().size()) != game.rows() ||
      static_cast<int>(p.y().size()) != game.cols()) {
    throw std::invalid_argument("profile dimensions do not match game");
  }
  return {game.m_row().bilinear(p.x(), p.y()), game.m_col().bilinear(p.x(), p.y())};
}

double value(const BimatrixGame& game, const MixedProfile& p) {
  auto [pr, pc] = payoffs(game, p);
  return 0.5 * (pr + pc);
}

RegretCertificate regret(const BimatrixGame& game, const MixedProfile& p) {
  auto [pr, pc] = payoffs(game, p);

  // Row deviations: best e_i^T M_row y.
  const std::vector<double> row_dev = game.m_row().mul_right(p.y());
  const double best_row = *std::max_element(row_dev.begin(), row_dev.end());
  // Column deviations: best x^T M_col e_j.
  const std::vector<double> col_dev = game.m_col().mul_left(p.x());
  const double best_col = *std::max_element(col_dev.begin(), col_dev.end());

  RegretCertificate cert;
  cert.payoff_row = pr;
  cert.payoff_col = pc;
  cert.value = 0.5 * (pr + pc);
  cert.regret_row = std::max(0.0, best_row - pr);
  cert.regret_col = std::max(0.0, best_col - pc);
  return cert;
}

bool is_eps_equilibrium(const BimatrixGame& game, const MixedProfile& p, double eps) {
  if (eps < 0.0) throw std::invalid_argument("eps must be nonnegative");
  const RegretCertificate cert = regret(game, p);
  return std::max(cert.regret_row, cert.regret_col) <= eps + kEqTolerance;
}

double conditional_value(const BimatrixGame& game, const MixedProfile& p,
                         const std::vector<int>& s) {
  if (static_cast<int>(p.x().size()) != game.rows() ||
      static_cast<int>(p.y().size()) != game.cols()) {
    throw std::invalid_argument("profile dimensions do not match game");
  }
  std::vector<double> xs(game.rows(), 0.0), ys(game.cols(), 0.0);
  double mx = 0.0, my = 0.0;
  for (int i : s) {
    if (i < game.rows()) {
      xs[i] = p.x()[i];
      mx += xs[i];
    }
    if (i < game.cols()) {
      ys[i] = p.y()[i];
      my += ys[i];
    }
  }
  if (mx <= 0.0 || my <= 0.0) {
    throw EmptyConditioningError("conditional value undefined: zero mass on S");
  }
  const double vr = game.m_row().bilinear(xs, ys);
  const double vc = game.m_col().bilinear(xs, ys);
  return 0.5 * (vr + vc) / (mx * my);
}

double tv_distance(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw std::invalid_argument("tv_distance: length mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]);
  return 0.5 * acc;
}

std::vector<double> restrict_normalize(const std::vector<double>& v,
                                       const std::vector<int>& s) {
  std::vector<double> out(v.size(), 0.0);
  double mass = 0.0;
  for (int i : s) {
    out.at(i) = v.at(i);
    mass += v.at(i);
  }
  if (mass <= 0.0) {
    throw EmptyConditioningError("restrict_normalize: zero mass on S");
  }
  for (double& e : out) e /= mass;
  return out;
}

double mass_on(const std::vector<double>& v, const std::vector<int>& s) {
  double mass = 0.0;
  for (int i : s) mass += v.at(i);
  return mass;
}

}  // namespace cliquenash
