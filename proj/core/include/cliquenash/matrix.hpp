#ifndef CLIQUENASH_MATRIX_HPP
#define CLIQUENASH_MATRIX_HPP

#include <cassert>
#include <cstddef>
#include <vector>

namespace cliquenash {

/// Dense row-major matrix of doubles. Just enough linear algebra for
/// payoff evaluation; games in scope stay below ~10^4 strategies per
/// side, so everything is kept flat and contiguous.
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols),
        data_(static_cast<std::size_t>(rows) * cols, fill) {}

  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) {
    return data_[static_cast<std::size_t>(i) * cols_ + j];
  }
  double operator()(int i, int j) const {
    return data_[static_cast<std::size_t>(i) * cols_ + j];
  }

  const std::vector<double>& data() const { return data_; }
  std::vector<double>& data() { return data_; }

  double* row_ptr(int i) { return data_.data() + static_cast<std::size_t>(i) * cols_; }
  const double* row_ptr(int i) const {
    return data_.data() + static_cast<std::size_t>(i) * cols_;
  }

  /// y = A v
  std::vector<double> mul_right(const std::vector<double>& v) const;
  /// y = A^T v  (i.e. row vector v times A)
  std::vector<double> mul_left(const std::vector<double>& v) const;
  /// x^T A y
  double bilinear(const std::vector<double>& x, const std::vector<double>& y) const;

  bool operator==(const Matrix& other) const = default;

 private:
  int rows_;
  int cols_;
  std::vector<double> data_;
};

inline Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m(static_cast<int>(rows.size()),
           rows.empty() ? 0 : static_cast<int>(rows[0].size()));
  for (int i = 0; i < m.rows(); ++i) {
    assert(static_cast<int>(rows[i].size()) == m.cols());
    for (int j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

inline std::vector<double> Matrix::mul_right(const std::vector<double>& v) const {
  assert(static_cast<int>(v.size()) == cols_);
  std::vector<double> out(rows_, 0.0);
  for (int i = 0; i < rows_; ++i) {
    const double* row = row_ptr(i);
    double acc = 0.0;
    for (int j = 0; j < cols_; ++j) acc += row[j] * v[j];
    out[i] = acc;
  }
  return out;
}

inline std::vector<double> Matrix::mul_left(const std::vector<double>& v) const {
  assert(static_cast<int>(v.size()) == rows_);
  std::vector<double> out(cols_, 0.0);
  for (int i = 0; i < rows_; ++i) {
    const double xi = v[i];
    if (xi == 0.0) continue;
    const double* row = row_ptr(i);
    for (int j = 0; j < cols_; ++j) out[j] += xi * row[j];
  }
  return out;
}

inline double Matrix::bilinear(const std::vector<double>& x,
                               const std::vector<double>& y) const {
  assert(static_cast<int>(x.size()) == rows_);
  assert(static_cast<int>(y.size()) == cols_);
  double acc = 0.0;
  for (int i = 0; i < rows_; ++i) {
    if (x[i] == 0.0) continue;
    const double* row = row_ptr(i);
    double dot = 0.0;
    for (int j = 0; j < cols_; ++j) dot += row[j] * y[j];
    acc += x[i] * dot;
  }
  return acc;
}

}  // namespace cliquenash

#endif
