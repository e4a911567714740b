#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ldarlct {

/// Dense row-major matrix of doubles.
class Matrix {
public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  double &operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

  std::span<const double> values() const noexcept { return data_; }

  friend bool operator==(const Matrix &, const Matrix &) = default;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix multiply(const Matrix &lhs, const Matrix &rhs);

double frobenius_distance(const Matrix &a, const Matrix &b);

/// Numerical rank by Gaussian elimination with partial pivoting. A pivot
/// counts when its magnitude exceeds rel_tol times the largest entry of the
/// input.
int numeric_rank(Matrix m, double rel_tol = 1e-10);

inline constexpr double kColumnSumTolerance = 1e-12;

/// Non-negative matrix whose columns each sum to one.
class StochasticMatrix {
public:
  StochasticMatrix() = default;

  /// Throws Error(invalid_argument) on a negative entry or a column sum off by
  /// more than kColumnSumTolerance.
  explicit StochasticMatrix(Matrix m);

  static bool is_column_stochastic(const Matrix &m, double tol = kColumnSumTolerance);

  std::size_t rows() const noexcept { return m_.rows(); }
  std::size_t cols() const noexcept { return m_.cols(); }
  double operator()(std::size_t r, std::size_t c) const { return m_(r, c); }
  const Matrix &matrix() const noexcept { return m_; }

  friend bool operator==(const StochasticMatrix &, const StochasticMatrix &) = default;

private:
  Matrix m_;
};

} // namespace ldarlct
