#include "ldarlct/matrix.hpp"

#include "ldarlct/error.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace ldarlct {

Matrix multiply(const Matrix &lhs, const Matrix &rhs) {
  require(lhs.cols() == rhs.rows(), ErrorCode::invalid_argument,
          "matrix product dimension mismatch");
  Matrix out(lhs.rows(), rhs.cols());
  for (std::size_t i = 0; i < lhs.rows(); ++i) {
    for (std::size_t k = 0; k < lhs.cols(); ++k) {
      const double a = lhs(i, k);
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < rhs.cols(); ++j) out(i, j) += a * rhs(k, j);
    }
  }
  return out;
}

double frobenius_distance(const Matrix &a, const Matrix &b) {
  require(a.rows() == b.rows() && a.cols() == b.cols(), ErrorCode::invalid_argument,
          "frobenius distance dimension mismatch");
  double sum = 0.0;
  const auto av = a.values();
  const auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) sum += (av[i] - bv[i]) * (av[i] - bv[i]);
  return std::sqrt(sum);
}

int numeric_rank(Matrix m, double rel_tol) {
  const std::size_t rows = m.rows(), cols = m.cols();
  double scale = 0.0;
  for (double v : m.values()) scale = std::max(scale, std::abs(v));
  if (scale == 0.0) return 0;
  const double threshold = rel_tol * scale;

  int rank = 0;
  std::size_t pivot_row = 0;
  for (std::size_t c = 0; c < cols && pivot_row < rows; ++c) {
    std::size_t best = pivot_row;
    for (std::size_t r = pivot_row + 1; r < rows; ++r)
      if (std::abs(m(r, c)) > std::abs(m(best, c))) best = r;
    if (std::abs(m(best, c)) <= threshold) continue;
    if (best != pivot_row)
      for (std::size_t k = 0; k < cols; ++k) std::swap(m(best, k), m(pivot_row, k));
    for (std::size_t r = pivot_row + 1; r < rows; ++r) {
      const double factor = m(r, c) / m(pivot_row, c);
      if (factor == 0.0) continue;
      for (std::size_t k = c; k < cols; ++k) m(r, k) -= factor * m(pivot_row, k);
    }
    ++pivot_row;
    ++rank;
  }
  return rank;
}

StochasticMatrix::StochasticMatrix(Matrix m) : m_(std::move(m)) {
  for (std::size_t c = 0; c < m_.cols(); ++c) {
    double sum = 0.0;
    for (std::size_t r = 0; r < m_.rows(); ++r) {
      const double v = m_(r, c);
      if (!(v >= 0.0))
        fail(ErrorCode::invalid_argument, "stochastic matrix has negative or NaN entry at (" +
                                              std::to_string(r) + ", " + std::to_string(c) + ")");
      sum += v;
    }
    if (std::abs(sum - 1.0) > kColumnSumTolerance)
      fail(ErrorCode::invalid_argument,
           "stochastic matrix column " + std::to_string(c) + " does not sum to 1");
  }
}

bool StochasticMatrix::is_column_stochastic(const Matrix &m, double tol) {
  for (std::size_t c = 0; c < m.cols(); ++c) {
    double sum = 0.0;
    for (std::size_t r = 0; r < m.rows(); ++r) {
      if (!(m(r, c) >= 0.0)) return false;
      sum += m(r, c);
    }
    if (std::abs(sum - 1.0) > tol) return false;
  }
  return true;
}

} // namespace ldarlct
