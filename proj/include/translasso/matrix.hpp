#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "translasso/kernels.hpp"

namespace translasso {

// Dense column-major matrix. Coordinate descent walks columns, so columns
// are kept contiguous.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

  double* col(std::size_t j) { return data.data() + j * rows; }
  const double* col(std::size_t j) const { return data.data() + j * rows; }

  double& operator()(std::size_t i, std::size_t j) { return data[j * rows + i]; }
  double operator()(std::size_t i, std::size_t j) const { return data[j * rows + i]; }
};

// y = X b, accumulated over the nonzero entries of b.
inline std::vector<double> matvec(const Matrix& X, const std::vector<double>& b) {
  if (b.size() != X.cols) throw std::invalid_argument("matvec: dimension mismatch");
  std::vector<double> y(X.rows, 0.0);
  for (std::size_t j = 0; j < X.cols; ++j) {
    if (b[j] != 0.0) kernels::axpy(b[j], X.col(j), y.data(), X.rows);
  }
  return y;
}

// Xᵀ r
inline std::vector<double> tmatvec(const Matrix& X, const std::vector<double>& r) {
  if (r.size() != X.rows) throw std::invalid_argument("tmatvec: dimension mismatch");
  std::vector<double> g(X.cols);
  for (std::size_t j = 0; j < X.cols; ++j) g[j] = kernels::dot(X.col(j), r.data(), X.rows);
  return g;
}

inline Matrix take_rows(const Matrix& X, const std::vector<int>& rows) {
  Matrix out(rows.size(), X.cols);
  for (std::size_t j = 0; j < X.cols; ++j) {
    const double* src = X.col(j);
    double* dst = out.col(j);
    for (std::size_t i = 0; i < rows.size(); ++i) dst[i] = src[rows[i]];
  }
  return out;
}

inline std::vector<double> take(const std::vector<double>& v, const std::vector<int>& idx) {
  std::vector<double> out(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) out[i] = v[idx[i]];
  return out;
}

// In-place lower Cholesky factor; returns false if the matrix is not
// numerically positive definite. Upper triangle is left untouched.
inline bool cholesky_lower(Matrix& A) {
  if (A.rows != A.cols) throw std::invalid_argument("cholesky: matrix not square");
  const std::size_t n = A.rows;
  for (std::size_t j = 0; j < n; ++j) {
    double d = A(j, j);
    for (std::size_t m = 0; m < j; ++m) d -= A(j, m) * A(j, m);
    if (!(d > 0.0)) return false;
    const double ljj = std::sqrt(d);
    A(j, j) = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = A(i, j);
      for (std::size_t m = 0; m < j; ++m) s -= A(i, m) * A(j, m);
      A(i, j) = s / ljj;
    }
  }
  return true;
}

}  // namespace translasso
