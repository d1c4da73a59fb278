#pragma once

#include <cmath>
#include <vector>

#include "circa/common.hpp"

namespace circa {

/// Small dense row-major matrix. Everything in this library runs at desk
/// scale (n in the tens), so a plain vector-backed type beats pulling in a
/// linear-algebra dependency.
class Matrix {
 public:
  Matrix() : rows_(0), cols_(0) {}
  Matrix(int rows, int cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(static_cast<size_t>(rows) * cols, fill) {}

  static Matrix identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  double& operator()(int i, int j) { return data_[static_cast<size_t>(i) * cols_ + j]; }
  double operator()(int i, int j) const { return data_[static_cast<size_t>(i) * cols_ + j]; }

  Matrix transposed() const {
    Matrix t(cols_, rows_);
    for (int i = 0; i < rows_; ++i)
      for (int j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
    return t;
  }

  double row_sum(int i) const {
    double s = 0.0;
    for (int j = 0; j < cols_; ++j) s += (*this)(i, j);
    return s;
  }

  double col_sum(int j) const {
    double s = 0.0;
    for (int i = 0; i < rows_; ++i) s += (*this)(i, j);
    return s;
  }

  double total() const {
    double s = 0.0;
    for (double v : data_) s += v;
    return s;
  }

  bool operator==(const Matrix& other) const {
    return rows_ == other.rows_ && cols_ == other.cols_ && data_ == other.data_;
  }

 private:
  int rows_, cols_;
  std::vector<double> data_;
};

/// Left-multiply a row vector: returns x^T * m.
inline std::vector<double> row_times(const std::vector<double>& x, const Matrix& m) {
  std::vector<double> out(m.cols(), 0.0);
  for (int i = 0; i < m.rows(); ++i) {
    const double xi = x[i];
    if (xi == 0.0) continue;
    for (int j = 0; j < m.cols(); ++j) out[j] += xi * m(i, j);
  }
  return out;
}

/// Gaussian elimination with partial pivoting. Throws Validation on a
/// (numerically) singular system.
inline std::vector<double> solve_linear(Matrix a, std::vector<double> b) {
  const int n = a.rows();
  if (a.cols() != n || static_cast<int>(b.size()) != n)
    fail(ErrorKind::DimensionMismatch, "solve_linear: non-square system");
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(a(r, col)) > std::abs(a(pivot, col))) pivot = r;
    if (std::abs(a(pivot, col)) < 1e-14)
      fail(ErrorKind::Validation, "solve_linear: singular system");
    if (pivot != col) {
      for (int j = 0; j < n; ++j) std::swap(a(pivot, j), a(col, j));
      std::swap(b[pivot], b[col]);
    }
    for (int r = col + 1; r < n; ++r) {
      const double f = a(r, col) / a(col, col);
      if (f == 0.0) continue;
      for (int j = col; j < n; ++j) a(r, j) -= f * a(col, j);
      b[r] -= f * b[col];
    }
  }
  std::vector<double> x(n, 0.0);
  for (int i = n - 1; i >= 0; --i) {
    double s = b[i];
    for (int j = i + 1; j < n; ++j) s -= a(i, j) * x[j];
    x[i] = s / a(i, i);
  }
  return x;
}

}  // namespace circa
