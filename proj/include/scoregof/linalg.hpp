#pragma once

// Minimal dense symmetric linear algebra: enough for the 2x2 Fisher solves
// behind projections and the small Lambda * Sigma0^{-1} * Lambda quadratic
// forms. Positive definiteness is established by Cholesky.

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace scoregof {

class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
  }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& at(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double at(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  bool symmetric(double tol = 0.0) const {
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i) {
      for (std::size_t j = i + 1; j < cols_; ++j) {
        if (std::abs(at(i, j) - at(j, i)) > tol) return false;
      }
    }
    return true;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

// Lower-triangular Cholesky factor of a symmetric matrix; returns false if
// the matrix is not (numerically) positive definite.
inline bool cholesky_factor(const Matrix& a, Matrix& lower) {
  const std::size_t n = a.rows();
  if (n != a.cols()) return false;
  lower = Matrix(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      double s = a.at(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= lower.at(i, k) * lower.at(j, k);
      if (i == j) {
        if (!(s > 0.0)) return false;
        lower.at(i, i) = std::sqrt(s);
      } else {
        lower.at(i, j) = s / lower.at(j, j);
      }
    }
  }
  return true;
}

inline std::vector<double> cholesky_solve(const Matrix& lower, std::vector<double> rhs) {
  const std::size_t n = lower.rows();
  if (rhs.size() != n) throw std::invalid_argument("cholesky_solve: size mismatch");
  // forward: L y = b
  for (std::size_t i = 0; i < n; ++i) {
    double s = rhs[i];
    for (std::size_t k = 0; k < i; ++k) s -= lower.at(i, k) * rhs[k];
    rhs[i] = s / lower.at(i, i);
  }
  // backward: L^T x = y
  for (std::size_t ii = n; ii-- > 0;) {
    double s = rhs[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= lower.at(k, ii) * rhs[k];
    rhs[ii] = s / lower.at(ii, ii);
  }
  return rhs;
}

inline bool is_positive_definite(const Matrix& a) {
  Matrix l;
  return a.symmetric(1e-12) && cholesky_factor(a, l);
}

inline double quadratic_form(const std::vector<double>& x, const Matrix& w) {
  const std::size_t n = x.size();
  if (w.rows() != n || w.cols() != n) {
    throw std::invalid_argument("quadratic_form: dimension mismatch");
  }
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) row += w.at(i, j) * x[j];
    acc += x[i] * row;
  }
  return acc;
}

inline Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("matmul: dimension mismatch");
  Matrix out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a.at(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        out.at(i, j) += aik * b.at(k, j);
      }
    }
  }
  return out;
}

// Inverse via Cholesky; requires symmetric positive definite input.
inline Matrix spd_inverse(const Matrix& a) {
  Matrix lower;
  if (!cholesky_factor(a, lower)) {
    throw std::domain_error("spd_inverse: matrix is not positive definite");
  }
  const std::size_t n = a.rows();
  Matrix inv(n, n);
  std::vector<double> e(n, 0.0);
  for (std::size_t j = 0; j < n; ++j) {
    e.assign(n, 0.0);
    e[j] = 1.0;
    const std::vector<double> col = cholesky_solve(lower, e);
    for (std::size_t i = 0; i < n; ++i) inv.at(i, j) = col[i];
  }
  return inv;
}

}  // namespace scoregof
