#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

namespace mrgraph {

/// Dense row-major matrix of doubles. Everything in this library operates on
/// small blocks (correlation submatrices, covariance updates), so no attempt
/// is made at blocking or vectorization beyond what the compiler does.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> v;

  Mat() = default;
  Mat(int r, int c, double fill = 0.0)
      : rows(r), cols(c), v(static_cast<std::size_t>(r) * static_cast<std::size_t>(c), fill) {}

  double& operator()(int r, int c) { return v[static_cast<std::size_t>(r) * cols + c]; }
  double operator()(int r, int c) const { return v[static_cast<std::size_t>(r) * cols + c]; }

  static Mat identity(int n) {
    Mat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  bool operator==(const Mat& o) const { return rows == o.rows && cols == o.cols && v == o.v; }
};

/// Cholesky factorization A = L L^T for a symmetric positive definite A.
/// Returns false (L unspecified) on a non-positive or non-finite pivot.
inline bool cholesky(const Mat& a, Mat& l) {
  const int n = a.rows;
  l = Mat(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      if (i == j) {
        if (!(s > 0.0) || !std::isfinite(s)) return false;
        l(i, i) = std::sqrt(s);
      } else {
        l(i, j) = s / l(j, j);
      }
    }
  }
  return true;
}

/// Solve A x = b given the Cholesky factor L of A.
inline std::vector<double> cholesky_solve(const Mat& l, const std::vector<double>& b) {
  const int n = l.rows;
  std::vector<double> x(b);
  for (int i = 0; i < n; ++i) {
    double s = x[i];
    for (int k = 0; k < i; ++k) s -= l(i, k) * x[k];
    x[i] = s / l(i, i);
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = x[i];
    for (int k = i + 1; k < n; ++k) s -= l(k, i) * x[k];
    x[i] = s / l(i, i);
  }
  return x;
}

/// Inverse of an SPD matrix via Cholesky. Returns false if not SPD.
inline bool spd_inverse(const Mat& a, Mat& inv) {
  Mat l;
  if (!cholesky(a, l)) return false;
  const int n = a.rows;
  inv = Mat(n, n);
  std::vector<double> e(n, 0.0);
  for (int j = 0; j < n; ++j) {
    e[j] = 1.0;
    std::vector<double> col = cholesky_solve(l, e);
    e[j] = 0.0;
    for (int i = 0; i < n; ++i) inv(i, j) = col[i];
  }
  return true;
}

/// SPD inverse with one ridge retry: on failure, `ridge` is added to the
/// diagonal. Throws std::runtime_error(what) if the ridged matrix is still
/// not positive definite.
inline Mat spd_inverse_ridged(Mat a, double ridge, const char* what) {
  Mat inv;
  if (spd_inverse(a, inv)) return inv;
  for (int i = 0; i < a.rows; ++i) a(i, i) += ridge;
  if (spd_inverse(a, inv)) return inv;
  throw std::runtime_error(what);
}

}  // namespace mrgraph
