#pragma once

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mrgraph/linalg.hpp"

namespace mrgraph {

namespace detail {
inline void check_complete(const Mat& data) {
  for (double v : data.v)
    if (!std::isfinite(v)) throw std::invalid_argument("complete data required");
}

inline std::vector<double> column_means(const Mat& data) {
  std::vector<double> mu(data.cols, 0.0);
  for (int r = 0; r < data.rows; ++r)
    for (int c = 0; c < data.cols; ++c) mu[c] += data(r, c);
  for (double& m : mu) m /= data.rows;
  return mu;
}
}  // namespace detail

/// Correlation matrix from a covariance matrix; the diagonal is set to
/// exactly 1 and off-diagonal entries are clamped into [-1, 1].
inline Mat correlation_from_covariance(const Mat& cov) {
  const int m = cov.rows;
  Mat corr(m, m);
  for (int i = 0; i < m; ++i) {
    if (!(cov(i, i) > 0.0)) throw std::invalid_argument("zero-variance column");
    corr(i, i) = 1.0;
  }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      const double r = cov(i, j) / std::sqrt(cov(i, i) * cov(j, j));
      corr(i, j) = corr(j, i) = std::clamp(r, -1.0, 1.0);
    }
  return corr;
}

/// Plain Pearson correlation matrix of the columns.
inline Mat pearson_correlation(const Mat& data) {
  detail::check_complete(data);
  if (data.rows < 2) throw std::invalid_argument("need at least two samples");
  const std::vector<double> mu = detail::column_means(data);
  const int m = data.cols;
  Mat cov(m, m);
  for (int r = 0; r < data.rows; ++r)
    for (int i = 0; i < m; ++i) {
      const double di = data(r, i) - mu[i];
      for (int j = i; j < m; ++j) cov(i, j) += di * (data(r, j) - mu[j]);
    }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) cov(j, i) = cov(i, j);
  return correlation_from_covariance(cov);
}

struct RobustEstimate {
  std::vector<double> mu;
  Mat cov;
  Mat corr;
  int iterations = 0;
  bool converged = false;
};

/// Weight kernel of the reweighting scheme:
///   phi_beta(x; mu, V) = exp(-beta/2 * (x-mu)' V^{-1} (x-mu)).
/// Exposed for tests; `chol` is the Cholesky factor of V.
inline double robust_weight(const std::vector<double>& x, const std::vector<double>& mu,
                            const Mat& chol, double beta) {
  std::vector<double> d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = x[i] - mu[i];
  const std::vector<double> z = cholesky_solve(chol, d);
  double maha2 = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) maha2 += d[i] * z[i];
  return std::exp(-0.5 * beta * maha2);
}

/// Iteratively reweighted mean vector and covariance matrix. Each pass
/// recomputes
///   mu    <- sum_i w_i x_i / sum_i w_i
///   V     <- (1 + beta) * sum_i w_i (x_i - mu_t)(x_i - mu_t)' / sum_i w_i
/// with w_i = phi_beta(x_i; mu_t, V_t), until the max-norm change of (mu, V)
/// drops below tol or max_iter passes run out. beta = 0 converges to the
/// sample mean and the 1/n-scaled covariance exactly. A non-invertible V
/// picks up a ridge of 1e-8 * trace(V)/M and iteration continues.
///
/// The start point is the coordinatewise median with a MAD-based diagonal
/// scale: a classical start lets clustered outliers inflate the initial V
/// enough to cap their own Mahalanobis distances near n/k, which pins small
/// beta values to a contaminated fixed point (the usual masking effect).
inline RobustEstimate robust_mean_cov(const Mat& data, double beta, double tol = 1e-6,
                                      int max_iter = 200) {
  if (!(beta >= 0.0 && beta <= 1.0)) throw std::invalid_argument("beta must be in [0,1]");
  detail::check_complete(data);
  const int n = data.rows;
  const int m = data.cols;
  if (n < m + 1) throw std::invalid_argument("need at least M+1 samples");

  const auto median_of = [](std::vector<double>& v) {
    const std::size_t h = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + h, v.end());
    double med = v[h];
    if (v.size() % 2 == 0) {
      std::nth_element(v.begin(), v.begin() + h - 1, v.begin() + h);
      med = 0.5 * (med + v[h - 1]);
    }
    return med;
  };

  RobustEstimate est;
  est.mu.assign(m, 0.0);
  est.cov = Mat(m, m);
  const std::vector<double> means = detail::column_means(data);
  std::vector<double> column(n);
  for (int c = 0; c < m; ++c) {
    double var = 0.0;
    for (int r = 0; r < n; ++r) {
      column[r] = data(r, c);
      var += (data(r, c) - means[c]) * (data(r, c) - means[c]);
    }
    var /= n;
    if (!(var > 0.0)) throw std::invalid_argument("zero-variance column");
    const double med = median_of(column);
    est.mu[c] = med;
    for (int r = 0; r < n; ++r) column[r] = std::fabs(data(r, c) - med);
    const double mad = median_of(column);
    const double scale = mad > 0.0 ? 1.4826 * mad : std::sqrt(var);
    est.cov(c, c) = scale * scale;
  }

  std::vector<double> x(m), mu_next(m);
  Mat cov_next(m, m);
  for (int it = 1; it <= max_iter; ++it) {
    est.iterations = it;

    Mat chol;
    Mat v = est.cov;
    double trace = 0.0;
    for (int i = 0; i < m; ++i) trace += v(i, i);
    int tries = 0;
    while (!cholesky(v, chol)) {
      if (++tries > 20) throw std::runtime_error("covariance matrix became singular");
      for (int i = 0; i < m; ++i) v(i, i) += 1e-8 * trace / m;
    }

    double wsum = 0.0;
    std::fill(mu_next.begin(), mu_next.end(), 0.0);
    cov_next = Mat(m, m);
    for (int r = 0; r < n; ++r) {
      for (int i = 0; i < m; ++i) x[i] = data(r, i);
      const double w = robust_weight(x, est.mu, chol, beta);
      wsum += w;
      for (int i = 0; i < m; ++i) {
        mu_next[i] += w * x[i];
        const double di = x[i] - est.mu[i];
        for (int j = i; j < m; ++j) cov_next(i, j) += w * di * (x[j] - est.mu[j]);
      }
    }
    if (!(wsum > 0.0)) throw std::runtime_error("all observation weights collapsed to zero");
    const double scale = (1.0 + beta) / wsum;
    double change = 0.0;
    for (int i = 0; i < m; ++i) {
      mu_next[i] /= wsum;
      change = std::max(change, std::fabs(mu_next[i] - est.mu[i]));
      for (int j = i; j < m; ++j) {
        cov_next(i, j) *= scale;
        cov_next(j, i) = cov_next(i, j);
        change = std::max(change, std::fabs(cov_next(i, j) - est.cov(i, j)));
      }
    }
    est.mu = mu_next;
    est.cov = cov_next;
    if (change < tol) {
      est.converged = true;
      break;
    }
  }
  est.corr = correlation_from_covariance(est.cov);
  return est;
}

/// Robust correlation matrix with the library defaults (tol 1e-6, 200 passes).
inline Mat robust_correlation_matrix(const Mat& data, double beta) {
  return robust_mean_cov(data, beta).corr;
}

}  // namespace mrgraph
