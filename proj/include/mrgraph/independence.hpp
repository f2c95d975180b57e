#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <vector>

#include "mrgraph/linalg.hpp"
#include "mrgraph/stats.hpp"

namespace mrgraph {

/// Sufficient statistic for the Gaussian tests: a correlation matrix and the
/// sample size it was estimated from.
struct CorrSuffStat {
  Mat corr;
  int n = 0;
};

/// Validating constructor for suff stats coming from files or callers.
inline CorrSuffStat make_suffstat(Mat corr, int n) {
  if (corr.rows != corr.cols || corr.rows < 1)
    throw std::invalid_argument("correlation matrix must be square and non-empty");
  if (n < 1) throw std::invalid_argument("sample size must be >= 1");
  for (int i = 0; i < corr.rows; ++i) {
    if (std::fabs(corr(i, i) - 1.0) > 1e-9)
      throw std::invalid_argument("correlation matrix must have unit diagonal");
    for (int j = 0; j < corr.cols; ++j) {
      if (!std::isfinite(corr(i, j)) || std::fabs(corr(i, j)) > 1.0 + 1e-9)
        throw std::invalid_argument("correlation entries must lie in [-1,1]");
      if (std::fabs(corr(i, j) - corr(j, i)) > 1e-9)
        throw std::invalid_argument("correlation matrix must be symmetric");
    }
  }
  return {std::move(corr), n};
}

/// Integer-coded categorical columns with declared level counts.
struct DiscreteData {
  std::vector<std::vector<int>> columns;
  std::vector<int> levels;

  int sample_size() const { return columns.empty() ? 0 : static_cast<int>(columns[0].size()); }
  int variable_count() const { return static_cast<int>(columns.size()); }

  static DiscreteData from_matrix(const Mat& data) {
    DiscreteData d;
    d.columns.resize(data.cols);
    d.levels.assign(data.cols, 0);
    for (int c = 0; c < data.cols; ++c) {
      d.columns[c].resize(data.rows);
      for (int r = 0; r < data.rows; ++r) {
        const double v = data(r, c);
        if (!std::isfinite(v) || v < 0.0 || v != std::floor(v))
          throw std::invalid_argument("discrete data must be non-negative integer codes");
        d.columns[c][r] = static_cast<int>(v);
        d.levels[c] = std::max(d.levels[c], d.columns[c][r] + 1);
      }
    }
    return d;
  }
};

enum class TestKind { fisher_z, g_square };

struct TestResult {
  double statistic = 0.0;
  double p_value = 1.0;
  int df_or_cond_size = 0;
  TestKind kind = TestKind::fisher_z;
};

namespace detail {
inline void check_test_args(int nvars, int x, int y, const std::vector<int>& cond) {
  if (x < 0 || y < 0 || x >= nvars || y >= nvars)
    throw std::invalid_argument("variable index out of bounds");
  if (x == y) throw std::invalid_argument("tested variables must differ");
  for (int s : cond) {
    if (s < 0 || s >= nvars) throw std::invalid_argument("conditioning index out of bounds");
    if (s == x || s == y)
      throw std::invalid_argument("conditioning set must exclude the tested pair");
  }
}
}  // namespace detail

/// Partial correlation of x and y given the conditioning set, from the
/// correlation matrix alone. Empty set: the matrix entry itself. Otherwise
/// the precision matrix of the submatrix over {x, y} u cond is formed and
/// r = -P_xy / sqrt(P_xx P_yy). A near-singular submatrix gets one ridge
/// retry (1e-10 on the diagonal) before failing. The result is clamped to
/// [-1 + 1e-12, 1 - 1e-12] so downstream log-transforms stay finite.
inline double partial_correlation(const CorrSuffStat& suff, int x, int y,
                                  const std::vector<int>& cond_in) {
  detail::check_test_args(suff.corr.rows, x, y, cond_in);
  // canonical argument order: the result must be bit-identical under
  // swapping x and y or permuting the conditioning set
  std::vector<int> cond(cond_in);
  std::sort(cond.begin(), cond.end());
  if (x > y) std::swap(x, y);
  const auto clamp = [](double r) { return std::clamp(r, -1.0 + 1e-12, 1.0 - 1e-12); };
  if (cond.empty()) return clamp(suff.corr(x, y));

  std::vector<int> idx;
  idx.reserve(cond.size() + 2);
  idx.push_back(x);
  idx.push_back(y);
  idx.insert(idx.end(), cond.begin(), cond.end());
  const int k = static_cast<int>(idx.size());
  Mat sub(k, k);
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) sub(i, j) = suff.corr(idx[i], idx[j]);
  const Mat prec = spd_inverse_ridged(std::move(sub), 1e-10, "degenerate correlation submatrix");
  return clamp(-prec(0, 1) / std::sqrt(prec(0, 0) * prec(1, 1)));
}

/// Fisher-z (partial) correlation test. The statistic
///   T = sqrt(n - |S| - 3) * 1/2 * log((1 + r) / (1 - r))
/// is standard normal under the null; the p-value is two-sided.
inline TestResult fisher_z_test(const CorrSuffStat& suff, int x, int y,
                                const std::vector<int>& cond) {
  const int s = static_cast<int>(cond.size());
  if (suff.n - s - 3 < 1)
    throw std::invalid_argument("insufficient sample size for conditioning order");
  const double r = partial_correlation(suff, x, y, cond);
  const double t = std::sqrt(static_cast<double>(suff.n - s - 3)) * 0.5 *
                   std::log((1.0 + r) / (1.0 - r));
  const double p = 2.0 * normal_sf(std::fabs(t));
  return {t, p, s, TestKind::fisher_z};
}

/// G^2 likelihood-ratio test for (conditional) independence of two discrete
/// variables. Conditional tests stratify on every observed level combination
/// of the conditioning set; empty strata contribute nothing but do not
/// reduce the m(k-1)(l-1) degrees of freedom. Cells with zero observed count
/// contribute zero (the 0 log 0 convention).
inline TestResult g_square_test(const DiscreteData& data, int x, int y,
                                const std::vector<int>& cond_in) {
  detail::check_test_args(data.variable_count(), x, y, cond_in);
  std::vector<int> cond(cond_in);
  std::sort(cond.begin(), cond.end());
  if (x > y) std::swap(x, y);
  const int k = data.levels[x];
  const int l = data.levels[y];
  double m_strata = 1.0;
  for (int s : cond) m_strata *= static_cast<double>(data.levels[s]);
  const double df = m_strata * (k - 1) * (l - 1);
  if (df <= 0.0) throw std::invalid_argument("degenerate contingency table");
  if (df > static_cast<double>(std::numeric_limits<int>::max()))
    throw std::invalid_argument("conditioning set too large for the G^2 test");

  const int n = data.sample_size();
  std::map<long long, std::vector<double>> tables;
  for (int r = 0; r < n; ++r) {
    long long sid = 0, stride = 1;
    for (int s : cond) {
      sid += stride * data.columns[s][r];
      stride *= data.levels[s];
    }
    auto [it, inserted] = tables.try_emplace(sid);
    if (inserted) it->second.assign(static_cast<std::size_t>(k) * l, 0.0);
    it->second[static_cast<std::size_t>(data.columns[x][r]) * l + data.columns[y][r]] += 1.0;
  }

  double g2 = 0.0;
  std::vector<double> row(k), col(l);
  for (const auto& [sid, tab] : tables) {
    std::fill(row.begin(), row.end(), 0.0);
    std::fill(col.begin(), col.end(), 0.0);
    double total = 0.0;
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < l; ++j) {
        const double o = tab[static_cast<std::size_t>(i) * l + j];
        row[i] += o;
        col[j] += o;
        total += o;
      }
    if (total <= 0.0) continue;
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < l; ++j) {
        const double o = tab[static_cast<std::size_t>(i) * l + j];
        if (o > 0.0) g2 += 2.0 * o * std::log(o * total / (row[i] * col[j]));
      }
  }
  g2 = std::max(g2, 0.0);
  return {g2, chi_square_sf(g2, df), static_cast<int>(df), TestKind::g_square};
}

/// Dispatcher over the two test families; the search loops only see this.
class CiTester {
 public:
  explicit CiTester(const CorrSuffStat& suff) : suff_(&suff) {}
  explicit CiTester(const DiscreteData& data) : data_(&data) {}

  TestResult test(int x, int y, const std::vector<int>& cond) const {
    return suff_ ? fisher_z_test(*suff_, x, y, cond) : g_square_test(*data_, x, y, cond);
  }

  /// Largest conditioning-set size the test family supports; the Gaussian
  /// statistic needs n - |S| - 3 >= 1.
  int max_feasible_cond_size() const {
    return suff_ ? suff_->n - 4 : std::numeric_limits<int>::max();
  }

  TestKind kind() const { return suff_ ? TestKind::fisher_z : TestKind::g_square; }

  int variable_count() const {
    return suff_ ? suff_->corr.rows : data_->variable_count();
  }

 private:
  const CorrSuffStat* suff_ = nullptr;
  const DiscreteData* data_ = nullptr;
};

}  // namespace mrgraph
