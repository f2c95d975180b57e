#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mrgraph/correlation.hpp"
#include "mrgraph/orientation.hpp"
#include "mrgraph/skeleton.hpp"

namespace mrgraph {

struct InferOptions {
  double fdr = 0.05;
  int lond_a = 2;
  TestKind test = TestKind::fisher_z;
  std::optional<double> robust_beta;  // absent: Pearson correlation
  int max_cond_size = -1;             // negative: M - 2
};

struct InferResult {
  MixedGraph graph;
  Sepsets sepsets;
  TestLog log;
  OrientationTrace trace;
  double lond_delta = 0.0;
  double lond_c = 0.0;
  int lond_a = 2;
  long tests_done = 0;
  long rejections = 0;
};

namespace detail {
inline InferResult run_inference(const CiTester& tester, const std::vector<std::string>& labels,
                                 int gv_count, const InferOptions& opts) {
  LondState lond(opts.fdr, opts.lond_a);
  TestLog log;
  SkeletonResult skel = learn_skeleton(tester, labels, gv_count, lond, log,
                                       opts.max_cond_size);
  OrientResult oriented = orient_edges(skel.graph, skel.sepsets, log, lond, tester);
  return {std::move(oriented.graph), std::move(skel.sepsets),  std::move(log),
          std::move(oriented.trace), lond.delta(),             lond.c(),
          lond.a(),                  lond.tests_done(),        lond.rejections()};
}
}  // namespace detail

/// Full inference from a prepared Gaussian sufficient statistic.
inline InferResult infer_suffstat(const CorrSuffStat& suff,
                                  const std::vector<std::string>& labels, int gv_count,
                                  const InferOptions& opts = {}) {
  return detail::run_inference(CiTester(suff), labels, gv_count, opts);
}

/// Full inference from discrete data via the G^2 test.
inline InferResult infer_discrete(const DiscreteData& data,
                                  const std::vector<std::string>& labels, int gv_count,
                                  const InferOptions& opts = {}) {
  return detail::run_inference(CiTester(data), labels, gv_count, opts);
}

/// Full inference from a raw data matrix. The Gaussian path estimates the
/// correlation matrix first (Pearson, or the robust estimator when
/// robust_beta is set); the G^2 path consumes integer codes directly.
inline InferResult infer(const Mat& data, const std::vector<std::string>& labels,
                         int gv_count, const InferOptions& opts = {}) {
  if (static_cast<int>(labels.size()) != data.cols)
    throw std::invalid_argument("label count does not match the data");
  if (opts.test == TestKind::fisher_z) {
    Mat corr = opts.robust_beta ? robust_correlation_matrix(data, *opts.robust_beta)
                                : pearson_correlation(data);
    const CorrSuffStat suff{std::move(corr), data.rows};
    return detail::run_inference(CiTester(suff), labels, gv_count, opts);
  }
  const DiscreteData dd = DiscreteData::from_matrix(data);
  return detail::run_inference(CiTester(dd), labels, gv_count, opts);
}

}  // namespace mrgraph
