#pragma once

#include <stdexcept>

#include "mrgraph/stats.hpp"

namespace mrgraph {

struct TestDecision {
  double p_value = 0.0;
  double alpha = 0.0;
  bool rejected = false;
};

/// Online FDR controller. The i-th test receives the significance level
///   alpha_i = delta_i * (D(i-1) + 1),  delta_i = c / i^a,
/// where D(i-1) counts rejections so far and c = delta / zeta(a) makes the
/// delta_i sum to the overall FDR target. Thresholds start large and decay
/// as the test stream grows, so the order of tests matters; callers must
/// feed tests strictly sequentially.
class LondState {
 public:
  explicit LondState(double delta, int a = 2) : delta_(delta), a_(a) {
    if (!(delta > 0.0 && delta < 1.0))
      throw std::invalid_argument("lond: delta must be in (0,1)");
    if (a < 2) throw std::invalid_argument("lond: a must be an integer >= 2");
    c_ = delta / riemann_zeta_int(a);
  }

  /// Threshold the next recorded test would receive. Does not mutate.
  double next_alpha() const {
    const double i = static_cast<double>(tests_done_ + 1);
    double ipow = 1.0;
    for (int e = 0; e < a_; ++e) ipow *= i;
    return c_ / ipow * static_cast<double>(rejections_ + 1);
  }

  TestDecision record(double p_value) {
    if (!(p_value >= 0.0 && p_value <= 1.0))
      throw std::invalid_argument("lond: p-value outside [0,1]");
    const double alpha = next_alpha();
    const bool rejected = p_value <= alpha;
    ++tests_done_;
    if (rejected) ++rejections_;
    return {p_value, alpha, rejected};
  }

  double delta() const { return delta_; }
  int a() const { return a_; }
  double c() const { return c_; }
  long tests_done() const { return tests_done_; }
  long rejections() const { return rejections_; }

 private:
  double delta_;
  int a_;
  double c_;
  long tests_done_ = 0;
  long rejections_ = 0;
};

}  // namespace mrgraph
