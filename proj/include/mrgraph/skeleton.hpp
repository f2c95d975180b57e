#pragma once

#include <algorithm>
#include <map>
#include <ostream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "mrgraph/format.hpp"
#include "mrgraph/graph.hpp"
#include "mrgraph/independence.hpp"
#include "mrgraph/lond.hpp"

namespace mrgraph {

struct TestRecord {
  int x = 0;
  int y = 0;
  std::vector<int> cond;  // sorted ascending
  double p_value = 1.0;
  double alpha = 0.0;
  bool rejected = false;
  int level = 0;  // |cond|
};

/// Every independence test performed, in execution order. (x, y, S) and
/// (y, x, S) address the same record: both statistics are symmetric in the
/// tested pair, so one LOND draw covers both orderings.
class TestLog {
 public:
  using Key = std::tuple<int, int, std::vector<int>>;

  static Key make_key(int x, int y, std::vector<int> cond) {
    std::sort(cond.begin(), cond.end());
    return {std::min(x, y), std::max(x, y), std::move(cond)};
  }

  int find_index(int x, int y, const std::vector<int>& cond) const {
    const auto it = index_.find(make_key(x, y, cond));
    return it == index_.end() ? -1 : it->second;
  }

  const TestRecord* find(int x, int y, const std::vector<int>& cond) const {
    const int i = find_index(x, y, cond);
    return i < 0 ? nullptr : &records_[i];
  }

  int append(TestRecord rec) {
    std::sort(rec.cond.begin(), rec.cond.end());
    const int idx = static_cast<int>(records_.size());
    index_.emplace(make_key(rec.x, rec.y, rec.cond), idx);
    records_.push_back(std::move(rec));
    return idx;
  }

  const std::vector<TestRecord>& records() const { return records_; }
  const TestRecord& record(int i) const { return records_[static_cast<std::size_t>(i)]; }
  int size() const { return static_cast<int>(records_.size()); }

  std::vector<std::string>& warnings() { return warnings_; }
  const std::vector<std::string>& warnings() const { return warnings_; }

  /// columns: index,x,y,S,p,alpha,rejected,level; S is a ';'-joined label list.
  void write_csv(std::ostream& os, const std::vector<std::string>& labels) const {
    os << "index,x,y,S,p,alpha,rejected,level\n";
    for (std::size_t i = 0; i < records_.size(); ++i) {
      const TestRecord& r = records_[i];
      os << i << ',' << labels[r.x] << ',' << labels[r.y] << ',';
      for (std::size_t s = 0; s < r.cond.size(); ++s) {
        if (s) os << ';';
        os << labels[r.cond[s]];
      }
      os << ',' << format_double(r.p_value) << ',' << format_double(r.alpha) << ','
         << (r.rejected ? 1 : 0) << ',' << r.level << '\n';
    }
  }

 private:
  std::vector<TestRecord> records_;
  std::map<Key, int> index_;
  std::vector<std::string> warnings_;
};

/// Pair -> separating sets found for it. A pair has an entry iff its edge
/// was removed; stored sets exclude both endpoints.
using Sepsets = std::map<std::pair<int, int>, std::vector<std::vector<int>>>;

struct SkeletonResult {
  MixedGraph graph;
  Sepsets sepsets;
};

/// Return the logged decision for (x, y | S) if that exact test exists;
/// otherwise run it through the shared LOND stream and append it to the log.
/// record_index, when given, receives the log index either way.
inline TestDecision lookup_or_test(TestLog& log, LondState& lond, const CiTester& tester,
                                   int x, int y, const std::vector<int>& cond,
                                   int* record_index = nullptr) {
  detail::check_test_args(tester.variable_count(), x, y, cond);
  if (const int idx = log.find_index(x, y, cond); idx >= 0) {
    if (record_index) *record_index = idx;
    const TestRecord& r = log.record(idx);
    return {r.p_value, r.alpha, r.rejected};
  }
  const TestResult res = tester.test(x, y, cond);
  const TestDecision dec = lond.record(res.p_value);
  const int idx = log.append({x, y, cond, dec.p_value, dec.alpha, dec.rejected,
                              static_cast<int>(cond.size())});
  if (record_index) *record_index = idx;
  return dec;
}

/// Step I: level-wise skeleton search with LOND-issued thresholds.
///
/// Starting from the complete undirected graph, level l tests every ordered
/// pair (x, y) still adjacent against the size-l subsets of adj(x) \ {y},
/// in row-major pair order and lexicographic subset order. Adjacency sets
/// are snapshot at the start of each level, so removal decisions within a
/// level do not depend on the order edges fall (the stable-PC discipline
/// the node-ordering guarantees rest on). The first non-rejected test
/// removes the edge and records the separating set; removed pairs are not
/// tested again, though they may still appear inside other pairs'
/// conditioning sets.
inline SkeletonResult learn_skeleton(const CiTester& tester,
                                     const std::vector<std::string>& labels, int gv_count,
                                     LondState& lond, TestLog& log, int max_cond_size = -1) {
  if (static_cast<int>(labels.size()) != tester.variable_count())
    throw std::invalid_argument("label count does not match the data");
  MixedGraph g = MixedGraph::complete_undirected(labels, gv_count);
  Sepsets sepsets;
  const int m = g.size();
  if (max_cond_size < 0) max_cond_size = m - 2;

  for (int level = 0; level <= max_cond_size; ++level) {
    if (level > tester.max_feasible_cond_size()) {
      log.warnings().push_back(
          "search stopped before conditioning size " + std::to_string(level) +
          ": insufficient sample size for conditioning order");
      break;
    }

    std::vector<std::vector<int>> adj(m);
    bool any_pair = false;
    for (int i = 0; i < m; ++i) {
      adj[i] = g.neighbors(i);
      if (static_cast<int>(adj[i].size()) - 1 >= level && !adj[i].empty()) any_pair = true;
    }
    if (!any_pair) break;

    for (int x = 0; x < m; ++x) {
      for (int y = 0; y < m; ++y) {
        if (x == y || !g.adjacent(x, y)) continue;
        std::vector<int> cand;
        cand.reserve(adj[x].size());
        for (int t : adj[x])
          if (t != y) cand.push_back(t);
        if (static_cast<int>(cand.size()) < level) continue;

        // lexicographic size-`level` combinations of cand
        std::vector<int> pick(level);
        for (int i = 0; i < level; ++i) pick[i] = i;
        bool removed = false;
        while (!removed) {
          std::vector<int> cond(level);
          for (int i = 0; i < level; ++i) cond[i] = cand[pick[i]];
          const TestDecision dec = lookup_or_test(log, lond, tester, x, y, cond);
          if (!dec.rejected) {
            g.set_edge(x, y, EdgeMark::Absent);
            sepsets[{std::min(x, y), std::max(x, y)}].push_back(cond);
            removed = true;
            break;
          }
          // advance the combination
          int i = level - 1;
          while (i >= 0 && pick[i] == static_cast<int>(cand.size()) - level + i) --i;
          if (i < 0) break;
          ++pick[i];
          for (int j = i + 1; j < level; ++j) pick[j] = pick[j - 1] + 1;
        }
      }
    }
  }
  return {std::move(g), std::move(sepsets)};
}

}  // namespace mrgraph
