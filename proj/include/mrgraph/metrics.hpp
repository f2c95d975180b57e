#pragma once

#include <algorithm>
#include <stdexcept>
#include <tuple>
#include <vector>

#include "mrgraph/bigint.hpp"
#include "mrgraph/graph.hpp"

namespace mrgraph {

struct MetricsReport {
  double recall = 0.0;
  double precision = 0.0;
  double weighted_tp = 0.0;
  int true_edges = 0;
  int inferred_edges = 0;
  double ashd = 0.0;
  BigInt seq_diff;
};

/// Remap g onto the reference's node order. Throws if the label sets differ.
inline MixedGraph aligned_to(const MixedGraph& reference, const MixedGraph& g) {
  if (reference.size() != g.size())
    throw std::invalid_argument("graphs have different node labels");
  std::vector<int> map(reference.size());
  for (int i = 0; i < reference.size(); ++i) {
    const int j = g.index_of(reference.label(i));
    if (j < 0) throw std::invalid_argument("graphs have different node labels");
    map[i] = j;
  }
  MixedGraph out(reference.labels(), reference.gv_count());
  for (int i = 0; i < out.size(); ++i)
    for (int j = 0; j < out.size(); ++j)
      if (i != j && g.arrow(map[i], map[j])) {
        if (g.arrow(map[j], map[i]))
          out.set_edge(i, j, EdgeMark::Undirected);
        else
          out.set_edge(i, j, EdgeMark::Directed);
      }
  return out;
}

/// Weighted edge recovery: a skeleton-matched edge scores 1.0 when the marks
/// agree exactly and 0.5 when the edge exists in both graphs with a
/// direction mismatch (including directed vs. undirected either way).
/// Returns (recall, precision, weighted true positives).
inline std::tuple<double, double, double> recall_precision(const MixedGraph& truth,
                                                           const MixedGraph& inferred_in) {
  const MixedGraph inferred = aligned_to(truth, inferred_in);
  double tp = 0.0;
  int k_true = 0, k_inf = 0;
  for (int i = 0; i < truth.size(); ++i)
    for (int j = i + 1; j < truth.size(); ++j) {
      const bool in_truth = truth.adjacent(i, j);
      const bool in_inf = inferred.adjacent(i, j);
      if (in_truth) ++k_true;
      if (in_inf) ++k_inf;
      if (in_truth && in_inf)
        tp += (truth.mark(i, j) == inferred.mark(i, j) &&
               truth.mark(j, i) == inferred.mark(j, i))
                  ? 1.0
                  : 0.5;
    }
  const double recall = k_true > 0 ? tp / k_true : 1.0;
  const double precision = k_inf > 0 ? tp / k_inf : (k_true > 0 ? 0.0 : 1.0);
  return {recall, precision, tp};
}

/// Structural Hamming distance with the direction-mismatch penalty reduced
/// to 0.5: presence mismatch costs 1, mark mismatch on a shared edge 0.5.
inline double ashd(const MixedGraph& a, const MixedGraph& b_in) {
  const MixedGraph b = aligned_to(a, b_in);
  double d = 0.0;
  for (int i = 0; i < a.size(); ++i)
    for (int j = i + 1; j < a.size(); ++j) {
      const bool in_a = a.adjacent(i, j);
      const bool in_b = b.adjacent(i, j);
      if (in_a != in_b)
        d += 1.0;
      else if (in_a && (a.mark(i, j) != b.mark(i, j) || a.mark(j, i) != b.mark(j, i)))
        d += 0.5;
    }
  return d;
}

/// Row-major adjacency bits read as one M*M-bit binary number. Undirected
/// edges contribute two set bits.
inline BigInt encode_graph(const MixedGraph& g) {
  BigInt code;
  for (int i = 0; i < g.size(); ++i)
    for (int j = 0; j < g.size(); ++j)
      code.append_bit(i != j && g.arrow(i, j) ? 1 : 0);
  return code;
}

/// encode(inferred) - encode(truth), exact. Zero iff the adjacency matrices
/// are identical. Requires the same labels in the same order.
inline BigInt seq_diff(const MixedGraph& inferred, const MixedGraph& truth) {
  if (inferred.labels() != truth.labels())
    throw std::invalid_argument("node order mismatch between graphs");
  return encode_graph(inferred) - encode_graph(truth);
}

inline int unique_graph_count(std::vector<BigInt> identifiers) {
  std::sort(identifiers.begin(), identifiers.end(),
            [](const BigInt& a, const BigInt& b) { return a < b; });
  identifiers.erase(std::unique(identifiers.begin(), identifiers.end()), identifiers.end());
  return static_cast<int>(identifiers.size());
}

inline MetricsReport evaluate_graphs(const MixedGraph& truth, const MixedGraph& inferred) {
  MetricsReport r;
  std::tie(r.recall, r.precision, r.weighted_tp) = recall_precision(truth, inferred);
  for (int i = 0; i < truth.size(); ++i)
    for (int j = i + 1; j < truth.size(); ++j) {
      if (truth.adjacent(i, j)) ++r.true_edges;
      if (inferred.adjacent(i, j)) ++r.inferred_edges;
    }
  r.ashd = ashd(truth, inferred);
  r.seq_diff = seq_diff(inferred, truth);
  return r;
}

}  // namespace mrgraph
