#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "mrgraph/skeleton.hpp"

namespace mrgraph {

/// The five admissible graphs on one variant V and two phenotypes (T1, T2)
/// when genotype-to-phenotype direction is taken for granted. M1 through M4
/// leave T1 and T2 dependent; M0 keeps them apart.
enum class BasicModel { M0, M1, M2, M3, M4 };

/// Canonical topology over labels (V1, T1, T2), gv_count = 1.
inline MixedGraph basic_model_graph(BasicModel model) {
  MixedGraph g({"V1", "T1", "T2"}, 1);
  switch (model) {
    case BasicModel::M0:
      g.set_edge(0, 1, EdgeMark::Directed);
      break;
    case BasicModel::M1:
      g.set_edge(0, 1, EdgeMark::Directed);
      g.set_edge(1, 2, EdgeMark::Directed);
      break;
    case BasicModel::M2:
      g.set_edge(0, 1, EdgeMark::Directed);
      g.set_edge(2, 1, EdgeMark::Directed);
      break;
    case BasicModel::M3:
      g.set_edge(0, 1, EdgeMark::Directed);
      g.set_edge(0, 2, EdgeMark::Directed);
      break;
    case BasicModel::M4:
      g.set_edge(0, 1, EdgeMark::Directed);
      g.set_edge(0, 2, EdgeMark::Directed);
      g.set_edge(1, 2, EdgeMark::Undirected);
      break;
  }
  return g;
}

enum class OrientRule { GV, VStructure, BasicModel, None };

inline const char* orient_rule_name(OrientRule r) {
  switch (r) {
    case OrientRule::GV: return "gv";
    case OrientRule::VStructure: return "v-structure";
    case OrientRule::BasicModel: return "basic-model";
    case OrientRule::None: return "none";
  }
  return "none";
}

struct TraceEntry {
  int from = 0;  // for non-directed results, from < to and the order is moot
  int to = 0;
  EdgeMark result = EdgeMark::Undirected;
  OrientRule rule = OrientRule::None;
  bool conflicted = false;
  std::vector<int> evidence;  // indices into the TestLog
};

/// One entry per edge of the skeleton, in row-major edge order. Directed
/// edges carry the single rule that set them.
struct OrientationTrace {
  std::vector<TraceEntry> entries;
};

struct OrientResult {
  MixedGraph graph;
  OrientationTrace trace;
};

/// Step II: orient the skeleton.
///
///  (1) Variant-to-phenotype edges point at the phenotype; variant-variant
///      edges stay undirected.
///  (2) Every unshielded triple x - y - z has its x _||_ z | y decision
///      looked up (or run now through the shared LOND stream). Dependence
///      certifies the collider x -> y <- z; independence marks the triple
///      as a non-collider for step 3.
///  (3) To a fixpoint, triples with at least one directed edge and at most
///      one undirected edge are matched against the basic models, and
///      certified non-collider triples x -> y - z propagate y -> z. A rule
///      application is skipped when it would close a directed cycle, point
///      into a variant, or manufacture a v-structure that step 2 did not
///      certify. Two rules demanding opposite directions leave the edge
///      undirected for good and flag the conflict in the trace.
inline OrientResult orient_edges(const MixedGraph& skeleton,
                                 [[maybe_unused]] const Sepsets& sepsets, TestLog& log,
                                 LondState& lond, const CiTester& tester) {
  MixedGraph g = skeleton;
  const int m = g.size();
  const int gv = g.gv_count();

  std::map<std::pair<int, int>, TraceEntry> trace;
  std::set<std::pair<int, int>> frozen;
  const auto edge_key = [](int a, int b) {
    return std::make_pair(std::min(a, b), std::max(a, b));
  };

  // step 1: the principle of Mendelian randomization
  for (int v = 0; v < gv; ++v)
    for (int t = gv; t < m; ++t)
      if (g.is_undirected(v, t)) {
        g.set_edge(v, t, EdgeMark::Directed);
        trace[edge_key(v, t)] = {v, t, EdgeMark::Directed, OrientRule::GV, false, {}};
      }

  // step 2: certified v-structures. Marks live per canonical triple
  // (min(x,z), y, max(x,z)); true means the collider test rejected.
  std::map<std::tuple<int, int, int>, std::pair<bool, int>> triple_mark;
  const auto triple_key = [](int x, int y, int z) {
    return std::make_tuple(std::min(x, z), y, std::max(x, z));
  };

  for (int x = 0; x < m; ++x)
    for (int y = 0; y < m; ++y) {
      if (y == x || !g.adjacent(x, y)) continue;
      for (int z = x + 1; z < m; ++z) {
        if (z == y || z == x || !g.adjacent(y, z) || g.adjacent(x, z)) continue;
        int idx = -1;
        const TestDecision dec = lookup_or_test(log, lond, tester, x, z, {y}, &idx);
        triple_mark[triple_key(x, y, z)] = {dec.rejected, idx};
        if (!dec.rejected) continue;
        // collider certified; orient whatever is still orientable, never
        // flipping an existing direction or pointing into a variant
        if (y < gv) continue;
        if (g.is_directed(y, x) || g.is_directed(y, z)) continue;
        for (int s : {x, z})
          if (g.is_undirected(s, y) && !g.directed_path_exists(y, s)) {
            g.set_edge(s, y, EdgeMark::Directed);
            trace[edge_key(s, y)] = {s, y, EdgeMark::Directed, OrientRule::VStructure,
                                     false, {idx}};
          }
      }
    }

  // step 3: basic-model matching and non-collider propagation, to a fixpoint
  const auto try_orient = [&](int u, int v, std::vector<int> evidence) -> bool {
    const auto key = edge_key(u, v);
    if (frozen.count(key)) return false;
    if (v < gv) return false;  // nothing points into a variant
    if (g.is_directed(u, v)) return false;
    if (g.is_directed(v, u)) {
      const auto it = trace.find(key);
      if (it != trace.end() && it->second.rule == OrientRule::BasicModel) {
        // two step-3 rules disagree: retract and freeze
        g.set_edge(u, v, EdgeMark::Undirected);
        frozen.insert(key);
        TraceEntry e{key.first, key.second, EdgeMark::Undirected, OrientRule::None, true,
                     it->second.evidence};
        e.evidence.insert(e.evidence.end(), evidence.begin(), evidence.end());
        it->second = std::move(e);
        return true;
      }
      return false;  // step-1/2 orientations are authoritative
    }
    if (!g.is_undirected(u, v)) return false;
    if (g.directed_path_exists(v, u)) return false;  // would close a cycle
    // no uncertified collider at v
    for (int w = 0; w < m; ++w) {
      if (w == u || w == v || !g.is_directed(w, v) || g.adjacent(w, u)) continue;
      const auto it = triple_mark.find(triple_key(u, v, w));
      if (it == triple_mark.end() || !it->second.first) return false;
    }
    g.set_edge(u, v, EdgeMark::Directed);
    trace[key] = {u, v, EdgeMark::Directed, OrientRule::BasicModel, false,
                  std::move(evidence)};
    return true;
  };

  // an edge is open to step-3 rules while undirected, and stays contestable
  // while its direction rests on a step-3 match (an opposing match retracts
  // it); step-1/2 directions are settled
  const auto contestable = [&](int u, int v) {
    if (g.is_undirected(u, v)) return true;
    if (!g.adjacent(u, v)) return false;
    const auto it = trace.find(edge_key(u, v));
    return it != trace.end() && it->second.rule == OrientRule::BasicModel;
  };

  // the fork match casts its center in the variant role, which has no
  // parents in the catalog; a center with an inferred parent is a chain
  // tail, not a fork
  const auto exogenous = [&](int c) {
    for (int w = 0; w < m; ++w)
      if (w != c && g.is_directed(w, c)) return false;
    return true;
  };

  bool changed = true;
  while (changed) {
    changed = false;
    for (int c = 0; c < m; ++c) {
      for (int a = 0; a < m; ++a) {
        if (a == c || !g.is_directed(c, a)) continue;
        for (int b = 0; b < m; ++b) {
          if (b == c || b == a) continue;
          // chain shape: c -> a, a - b, c and b non-adjacent
          if (contestable(a, b) && !g.adjacent(c, b)) {
            int marg_idx = -1, cond_idx = -1;
            const TestDecision marg = lookup_or_test(log, lond, tester, c, b, {}, &marg_idx);
            const TestDecision cond =
                lookup_or_test(log, lond, tester, c, b, {a}, &cond_idx);
            if (!cond.rejected) {
              // M1 when marginally dependent, plain non-collider
              // propagation otherwise; either way a -> b
              changed |= try_orient(a, b, {marg_idx, cond_idx});
            } else if (!marg.rejected) {
              // M2: collider at a, certified by the conditional test
              changed |= try_orient(b, a, {marg_idx, cond_idx});
            }
            // both dependent: no basic model fits an unshielded triple
          }
          // fork shape: c -> a, c - b, a and b non-adjacent
          if (exogenous(c) && contestable(c, b) && !g.adjacent(a, b)) {
            int cond_idx = -1;
            const TestDecision cond =
                lookup_or_test(log, lond, tester, a, b, {c}, &cond_idx);
            if (!cond.rejected) changed |= try_orient(c, b, {cond_idx});  // M3
          }
        }
      }
    }
  }

  // everything still undirected gets an examined-but-unresolved entry
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j)
      if (g.adjacent(i, j) && !trace.count({i, j}))
        trace[{i, j}] = {i, j, g.mark(i, j), OrientRule::None, false, {}};

  OrientResult out{std::move(g), {}};
  out.trace.entries.reserve(trace.size());
  for (auto& [key, entry] : trace) out.trace.entries.push_back(std::move(entry));
  return out;
}

}  // namespace mrgraph
