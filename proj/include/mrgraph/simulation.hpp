#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mrgraph/graph.hpp"
#include "mrgraph/linalg.hpp"
#include "mrgraph/metrics.hpp"
#include "mrgraph/orientation.hpp"
#include "mrgraph/pipeline.hpp"

namespace mrgraph {

/// 64-bit seeded generator with its own normal sampler, so that a given
/// seed reproduces byte-identical draws regardless of the standard
/// library's distribution internals.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  static std::uint64_t mix(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Independent substream for replicate `stream` of a run seeded with `seed`.
  static Rng derive(std::uint64_t seed, std::uint64_t stream) {
    return Rng(mix(mix(seed) + stream));
  }

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform() - 1.0;
      v = 2.0 * uniform() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * f;
    has_spare_ = true;
    return u * f;
  }

  /// Genotype draw: minor-allele count under Hardy-Weinberg frequencies
  /// ((1-q)^2, 2q(1-q), q^2).
  int genotype(double q) {
    const double u = uniform();
    const double p0 = (1.0 - q) * (1.0 - q);
    if (u < p0) return 0;
    if (u < p0 + 2.0 * q * (1.0 - q)) return 1;
    return 2;
  }

 private:
  std::mt19937_64 eng_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

struct SimulationSpec {
  MixedGraph truth;
  int n = 1000;
  double q = 0.3;       // minor-allele frequency per variant node
  double gamma0 = 0.0;  // intercept
  double signal = 1.0;  // shared coefficient on every parent term
  double sigma = 1.0;   // shared noise standard deviation
  std::uint64_t seed = 0;
};

/// n i.i.d. genotype values in {0, 1, 2}.
inline std::vector<int> simulate_genotype(double q, int n, Rng& rng) {
  if (!(q > 0.0 && q < 1.0)) throw std::invalid_argument("allele frequency must be in (0,1)");
  std::vector<int> out(n);
  for (int i = 0; i < n; ++i) out[i] = rng.genotype(q);
  return out;
}

namespace detail {
// Deterministic topological order (smallest index first among sources).
inline std::vector<int> topological_order(int m, const std::vector<std::vector<int>>& parents) {
  std::vector<int> indeg(m, 0), order;
  for (int j = 0; j < m; ++j) indeg[j] = static_cast<int>(parents[j].size());
  std::vector<bool> done(m, false);
  for (int step = 0; step < m; ++step) {
    int pick = -1;
    for (int j = 0; j < m; ++j)
      if (!done[j] && indeg[j] == 0) {
        pick = j;
        break;
      }
    if (pick < 0) return {};  // cycle
    done[pick] = true;
    order.push_back(pick);
    for (int j = 0; j < m; ++j)
      if (!done[j])
        for (int p : parents[j])
          if (p == pick) --indeg[j];
  }
  return order;
}
}  // namespace detail

/// Sample an N x M data matrix from the truth graph. Parentless variant
/// nodes follow the Hardy-Weinberg multinomial; every phenotype node is
/// normal around gamma0 + signal * (sum of its parent values) with
/// standard deviation sigma, generated in topological order. Each
/// undirected edge is treated as an even mixture of its two orientations:
/// per sample, every undirected edge gets an independent fair coin and the
/// sample is generated from the resulting DAG.
inline Mat simulate_graph_data(const SimulationSpec& spec) {
  const MixedGraph& t = spec.truth;
  const int m = t.size();
  const int gv = t.gv_count();
  if (!(spec.q > 0.0 && spec.q < 1.0))
    throw std::invalid_argument("allele frequency must be in (0,1)");
  if (!(spec.sigma > 0.0)) throw std::invalid_argument("sigma must be positive");
  if (spec.n < 1) throw std::invalid_argument("sample count must be >= 1");
  if (!t.directed_part_is_acyclic())
    throw std::invalid_argument("truth graph has a directed cycle");
  for (int v = 0; v < gv; ++v)
    for (int u = 0; u < m; ++u)
      if (u != v && t.arrow(u, v))
        throw std::invalid_argument("genotype nodes must be parentless");

  std::vector<std::vector<int>> dir_parents(m);
  std::vector<std::pair<int, int>> und_edges;
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      if (i == j) continue;
      if (t.is_directed(i, j)) dir_parents[j].push_back(i);
      if (i < j && t.is_undirected(i, j)) und_edges.emplace_back(i, j);
    }

  Rng rng(spec.seed);
  Mat out(spec.n, m);
  std::vector<std::vector<int>> parents(m);
  for (int r = 0; r < spec.n; ++r) {
    // orient this sample's undirected edges; retry if the coins close a cycle
    std::vector<int> order;
    for (int attempt = 0; attempt < 100; ++attempt) {
      parents = dir_parents;
      for (const auto& [i, j] : und_edges) {
        if (rng.uniform() < 0.5)
          parents[j].push_back(i);
        else
          parents[i].push_back(j);
      }
      order = detail::topological_order(m, parents);
      if (!order.empty()) break;
    }
    if (order.empty())
      throw std::runtime_error("undirected edges could not be oriented acyclically");

    for (int node : order) {
      if (node < gv) {
        out(r, node) = rng.genotype(spec.q);
        continue;
      }
      double mean = spec.gamma0;
      for (int p : parents[node]) mean += spec.signal * out(r, p);
      out(r, node) = mean + spec.sigma * rng.normal();
    }
  }
  return out;
}

/// Per-column quantile binning into codes 0..k_bins-1; variant columns pass
/// through unchanged. Bin boundaries are the b/k order statistics, with
/// ties collapsing into the lower bin.
inline Mat discretize(const Mat& data, int k_bins, int gv_count) {
  if (k_bins < 2) throw std::invalid_argument("k_bins must be >= 2");
  Mat out(data.rows, data.cols);
  std::vector<double> sorted(data.rows);
  for (int c = 0; c < data.cols; ++c) {
    if (c < gv_count) {
      for (int r = 0; r < data.rows; ++r) out(r, c) = data(r, c);
      continue;
    }
    for (int r = 0; r < data.rows; ++r) sorted[r] = data(r, c);
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() == sorted.back())
      throw std::invalid_argument("constant column cannot be discretized");
    std::vector<double> cut(k_bins - 1);
    for (int b = 1; b < k_bins; ++b) {
      const long rank = (static_cast<long>(data.rows) * b + k_bins - 1) / k_bins;  // ceil
      cut[b - 1] = sorted[rank - 1];
    }
    for (int r = 0; r < data.rows; ++r) {
      int code = 0;
      while (code < k_bins - 1 && data(r, c) > cut[code]) ++code;
      out(r, c) = code;
    }
  }
  return out;
}

/// Named truth graphs: the five basic models plus the demo graphs.
///   truth1   V1 -> T1 -> T2 -> T3            (gv = 1)
///   truth1v  V1 -> T1 -> T2 <- T3            (gv = 1)
///   truth2   V1 -> T1 -> T3 <- T2 <- V2, T3 -> T4   (gv = 2)
inline MixedGraph preset_truth(const std::string& name) {
  if (name == "M0") return basic_model_graph(BasicModel::M0);
  if (name == "M1") return basic_model_graph(BasicModel::M1);
  if (name == "M2") return basic_model_graph(BasicModel::M2);
  if (name == "M3") return basic_model_graph(BasicModel::M3);
  if (name == "M4") return basic_model_graph(BasicModel::M4);
  if (name == "truth1") {
    MixedGraph g({"V1", "T1", "T2", "T3"}, 1);
    g.set_edge(0, 1, EdgeMark::Directed);
    g.set_edge(1, 2, EdgeMark::Directed);
    g.set_edge(2, 3, EdgeMark::Directed);
    return g;
  }
  if (name == "truth1v") {
    MixedGraph g({"V1", "T1", "T2", "T3"}, 1);
    g.set_edge(0, 1, EdgeMark::Directed);
    g.set_edge(1, 2, EdgeMark::Directed);
    g.set_edge(3, 2, EdgeMark::Directed);
    return g;
  }
  if (name == "truth2") {
    MixedGraph g({"V1", "V2", "T1", "T2", "T3", "T4"}, 2);
    g.set_edge(0, 2, EdgeMark::Directed);
    g.set_edge(1, 3, EdgeMark::Directed);
    g.set_edge(2, 4, EdgeMark::Directed);
    g.set_edge(3, 4, EdgeMark::Directed);
    g.set_edge(4, 5, EdgeMark::Directed);
    return g;
  }
  throw std::invalid_argument("unknown preset truth: " + name);
}

inline std::vector<std::string> preset_names() {
  return {"M0", "M1", "M2", "M3", "M4", "truth1", "truth1v", "truth2"};
}

struct HarnessResult {
  /// Phenotype label order of each permutation (variants stay in front).
  std::vector<std::vector<std::string>> permutations;
  /// identifiers[d][p]: seq_diff of the graph inferred from dataset d under
  /// permutation p, against the correspondingly permuted truth.
  std::vector<std::vector<BigInt>> identifiers;
  /// Distinct identifiers per dataset across the permutations.
  std::vector<int> unique_counts;
};

/// Node-ordering demo: simulate n_data datasets from the truth, feed every
/// phenotype-column permutation of each dataset through the full pipeline,
/// and fingerprint each inferred graph against the permuted truth.
inline HarnessResult permutation_harness(const MixedGraph& truth, int n, double signal,
                                         int n_data, std::uint64_t seed, double fdr = 0.05,
                                         double q = 0.3, double sigma = 1.0) {
  const int m = truth.size();
  const int gv = truth.gv_count();
  if (gv < 1)
    throw std::invalid_argument("harness requires at least one genotype node leading the order");
  if (n_data < 1) throw std::invalid_argument("n_data must be >= 1");

  std::vector<int> pheno(m - gv);
  for (int i = gv; i < m; ++i) pheno[i - gv] = i;
  std::vector<std::vector<int>> perms;
  {
    std::vector<int> p = pheno;
    do {
      perms.push_back(p);
    } while (std::next_permutation(p.begin(), p.end()));
  }

  HarnessResult result;
  for (const auto& p : perms) {
    std::vector<std::string> names;
    for (int i : p) names.push_back(truth.label(i));
    result.permutations.push_back(std::move(names));
  }
  result.identifiers.resize(n_data);
  result.unique_counts.resize(n_data);

  for (int d = 0; d < n_data; ++d) {
    SimulationSpec spec{truth, n, q, 0.0, signal, sigma, Rng::mix(Rng::mix(seed) + d)};
    const Mat data = simulate_graph_data(spec);

    for (const auto& p : perms) {
      std::vector<int> cols(m);
      for (int i = 0; i < gv; ++i) cols[i] = i;
      for (int i = 0; i < m - gv; ++i) cols[gv + i] = p[i];

      std::vector<std::string> labels(m);
      Mat permuted(n, m);
      for (int c = 0; c < m; ++c) {
        labels[c] = truth.label(cols[c]);
        for (int r = 0; r < n; ++r) permuted(r, c) = data(r, cols[c]);
      }
      MixedGraph permuted_truth(labels, gv);
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          if (i != j && truth.arrow(cols[i], cols[j])) {
            if (truth.arrow(cols[j], cols[i]))
              permuted_truth.set_edge(i, j, EdgeMark::Undirected);
            else
              permuted_truth.set_edge(i, j, EdgeMark::Directed);
          }

      InferOptions opts;
      opts.fdr = fdr;
      const InferResult inf = infer(permuted, labels, gv, opts);
      result.identifiers[d].push_back(seq_diff(inf.graph, permuted_truth));
    }
    result.unique_counts[d] = unique_graph_count(result.identifiers[d]);
  }
  return result;
}

}  // namespace mrgraph
