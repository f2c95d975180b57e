#pragma once

#include <algorithm>
#include <cstdint>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace mrgraph {

enum class EdgeMark { Absent, Directed, Undirected };

/// Mixed graph over a fixed, ordered node list. The first gv_count() nodes
/// are genotype (variant) nodes; the rest are phenotype nodes. Stored as an
/// M x M binary adjacency matrix a_ij with the usual conventions:
///   i -> j   iff a_ij = 1 and a_ji = 0,
///   i -- j   iff a_ij = a_ji = 1,
///   no edge  iff both are 0.
/// mark(i, j) answers "what does node i offer node j": Directed means i -> j;
/// an edge directed j -> i reads as Absent from (i, j). Use adjacent() when
/// only existence matters.
class MixedGraph {
 public:
  MixedGraph(std::vector<std::string> labels, int gv_count)
      : labels_(std::move(labels)), gv_count_(gv_count) {
    if (labels_.empty()) throw std::invalid_argument("node list must not be empty");
    if (gv_count_ < 0 || gv_count_ > static_cast<int>(labels_.size()))
      throw std::invalid_argument("gv_count out of range");
    std::set<std::string> seen;
    for (const auto& l : labels_)
      if (!seen.insert(l).second) throw std::invalid_argument("duplicate node label: " + l);
    adj_.assign(labels_.size() * labels_.size(), 0);
  }

  static MixedGraph complete_undirected(std::vector<std::string> labels, int gv_count) {
    MixedGraph g(std::move(labels), gv_count);
    const int m = g.size();
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        if (i != j) g.adj_[g.at(i, j)] = 1;
    return g;
  }

  int size() const { return static_cast<int>(labels_.size()); }
  int gv_count() const { return gv_count_; }
  bool is_genotype(int i) const { return i < gv_count_; }
  const std::vector<std::string>& labels() const { return labels_; }
  const std::string& label(int i) const { return labels_[static_cast<std::size_t>(i)]; }

  int index_of(const std::string& label) const {
    for (int i = 0; i < size(); ++i)
      if (labels_[i] == label) return i;
    return -1;
  }

  bool arrow(int i, int j) const {
    check_pair(i, j);
    return adj_[at(i, j)] != 0;
  }

  bool adjacent(int i, int j) const {
    check_pair(i, j);
    return adj_[at(i, j)] != 0 || adj_[at(j, i)] != 0;
  }

  bool is_directed(int i, int j) const {
    check_pair(i, j);
    return adj_[at(i, j)] != 0 && adj_[at(j, i)] == 0;
  }

  bool is_undirected(int i, int j) const {
    check_pair(i, j);
    return adj_[at(i, j)] != 0 && adj_[at(j, i)] != 0;
  }

  EdgeMark mark(int i, int j) const {
    check_pair(i, j);
    const bool ij = adj_[at(i, j)] != 0, ji = adj_[at(j, i)] != 0;
    if (ij && ji) return EdgeMark::Undirected;
    if (ij) return EdgeMark::Directed;
    return EdgeMark::Absent;
  }

  void set_edge(int i, int j, EdgeMark mark) {
    check_pair(i, j);
    switch (mark) {
      case EdgeMark::Absent:
        adj_[at(i, j)] = 0;
        adj_[at(j, i)] = 0;
        break;
      case EdgeMark::Directed:
        adj_[at(i, j)] = 1;
        adj_[at(j, i)] = 0;
        break;
      case EdgeMark::Undirected:
        adj_[at(i, j)] = 1;
        adj_[at(j, i)] = 1;
        break;
    }
  }

  /// Nodes adjacent to i (any mark), ascending.
  std::vector<int> neighbors(int i) const {
    std::vector<int> out;
    for (int j = 0; j < size(); ++j)
      if (j != i && adjacent(i, j)) out.push_back(j);
    return out;
  }

  int edge_count() const {
    int c = 0;
    for (int i = 0; i < size(); ++i)
      for (int j = i + 1; j < size(); ++j)
        if (adjacent(i, j)) ++c;
    return c;
  }

  int undirected_edge_count() const {
    int c = 0;
    for (int i = 0; i < size(); ++i)
      for (int j = i + 1; j < size(); ++j)
        if (is_undirected(i, j)) ++c;
    return c;
  }

  int directed_edge_count() const { return edge_count() - undirected_edge_count(); }

  /// True iff the digraph of strictly directed edges has no cycle;
  /// undirected edges are ignored.
  bool directed_part_is_acyclic() const {
    const int m = size();
    std::vector<int> color(m, 0);  // 0 white, 1 on stack, 2 done
    std::vector<int> stack, next(m, 0);
    for (int root = 0; root < m; ++root) {
      if (color[root] != 0) continue;
      stack.assign(1, root);
      color[root] = 1;
      next[root] = 0;
      while (!stack.empty()) {
        const int u = stack.back();
        bool descended = false;
        for (int& j = next[u]; j < m; ++j) {
          if (j == u || !is_directed(u, j)) continue;
          if (color[j] == 1) return false;
          if (color[j] == 0) {
            color[j] = 1;
            next[j] = 0;
            stack.push_back(j);
            descended = true;
            ++j;
            break;
          }
        }
        if (!descended && stack.back() == u) {
          color[u] = 2;
          stack.pop_back();
        }
      }
    }
    return true;
  }

  /// True iff a directed path from `from` to `to` exists (strictly directed
  /// edges only).
  bool directed_path_exists(int from, int to) const {
    const int m = size();
    std::vector<bool> seen(m, false);
    std::vector<int> stack{from};
    seen[from] = true;
    while (!stack.empty()) {
      const int u = stack.back();
      stack.pop_back();
      if (u == to) return true;
      for (int j = 0; j < m; ++j)
        if (j != u && !seen[j] && is_directed(u, j)) {
          seen[j] = true;
          stack.push_back(j);
        }
    }
    return false;
  }

  /// Unshielded colliders x -> y <- z with x, z non-adjacent.
  int v_structure_count() const {
    int c = 0;
    for (int y = 0; y < size(); ++y) {
      std::vector<int> parents;
      for (int x = 0; x < size(); ++x)
        if (x != y && is_directed(x, y)) parents.push_back(x);
      for (std::size_t a = 0; a < parents.size(); ++a)
        for (std::size_t b = a + 1; b < parents.size(); ++b)
          if (!adjacent(parents[a], parents[b])) ++c;
    }
    return c;
  }

  bool operator==(const MixedGraph& o) const {
    return labels_ == o.labels_ && gv_count_ == o.gv_count_ && adj_ == o.adj_;
  }

 private:
  std::size_t at(int i, int j) const {
    return static_cast<std::size_t>(i) * labels_.size() + static_cast<std::size_t>(j);
  }
  void check_pair(int i, int j) const {
    if (i < 0 || j < 0 || i >= size() || j >= size())
      throw std::invalid_argument("node index out of bounds");
    if (i == j) throw std::invalid_argument("self-loops are not representable");
  }

  std::vector<std::string> labels_;
  int gv_count_;
  std::vector<std::uint8_t> adj_;
};

}  // namespace mrgraph
