#pragma once

#include <cctype>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mrgraph/format.hpp"
#include "mrgraph/graph.hpp"
#include "mrgraph/linalg.hpp"

namespace mrgraph {

/// Malformed or unreadable input file.
struct CsvError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : line) {
    if (ch == ',') {
      out.push_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(trim(cur));
  return out;
}

inline bool parse_number(const std::string& tok, double& out) {
  const char* begin = tok.data();
  const char* end = begin + tok.size();
  const auto res = std::from_chars(begin, end, out);
  return res.ec == std::errc() && res.ptr == end && !tok.empty();
}

}  // namespace detail

struct DataFrame {
  std::vector<std::string> labels;
  Mat values;
};

/// Read a numeric CSV with a mandatory header row. A first row that parses
/// entirely as numbers is treated as a missing header.
inline DataFrame read_data_csv(std::istream& is, const std::string& origin = "<stream>") {
  std::string line;
  if (!std::getline(is, line)) throw CsvError(origin + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  DataFrame df;
  df.labels = detail::split_csv_line(line);
  bool all_numeric = true;
  for (const auto& tok : df.labels) {
    double ignored;
    if (!detail::parse_number(tok, ignored)) {
      all_numeric = false;
      break;
    }
  }
  if (all_numeric) throw CsvError(origin + ": missing header row");
  for (std::size_t i = 0; i < df.labels.size(); ++i) {
    if (df.labels[i].empty()) throw CsvError(origin + ": empty column label");
    for (std::size_t j = i + 1; j < df.labels.size(); ++j)
      if (df.labels[i] == df.labels[j])
        throw CsvError(origin + ": duplicate column label: " + df.labels[i]);
  }

  std::vector<double> cells;
  int rows = 0;
  const int cols = static_cast<int>(df.labels.size());
  int line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (detail::trim(line).empty()) continue;
    const auto toks = detail::split_csv_line(line);
    if (static_cast<int>(toks.size()) != cols)
      throw CsvError(origin + ": line " + std::to_string(line_no) + ": expected " +
                     std::to_string(cols) + " cells, got " + std::to_string(toks.size()));
    for (const auto& tok : toks) {
      double v;
      if (!detail::parse_number(tok, v))
        throw CsvError(origin + ": line " + std::to_string(line_no) +
                       ": not a number: '" + tok + "'");
      cells.push_back(v);
    }
    ++rows;
  }
  if (rows == 0) throw CsvError(origin + ": no data rows");
  df.values = Mat(rows, cols);
  df.values.v = std::move(cells);
  return df;
}

inline DataFrame read_data_csv_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw CsvError("cannot open file: " + path);
  return read_data_csv(f, path);
}

inline void write_data_csv(std::ostream& os, const std::vector<std::string>& labels,
                           const Mat& values) {
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) os << ',';
    os << labels[i];
  }
  os << '\n';
  for (int r = 0; r < values.rows; ++r) {
    for (int c = 0; c < values.cols; ++c) {
      if (c) os << ',';
      os << format_double(values(r, c));
    }
    os << '\n';
  }
}

/// Adjacency CSV: header row of labels, then M rows of 0/1 entries with
/// row i, column j holding a_ij.
inline void write_adjacency_csv(std::ostream& os, const MixedGraph& g) {
  for (int i = 0; i < g.size(); ++i) {
    if (i) os << ',';
    os << g.label(i);
  }
  os << '\n';
  for (int i = 0; i < g.size(); ++i) {
    for (int j = 0; j < g.size(); ++j) {
      if (j) os << ',';
      os << (i != j && g.arrow(i, j) ? 1 : 0);
    }
    os << '\n';
  }
}

inline MixedGraph read_adjacency_csv(std::istream& is, int gv_count,
                                     const std::string& origin = "<stream>") {
  const DataFrame df = read_data_csv(is, origin);
  const int m = static_cast<int>(df.labels.size());
  if (df.values.rows != m)
    throw CsvError(origin + ": adjacency matrix must be square (" + std::to_string(m) +
                   " columns, " + std::to_string(df.values.rows) + " rows)");
  MixedGraph g(df.labels, gv_count);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      const double v = df.values(i, j);
      if (v != 0.0 && v != 1.0)
        throw CsvError(origin + ": adjacency entries must be 0 or 1");
      if (i == j && v != 0.0) throw CsvError(origin + ": self-loops are not allowed");
    }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      const bool ij = df.values(i, j) != 0.0, ji = df.values(j, i) != 0.0;
      if (ij && ji)
        g.set_edge(i, j, EdgeMark::Undirected);
      else if (ij)
        g.set_edge(i, j, EdgeMark::Directed);
      else if (ji)
        g.set_edge(j, i, EdgeMark::Directed);
    }
  return g;
}

inline MixedGraph read_adjacency_csv_file(const std::string& path, int gv_count = 0) {
  std::ifstream f(path);
  if (!f) throw CsvError("cannot open file: " + path);
  return read_adjacency_csv(f, gv_count, path);
}

namespace detail {
inline std::string dot_id(const std::string& label) {
  bool plain = !label.empty() && !std::isdigit(static_cast<unsigned char>(label[0]));
  for (char ch : label)
    if (!std::isalnum(static_cast<unsigned char>(ch)) && ch != '_') plain = false;
  if (plain) return label;
  std::string quoted = "\"";
  for (char ch : label) {
    if (ch == '"' || ch == '\\') quoted.push_back('\\');
    quoted.push_back(ch);
  }
  quoted.push_back('"');
  return quoted;
}
}  // namespace detail

/// Graphviz rendering: variants as triangles, phenotypes as ellipses,
/// undirected edges drawn once with dir=none.
inline std::string to_dot(const MixedGraph& g, const std::string& name = "inferred") {
  std::ostringstream os;
  os << "digraph " << name << " {\n";
  for (int i = 0; i < g.size(); ++i)
    os << "  " << detail::dot_id(g.label(i))
       << (g.is_genotype(i) ? " [shape=triangle];\n" : " [shape=ellipse];\n");
  for (int i = 0; i < g.size(); ++i)
    for (int j = 0; j < g.size(); ++j) {
      if (i == j) continue;
      if (g.is_directed(i, j))
        os << "  " << detail::dot_id(g.label(i)) << " -> " << detail::dot_id(g.label(j))
           << ";\n";
      else if (j > i && g.is_undirected(i, j))
        os << "  " << detail::dot_id(g.label(i)) << " -> " << detail::dot_id(g.label(j))
           << " [dir=none];\n";
    }
  os << "}\n";
  return os.str();
}

}  // namespace mrgraph
