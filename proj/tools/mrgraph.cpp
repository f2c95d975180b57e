// Command-line front end: infer / simulate / evaluate / robust-corr / demo.
//
// Exit codes: 0 success, 1 internal numerical failure, 2 malformed input,
// 3 configuration violation. Run reports and config echoes are JSON on
// stdout; diagnostics go to stderr.

#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mrgraph/mrgraph.hpp"

using nlohmann::json;

namespace {

std::ostream& open_out(const std::string& path, std::ofstream& file) {
  if (path == "-") return std::cout;
  file.open(path, std::ios::binary);
  if (!file) throw mrgraph::CsvError("cannot open output file: " + path);
  return file;
}

bool looks_integer_coded(const mrgraph::Mat& data) {
  for (double v : data.v)
    if (!std::isfinite(v) || v != std::floor(v)) return false;
  return true;
}

json graph_json(const mrgraph::MixedGraph& g) {
  json edges = json::array();
  for (int i = 0; i < g.size(); ++i)
    for (int j = 0; j < g.size(); ++j) {
      if (i == j) continue;
      if (g.is_directed(i, j))
        edges.push_back({{"from", g.label(i)}, {"to", g.label(j)}, {"mark", "directed"}});
      else if (j > i && g.is_undirected(i, j))
        edges.push_back({{"from", g.label(i)}, {"to", g.label(j)}, {"mark", "undirected"}});
    }
  json adj = json::array();
  for (int i = 0; i < g.size(); ++i) {
    json row = json::array();
    for (int j = 0; j < g.size(); ++j) row.push_back(i != j && g.arrow(i, j) ? 1 : 0);
    adj.push_back(row);
  }
  return {{"labels", g.labels()}, {"gv_count", g.gv_count()}, {"edges", edges},
          {"adjacency", adj}};
}

json trace_json(const mrgraph::OrientationTrace& trace,
                const std::vector<std::string>& labels) {
  json arr = json::array();
  for (const auto& e : trace.entries) {
    const char* mark = e.result == mrgraph::EdgeMark::Directed      ? "directed"
                       : e.result == mrgraph::EdgeMark::Undirected ? "undirected"
                                                                   : "absent";
    arr.push_back({{"from", labels[e.from]},
                   {"to", labels[e.to]},
                   {"mark", mark},
                   {"rule", mrgraph::orient_rule_name(e.rule)},
                   {"conflicted", e.conflicted},
                   {"tests", e.evidence}});
  }
  return arr;
}

void emit_report(const json& report, const std::string& report_path,
                 const std::string& output_path) {
  if (report_path.empty()) {
    // default: keep stdout clean when the main output already goes there
    if (output_path != "-") std::cout << report.dump(2) << "\n";
    return;
  }
  std::ofstream file;
  open_out(report_path, file) << report.dump(2) << "\n";
}

struct InferArgs {
  std::string input;
  int gv = 0;
  double fdr = 0.05;
  int lond_a = 2;
  std::string test = "gauss";
  std::optional<double> robust_beta;
  int max_cond_size = -1;
  std::string format = "dot";
  std::string output = "-";
  std::string report;
  std::string test_log;
  std::string trace_path;
};

int cmd_infer(const InferArgs& a) {
  if (!(a.fdr > 0.0 && a.fdr < 1.0)) {
    std::cerr << "error: --fdr must lie in (0,1)\n";
    return 3;
  }
  if (a.lond_a < 2) {
    std::cerr << "error: --lond-a must be an integer >= 2\n";
    return 3;
  }
  if (a.robust_beta && !(*a.robust_beta >= 0.0 && *a.robust_beta <= 1.0)) {
    std::cerr << "error: --robust-beta must lie in [0,1]\n";
    return 3;
  }
  if (a.robust_beta && a.test == "gsq") {
    std::cerr << "error: --robust-beta applies to the gauss test only\n";
    return 3;
  }

  const mrgraph::DataFrame df = mrgraph::read_data_csv_file(a.input);
  const int m = df.values.cols;

  if (a.gv < 0 || a.gv >= m) {
    std::cerr << "error: --gv must lie in [0, " << m - 1 << "] for " << m
              << " data columns\n";
    return 3;
  }

  mrgraph::InferOptions opts;
  opts.fdr = a.fdr;
  opts.lond_a = a.lond_a;
  opts.test = a.test == "gauss" ? mrgraph::TestKind::fisher_z : mrgraph::TestKind::g_square;
  opts.robust_beta = a.robust_beta;
  opts.max_cond_size = a.max_cond_size;

  if (opts.test == mrgraph::TestKind::fisher_z && looks_integer_coded(df.values))
    std::cerr << "warning: running the Gaussian test on integer-coded data; "
                 "the normality assumption is violated\n";

  const mrgraph::InferResult res = [&] {
    try {
      return mrgraph::infer(df.values, df.labels, a.gv, opts);
    } catch (const std::invalid_argument& e) {
      throw mrgraph::CsvError(a.input + ": " + e.what());
    }
  }();

  json config = {{"command", "infer"},
                 {"input", a.input},
                 {"gv", a.gv},
                 {"fdr", a.fdr},
                 {"lond_a", a.lond_a},
                 {"test", a.test},
                 {"robust_beta", a.robust_beta ? json(*a.robust_beta) : json(nullptr)},
                 {"max_cond_size", a.max_cond_size},
                 {"format", a.format},
                 {"output", a.output}};
  json report = {{"config", config},
                 {"lond", {{"delta", res.lond_delta}, {"a", res.lond_a}, {"c", res.lond_c}}},
                 {"tests_done", res.tests_done},
                 {"rejections", res.rejections},
                 {"edges",
                  {{"directed", res.graph.directed_edge_count()},
                   {"undirected", res.graph.undirected_edge_count()}}},
                 {"warnings", res.log.warnings()}};

  std::ofstream file;
  std::ostream& os = open_out(a.output, file);
  if (a.format == "dot") {
    os << mrgraph::to_dot(res.graph);
  } else if (a.format == "adjacency-csv") {
    mrgraph::write_adjacency_csv(os, res.graph);
  } else {
    json doc = report;
    doc["graph"] = graph_json(res.graph);
    doc["trace"] = trace_json(res.trace, res.graph.labels());
    os << doc.dump(2) << "\n";
  }
  os.flush();

  if (!a.test_log.empty()) {
    std::ofstream lf;
    res.log.write_csv(open_out(a.test_log, lf), res.graph.labels());
  }
  if (!a.trace_path.empty()) {
    std::ofstream tf;
    open_out(a.trace_path, tf) << trace_json(res.trace, res.graph.labels()).dump(2) << "\n";
  }
  if (a.format != "json") emit_report(report, a.report, a.output);
  return 0;
}

struct SimArgs {
  std::string preset;
  std::string truth_file;
  int gv = -1;
  int n = 1000;
  double q = 0.3;
  double signal = 1.0;
  double sigma = 1.0;
  double gamma0 = 0.0;
  std::uint64_t seed = 0;
  int discretize = 0;
  std::string output = "-";
  std::string report;
};

int cmd_simulate(const SimArgs& a) {
  if (a.preset.empty() == a.truth_file.empty()) {
    std::cerr << "error: give exactly one of --preset or --truth\n";
    return 3;
  }
  const mrgraph::MixedGraph truth = [&] {
    if (!a.preset.empty()) return mrgraph::preset_truth(a.preset);
    return mrgraph::read_adjacency_csv_file(a.truth_file, a.gv < 0 ? 0 : a.gv);
  }();

  mrgraph::SimulationSpec spec{truth, a.n, a.q, a.gamma0, a.signal, a.sigma, a.seed};
  const mrgraph::Mat data = [&] {
    const mrgraph::Mat raw = mrgraph::simulate_graph_data(spec);
    return a.discretize > 0 ? mrgraph::discretize(raw, a.discretize, truth.gv_count()) : raw;
  }();

  std::ofstream file;
  mrgraph::write_data_csv(open_out(a.output, file), truth.labels(), data);

  json echo = {{"command", "simulate"},
               {"preset", a.preset.empty() ? json(nullptr) : json(a.preset)},
               {"truth", a.truth_file.empty() ? json(nullptr) : json(a.truth_file)},
               {"labels", truth.labels()},
               {"gv", truth.gv_count()},
               {"n", a.n},
               {"q", a.q},
               {"gamma0", a.gamma0},
               {"signal", a.signal},
               {"sigma", a.sigma},
               {"seed", a.seed},
               {"discretize", a.discretize},
               {"output", a.output}};
  emit_report(echo, a.report, a.output);
  return 0;
}

int cmd_evaluate(const std::string& truth_path, const std::string& inferred_path, int gv) {
  const mrgraph::MixedGraph truth = mrgraph::read_adjacency_csv_file(truth_path, gv);
  const mrgraph::MixedGraph inferred = mrgraph::read_adjacency_csv_file(inferred_path, 0);
  const mrgraph::MetricsReport r = mrgraph::evaluate_graphs(truth, inferred);
  json doc = {{"config",
               {{"command", "evaluate"}, {"truth", truth_path}, {"inferred", inferred_path}}},
              {"recall", r.recall},
              {"precision", r.precision},
              {"weighted_tp", r.weighted_tp},
              {"true_edges", r.true_edges},
              {"inferred_edges", r.inferred_edges},
              {"ashd", r.ashd},
              {"seq_diff", r.seq_diff.to_string()}};
  std::cout << doc.dump(2) << "\n";
  return 0;
}

struct RobustArgs {
  std::string input;
  double beta = 0.005;
  std::string output = "-";
  std::string report;
};

int cmd_robust_corr(const RobustArgs& a) {
  if (!(a.beta >= 0.0 && a.beta <= 1.0)) {
    std::cerr << "error: --beta must lie in [0,1]\n";
    return 3;
  }
  const mrgraph::DataFrame df = mrgraph::read_data_csv_file(a.input);
  const mrgraph::RobustEstimate est = [&] {
    try {
      return mrgraph::robust_mean_cov(df.values, a.beta);
    } catch (const std::invalid_argument& e) {
      throw mrgraph::CsvError(a.input + ": " + e.what());
    }
  }();

  std::ofstream file;
  mrgraph::write_data_csv(open_out(a.output, file), df.labels, est.corr);

  json echo = {{"config",
                {{"command", "robust-corr"},
                 {"input", a.input},
                 {"beta", a.beta},
                 {"output", a.output}}},
               {"iterations", est.iterations},
               {"converged", est.converged}};
  emit_report(echo, a.report, a.output);
  return 0;
}

struct DemoArgs {
  std::string truth = "truth1";
  int n = 1000;
  double signal = 1.0;
  int n_data = 2;
  std::uint64_t seed = 0;
  double fdr = 0.05;
  double q = 0.3;
  std::string output = "-";
  std::string report;
};

int cmd_demo(const DemoArgs& a) {
  const mrgraph::MixedGraph truth = mrgraph::preset_truth(a.truth);
  const mrgraph::HarnessResult res =
      mrgraph::permutation_harness(truth, a.n, a.signal, a.n_data, a.seed, a.fdr, a.q);

  std::ofstream file;
  std::ostream& os = open_out(a.output, file);
  os << "dataset";
  for (const auto& perm : res.permutations) {
    os << ',';
    for (std::size_t i = 0; i < perm.size(); ++i) {
      if (i) os << '|';
      os << perm[i];
    }
  }
  os << ",unique\n";
  for (std::size_t d = 0; d < res.identifiers.size(); ++d) {
    os << d;
    for (const auto& id : res.identifiers[d]) os << ',' << id.to_string();
    os << ',' << res.unique_counts[d] << '\n';
  }
  os.flush();

  json echo = {{"config",
                {{"command", "demo"},
                 {"truth", a.truth},
                 {"n", a.n},
                 {"signal", a.signal},
                 {"n_data", a.n_data},
                 {"seed", a.seed},
                 {"fdr", a.fdr},
                 {"q", a.q},
                 {"output", a.output}}},
               {"unique_counts", res.unique_counts}};
  emit_report(echo, a.report, a.output);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Causal graph inference with online FDR control and "
               "Mendelian-randomization-aware orientation"};
  app.require_subcommand(1);

  InferArgs ia;
  CLI::App* infer = app.add_subcommand("infer", "Infer a causal graph from a data CSV");
  infer->add_option("input", ia.input, "data CSV (header row, genotype columns first)")
      ->required();
  infer->add_option("--gv", ia.gv, "number of genotype columns");
  infer->add_option("--fdr", ia.fdr, "overall FDR target");
  infer->add_option("--lond-a", ia.lond_a, "LOND exponent a");
  infer->add_option("--test", ia.test, "independence test")
      ->check(CLI::IsMember({"gauss", "gsq"}));
  infer->add_option("--robust-beta", ia.robust_beta,
                    "robust correlation tuning parameter (default: Pearson)");
  infer->add_option("--max-cond-size", ia.max_cond_size,
                    "largest conditioning set size (negative: unbounded)");
  infer->add_option("--format", ia.format, "graph output format")
      ->check(CLI::IsMember({"dot", "adjacency-csv", "json"}));
  infer->add_option("--output", ia.output, "graph destination ('-' = stdout)");
  infer->add_option("--report", ia.report, "run report destination");
  infer->add_option("--test-log", ia.test_log, "write the independence-test log CSV here");
  infer->add_option("--trace", ia.trace_path, "write the orientation trace JSON here");

  SimArgs sa;
  CLI::App* simulate = app.add_subcommand("simulate", "Generate data from a truth graph");
  simulate->add_option("--preset", sa.preset, "named truth graph");
  simulate->add_option("--truth", sa.truth_file, "truth adjacency CSV");
  simulate->add_option("--gv", sa.gv, "genotype count for --truth files");
  simulate->add_option("--n", sa.n, "sample count");
  simulate->add_option("--q", sa.q, "minor-allele frequency");
  simulate->add_option("--signal", sa.signal, "shared parent coefficient");
  simulate->add_option("--sigma", sa.sigma, "noise standard deviation");
  simulate->add_option("--gamma0", sa.gamma0, "intercept");
  simulate->add_option("--seed", sa.seed, "RNG seed");
  simulate->add_option("--discretize", sa.discretize,
                       "quantile-bin phenotype columns into this many codes (0 = off)");
  simulate->add_option("--output", sa.output, "data CSV destination");
  simulate->add_option("--report", sa.report, "configuration echo destination");

  std::string eval_truth, eval_inferred;
  int eval_gv = 0;
  CLI::App* evaluate = app.add_subcommand("evaluate", "Compare two adjacency CSVs");
  evaluate->add_option("truth", eval_truth, "truth adjacency CSV")->required();
  evaluate->add_option("inferred", eval_inferred, "inferred adjacency CSV")->required();
  evaluate->add_option("--gv", eval_gv, "genotype count of the truth graph");

  RobustArgs ra;
  CLI::App* robust = app.add_subcommand("robust-corr", "Robust correlation matrix of a data CSV");
  robust->add_option("input", ra.input, "data CSV")->required();
  robust->add_option("--beta", ra.beta, "tuning parameter");
  robust->add_option("--output", ra.output, "matrix CSV destination");
  robust->add_option("--report", ra.report, "report destination");

  DemoArgs da;
  CLI::App* demo = app.add_subcommand("demo", "Node-ordering permutation demo");
  demo->add_option("--truth", da.truth, "preset truth graph");
  demo->add_option("--n", da.n, "sample count per dataset");
  demo->add_option("--signal", da.signal, "shared parent coefficient");
  demo->add_option("--n-data", da.n_data, "replicate datasets");
  demo->add_option("--seed", da.seed, "RNG seed");
  demo->add_option("--fdr", da.fdr, "overall FDR target");
  demo->add_option("--q", da.q, "minor-allele frequency");
  demo->add_option("--output", da.output, "identifier CSV destination");
  demo->add_option("--report", da.report, "echo destination");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    if (infer->parsed()) return cmd_infer(ia);
    if (simulate->parsed()) return cmd_simulate(sa);
    if (evaluate->parsed()) return cmd_evaluate(eval_truth, eval_inferred, eval_gv);
    if (robust->parsed()) return cmd_robust_corr(ra);
    if (demo->parsed()) return cmd_demo(da);
  } catch (const mrgraph::CsvError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
