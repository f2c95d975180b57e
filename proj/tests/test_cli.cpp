#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <sys/wait.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "doctest.h"
#include "json.hpp"
#include "mrgraph/io.hpp"
#include "mrgraph/simulation.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunResult {
  int exit_code = -1;
  std::string out;
};

fs::path work_dir() {
  static const fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "mrgraph_cli_test";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

RunResult run(const std::string& args) {
  const fs::path out_file = work_dir() / "stdout.txt";
  const std::string cmd =
      std::string(MRGRAPH_BIN) + " " + args + " > " + out_file.string() + " 2> " +
      (work_dir() / "stderr.txt").string();
  const int status = std::system(cmd.c_str());
  RunResult r;
  r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  std::ifstream f(out_file);
  std::stringstream ss;
  ss << f.rdbuf();
  r.out = ss.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, const std::string& content) {
  std::ofstream f(p);
  f << content;
}

}  // namespace

TEST_CASE("simulate -> infer -> evaluate round trip") {
  const fs::path data = work_dir() / "m1.csv";
  const RunResult sim = run("simulate --preset M1 --n 1000 --signal 1.0 --seed 7 --output " +
                            data.string());
  CHECK(sim.exit_code == 0);
  const json echo = json::parse(sim.out);
  CHECK(echo["labels"] == json({"V1", "T1", "T2"}));
  CHECK(echo["seed"] == 7);

  // first column must hold genotype codes
  {
    const mrgraph::DataFrame df = mrgraph::read_data_csv_file(data.string());
    CHECK(df.values.rows == 1000);
    CHECK(df.values.cols == 3);
    for (int r = 0; r < df.values.rows; ++r) {
      CHECK(df.values(r, 0) >= 0.0);
      CHECK(df.values(r, 0) <= 2.0);
    }
  }

  const fs::path dot = work_dir() / "m1.dot";
  const RunResult inf =
      run("infer " + data.string() + " --gv 1 --output " + dot.string());
  CHECK(inf.exit_code == 0);
  const json report = json::parse(inf.out);
  CHECK(report["config"]["gv"] == 1);
  CHECK(report["tests_done"].get<long>() >= 3);
  const std::string dot_text = slurp(dot);
  CHECK(dot_text.find("V1 -> T1;") != std::string::npos);
  CHECK(dot_text.find("T1 -> T2;") != std::string::npos);
  // exactly those two edges
  std::size_t arrows = 0;
  for (std::size_t pos = dot_text.find(" -> "); pos != std::string::npos;
       pos = dot_text.find(" -> ", pos + 1))
    ++arrows;
  CHECK(arrows == 2);

  const fs::path adj = work_dir() / "m1_adj.csv";
  CHECK(run("infer " + data.string() + " --gv 1 --format adjacency-csv --output " +
            adj.string())
            .exit_code == 0);
  const fs::path truth_adj = work_dir() / "m1_truth.csv";
  {
    std::ofstream f(truth_adj);
    mrgraph::write_adjacency_csv(f, mrgraph::preset_truth("M1"));
  }
  const RunResult ev = run("evaluate " + truth_adj.string() + " " + adj.string() + " --gv 1");
  CHECK(ev.exit_code == 0);
  const json metrics = json::parse(ev.out);
  CHECK(metrics["recall"] == 1.0);
  CHECK(metrics["precision"] == 1.0);
  CHECK(metrics["ashd"] == 0.0);
  CHECK(metrics["seq_diff"] == "0");
}

TEST_CASE("simulate preset shapes") {
  const fs::path m4 = work_dir() / "m4.csv";
  CHECK(run("simulate --preset M4 --n 120 --seed 9 --output " + m4.string()).exit_code == 0);
  const mrgraph::DataFrame df = mrgraph::read_data_csv_file(m4.string());
  CHECK(df.values.cols == 3);
  CHECK(df.values.rows == 120);
  CHECK(df.labels == std::vector<std::string>{"V1", "T1", "T2"});
}

TEST_CASE("same seed gives byte-identical outputs") {
  const fs::path a = work_dir() / "rep_a.csv";
  const fs::path b = work_dir() / "rep_b.csv";
  CHECK(run("simulate --preset truth1 --n 400 --seed 99 --output " + a.string()).exit_code == 0);
  CHECK(run("simulate --preset truth1 --n 400 --seed 99 --output " + b.string()).exit_code == 0);
  CHECK(slurp(a) == slurp(b));

  const fs::path ga = work_dir() / "rep_a.dot";
  const fs::path gb = work_dir() / "rep_b.dot";
  CHECK(run("infer " + a.string() + " --gv 1 --output " + ga.string()).exit_code == 0);
  CHECK(run("infer " + a.string() + " --gv 1 --output " + gb.string()).exit_code == 0);
  CHECK(slurp(ga) == slurp(gb));
}

TEST_CASE("json format bundles graph, trace and report") {
  const fs::path data = work_dir() / "j.csv";
  CHECK(run("simulate --preset M2 --n 800 --seed 3 --output " + data.string()).exit_code == 0);
  const RunResult inf = run("infer " + data.string() + " --gv 1 --format json");
  CHECK(inf.exit_code == 0);
  const json doc = json::parse(inf.out);
  CHECK(doc.contains("graph"));
  CHECK(doc.contains("trace"));
  CHECK(doc["graph"]["labels"] == json({"V1", "T1", "T2"}));
  CHECK(doc["config"]["test"] == "gauss");
}

TEST_CASE("test log export") {
  const fs::path data = work_dir() / "tl.csv";
  CHECK(run("simulate --preset M1 --n 500 --seed 5 --output " + data.string()).exit_code == 0);
  const fs::path log = work_dir() / "tl_log.csv";
  CHECK(run("infer " + data.string() + " --gv 1 --output " + (work_dir() / "tl.dot").string() +
            " --test-log " + log.string())
            .exit_code == 0);
  const std::string text = slurp(log);
  CHECK(text.rfind("index,x,y,S,p,alpha,rejected,level\n", 0) == 0);
  CHECK(text.find("V1,T1") != std::string::npos);
}

TEST_CASE("evaluate on handwritten graphs") {
  const fs::path truth = work_dir() / "ev_truth.csv";
  const fs::path guess = work_dir() / "ev_guess.csv";
  write_file(truth, "V,T1,T2\n0,1,0\n0,0,1\n0,0,0\n");  // V -> T1 -> T2
  write_file(guess, "V,T1,T2\n0,1,0\n0,0,1\n0,1,0\n");  // V -> T1, T1 - T2
  const RunResult ev = run("evaluate " + truth.string() + " " + guess.string());
  CHECK(ev.exit_code == 0);
  const json m = json::parse(ev.out);
  CHECK(m["recall"] == 0.75);
  CHECK(m["precision"] == 0.75);
  CHECK(m["ashd"] == 0.5);
}

TEST_CASE("robust-corr subcommand") {
  const fs::path data = work_dir() / "rc.csv";
  CHECK(run("simulate --preset M1 --n 400 --seed 21 --output " + data.string()).exit_code == 0);
  const fs::path corr = work_dir() / "rc_corr.csv";
  const RunResult rc = run("robust-corr " + data.string() + " --beta 0.005 --output " +
                           corr.string());
  CHECK(rc.exit_code == 0);
  const json rep = json::parse(rc.out);
  CHECK(rep["converged"] == true);
  const mrgraph::DataFrame cm = mrgraph::read_data_csv_file(corr.string());
  REQUIRE(cm.values.rows == 3);
  for (int i = 0; i < 3; ++i) CHECK(cm.values(i, i) == 1.0);

  CHECK(run("robust-corr " + data.string() + " --beta 2.0").exit_code == 3);
}

TEST_CASE("demo subcommand shape") {
  const fs::path out = work_dir() / "demo.csv";
  const RunResult demo =
      run("demo --truth truth1 --n 300 --n-data 1 --seed 11 --output " + out.string());
  CHECK(demo.exit_code == 0);
  const std::string text = slurp(out);
  std::istringstream is(text);
  std::string header, row, extra;
  REQUIRE(std::getline(is, header));
  REQUIRE(std::getline(is, row));
  CHECK_FALSE(std::getline(is, extra));  // exactly one data row
  CHECK(header.rfind("dataset,", 0) == 0);
  // header: dataset + 6 permutations + unique
  CHECK(std::count(header.begin(), header.end(), ',') == 7);
  CHECK(std::count(row.begin(), row.end(), ',') == 7);
  const json echo = json::parse(demo.out);
  CHECK(echo["unique_counts"].size() == 1);

  CHECK(run("demo --truth nosuch --n 100").exit_code == 3);
}

TEST_CASE("exit codes") {
  const fs::path missing_header = work_dir() / "nohdr.csv";
  write_file(missing_header, "1,2\n3,4\n");
  CHECK(run("infer " + missing_header.string() + " --gv 0").exit_code == 2);

  CHECK(run("infer " + (work_dir() / "does_not_exist.csv").string()).exit_code == 2);

  const fs::path ok = work_dir() / "ok.csv";
  CHECK(run("simulate --preset M1 --n 200 --seed 2 --output " + ok.string()).exit_code == 0);
  CHECK(run("infer " + ok.string() + " --gv 3").exit_code == 3);
  CHECK(run("infer " + ok.string() + " --gv 1 --robust-beta 1.7").exit_code == 3);
  CHECK(run("infer " + ok.string() + " --gv 1 --fdr 1.7").exit_code == 3);
  CHECK(run("simulate --preset nosuch").exit_code == 3);
  CHECK(run("simulate").exit_code == 3);  // neither preset nor truth

  const fs::path cyc = work_dir() / "cyclic.csv";
  write_file(cyc, "A,B,C\n0,1,0\n0,0,1\n1,0,0\n");
  CHECK(run("simulate --truth " + cyc.string() + " --gv 0 --n 50").exit_code == 3);

  const fs::path t1 = work_dir() / "lbl_a.csv";
  const fs::path t2 = work_dir() / "lbl_b.csv";
  write_file(t1, "A,B\n0,1\n0,0\n");
  write_file(t2, "A,C\n0,1\n0,0\n");
  CHECK(run("evaluate " + t1.string() + " " + t2.string()).exit_code == 3);

  // degenerate data: a constant column cannot feed the gaussian test
  const fs::path flat = work_dir() / "flat.csv";
  write_file(flat, "A,B\n1,0\n1,1\n1,0\n1,1\n1,0\n");
  CHECK(run("infer " + flat.string() + " --gv 0").exit_code == 2);

  CHECK(run("nosuchcommand").exit_code == 3);
}

TEST_CASE("gsq path through the CLI") {
  const fs::path data = work_dir() / "disc.csv";
  CHECK(run("simulate --preset M1 --n 1500 --seed 6 --discretize 3 --output " +
            data.string())
            .exit_code == 0);
  const RunResult inf =
      run("infer " + data.string() + " --gv 1 --test gsq --format json");
  CHECK(inf.exit_code == 0);
  const json doc = json::parse(inf.out);
  CHECK(doc["config"]["test"] == "gsq");
}
