#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "doctest.h"
#include "mrgraph/correlation.hpp"
#include "mrgraph/simulation.hpp"

using namespace mrgraph;

namespace {

// asymptotic two-sample Kolmogorov-Smirnov p-value
double ks_two_sample_p(std::vector<double> a, std::vector<double> b) {
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    if (a[i] <= b[j])
      ++i;
    else
      ++j;
    d = std::max(d, std::fabs(i / na - j / nb));
  }
  const double en = std::sqrt(na * nb / (na + nb));
  const double lambda = (en + 0.12 + 0.11 / en) * d;
  double p = 0.0;
  for (int k = 1; k <= 100; ++k)
    p += 2.0 * ((k % 2 == 1) ? 1.0 : -1.0) * std::exp(-2.0 * k * k * lambda * lambda);
  return std::clamp(p, 0.0, 1.0);
}

double empirical_corr(const Mat& d, int a, int b) {
  return pearson_correlation(d)(a, b);
}

double regression_slope(const Mat& d, int ycol, int xcol) {
  double mx = 0.0, my = 0.0;
  for (int r = 0; r < d.rows; ++r) {
    mx += d(r, xcol);
    my += d(r, ycol);
  }
  mx /= d.rows;
  my /= d.rows;
  double sxy = 0.0, sxx = 0.0;
  for (int r = 0; r < d.rows; ++r) {
    sxy += (d(r, xcol) - mx) * (d(r, ycol) - my);
    sxx += (d(r, xcol) - mx) * (d(r, xcol) - mx);
  }
  return sxy / sxx;
}

}  // namespace

TEST_CASE("genotype frequencies follow the Hardy-Weinberg multinomial") {
  const int n = 100000;
  const struct {
    double q;
    double p0, p1, p2;
  } cases[] = {{0.5, 0.25, 0.5, 0.25}, {0.2, 0.64, 0.32, 0.04}, {0.3, 0.49, 0.42, 0.09}};
  for (const auto& c : cases) {
    Rng rng(12345);
    const std::vector<int> v = simulate_genotype(c.q, n, rng);
    int counts[3] = {0, 0, 0};
    for (int g : v) {
      REQUIRE(g >= 0);
      REQUIRE(g <= 2);
      ++counts[g];
    }
    const double expected[3] = {c.p0, c.p1, c.p2};
    for (int g = 0; g < 3; ++g) {
      const double se = std::sqrt(expected[g] * (1.0 - expected[g]) / n);
      CHECK(std::fabs(counts[g] / double(n) - expected[g]) < 3.0 * se);
    }
  }
  Rng rng(1);
  CHECK_THROWS_AS(simulate_genotype(0.0, 10, rng), std::invalid_argument);
  CHECK_THROWS_AS(simulate_genotype(1.0, 10, rng), std::invalid_argument);
}

TEST_CASE("zero signal decouples phenotypes from the variant") {
  SimulationSpec spec{preset_truth("M1"), 100000, 0.3, 0.0, 0.0, 1.0, 7};
  const Mat d = simulate_graph_data(spec);
  const double bound = 4.0 / std::sqrt(double(spec.n));
  CHECK(std::fabs(empirical_corr(d, 0, 1)) < bound);
  CHECK(std::fabs(empirical_corr(d, 0, 2)) < bound);
  CHECK(std::fabs(empirical_corr(d, 1, 2)) < bound);
  // columns are standard normal around gamma0
  for (int c = 1; c <= 2; ++c) {
    double mean = 0.0;
    for (int r = 0; r < d.rows; ++r) mean += d(r, c);
    mean /= d.rows;
    CHECK(std::fabs(mean) < bound);
  }
}

TEST_CASE("chain correlations factor along the path") {
  SimulationSpec spec{preset_truth("M1"), 100000, 0.3, 0.0, 1.0, 1.0, 11};
  const Mat d = simulate_graph_data(spec);
  const double r_vt1 = empirical_corr(d, 0, 1);
  const double r_t1t2 = empirical_corr(d, 1, 2);
  const double r_vt2 = empirical_corr(d, 0, 2);
  CHECK(std::fabs(r_vt2 - r_vt1 * r_t1t2) < 0.02);
}

TEST_CASE("undirected edges are an even per-sample mixture of the two orders") {
  SimulationSpec spec{preset_truth("M4"), 100000, 0.3, 0.0, 1.0, 1.0, 13};
  const Mat d = simulate_graph_data(spec);
  std::vector<double> t1(d.rows), t2(d.rows);
  for (int r = 0; r < d.rows; ++r) {
    t1[r] = d(r, 1);
    t2[r] = d(r, 2);
  }

  // independent oracle sampler, straight from the two generative orders
  std::mt19937 orng(999);
  std::uniform_real_distribution<> unif(0.0, 1.0);
  std::normal_distribution<> norm;
  std::vector<double> o1(d.rows), o2(d.rows);
  for (int r = 0; r < d.rows; ++r) {
    const double u = unif(orng);
    const double q = 0.3;
    const int v = u < (1 - q) * (1 - q) ? 0 : (u < (1 - q) * (1 - q) + 2 * q * (1 - q) ? 1 : 2);
    if (unif(orng) < 0.5) {
      o1[r] = v + norm(orng);              // T1 first
      o2[r] = v + o1[r] + norm(orng);      // then T2 given T1
    } else {
      o2[r] = v + norm(orng);              // T2 first
      o1[r] = v + o2[r] + norm(orng);      // then T1 given T2
    }
  }
  CHECK(ks_two_sample_p(t1, o1) > 0.01);
  CHECK(ks_two_sample_p(t2, o2) > 0.01);
  // and the sampler is demonstrably NOT the single-order distribution
  std::vector<double> single1(d.rows), single2(d.rows);
  std::mt19937 srng(1001);
  for (int r = 0; r < d.rows; ++r) {
    const double u = unif(srng);
    const double q = 0.3;
    const int v = u < (1 - q) * (1 - q) ? 0 : (u < (1 - q) * (1 - q) + 2 * q * (1 - q) ? 1 : 2);
    single1[r] = v + norm(srng);
    single2[r] = v + single1[r] + norm(srng);
  }
  CHECK(ks_two_sample_p(t2, single2) < 0.01);
}

TEST_CASE("doubling the signal doubles the regression slope") {
  SimulationSpec one{preset_truth("M1"), 100000, 0.3, 0.0, 1.0, 1.0, 17};
  SimulationSpec two{preset_truth("M1"), 100000, 0.3, 0.0, 2.0, 1.0, 17};
  const double s1 = regression_slope(simulate_graph_data(one), 1, 0);
  const double s2 = regression_slope(simulate_graph_data(two), 1, 0);
  CHECK(std::fabs(s2 - 2.0 * s1) < 0.05);
}

TEST_CASE("seeded determinism and seed sensitivity") {
  SimulationSpec spec{preset_truth("truth1"), 500, 0.3, 0.0, 1.0, 1.0, 99};
  const Mat a = simulate_graph_data(spec);
  const Mat b = simulate_graph_data(spec);
  CHECK(a == b);
  spec.seed = 100;
  const Mat c = simulate_graph_data(spec);
  CHECK_FALSE(a == c);

  // genotype columns stay in {0,1,2}
  for (int r = 0; r < a.rows; ++r) {
    CHECK(a(r, 0) >= 0.0);
    CHECK(a(r, 0) <= 2.0);
    CHECK(a(r, 0) == std::floor(a(r, 0)));
  }
}

TEST_CASE("spec validation") {
  SimulationSpec spec{preset_truth("M1"), 100, 0.3, 0.0, 1.0, 1.0, 1};
  spec.q = 1.5;
  CHECK_THROWS_AS(simulate_graph_data(spec), std::invalid_argument);
  spec.q = 0.3;
  spec.sigma = 0.0;
  CHECK_THROWS_AS(simulate_graph_data(spec), std::invalid_argument);
  spec.sigma = 1.0;
  spec.n = 0;
  CHECK_THROWS_AS(simulate_graph_data(spec), std::invalid_argument);
}

TEST_CASE("genotype nodes must be parentless") {
  MixedGraph bad({"V1", "T1"}, 1);
  bad.set_edge(1, 0, EdgeMark::Directed);
  SimulationSpec spec{bad, 100, 0.3, 0.0, 1.0, 1.0, 1};
  CHECK_THROWS_AS(simulate_graph_data(spec), std::invalid_argument);

  MixedGraph cyc({"A", "B", "C"}, 0);
  cyc.set_edge(0, 1, EdgeMark::Directed);
  cyc.set_edge(1, 2, EdgeMark::Directed);
  cyc.set_edge(2, 0, EdgeMark::Directed);
  SimulationSpec cspec{cyc, 100, 0.3, 0.0, 1.0, 1.0, 1};
  CHECK_THROWS_AS(simulate_graph_data(cspec), std::invalid_argument);
}

TEST_CASE("discretization") {
  // exact tertiles on 999 distinct values
  Rng rng(5);
  Mat d(999, 1);
  for (int r = 0; r < 999; ++r) d(r, 0) = rng.uniform();
  const Mat codes = discretize(d, 3, 0);
  int counts[3] = {0, 0, 0};
  for (int r = 0; r < 999; ++r) ++counts[static_cast<int>(codes(r, 0))];
  CHECK(counts[0] == 333);
  CHECK(counts[1] == 333);
  CHECK(counts[2] == 333);

  // median split balanced within one
  Mat e(101, 1);
  for (int r = 0; r < 101; ++r) e(r, 0) = std::sin(r * 12.9898) * 43758.5453;
  const Mat half = discretize(e, 2, 0);
  int c0 = 0, c1 = 0;
  for (int r = 0; r < 101; ++r) (half(r, 0) == 0.0 ? c0 : c1)++;
  CHECK(std::abs(c0 - c1) <= 1);

  // genotype columns pass through unchanged
  SimulationSpec spec{preset_truth("M1"), 200, 0.3, 0.0, 1.0, 1.0, 3};
  const Mat data = simulate_graph_data(spec);
  const Mat disc = discretize(data, 3, 1);
  for (int r = 0; r < 200; ++r) CHECK(disc(r, 0) == data(r, 0));

  Mat flat(10, 1, 4.0);
  CHECK_THROWS_AS(discretize(flat, 3, 0), std::invalid_argument);
  CHECK_THROWS_AS(discretize(d, 1, 0), std::invalid_argument);
}

TEST_CASE("preset catalog") {
  for (const std::string& name : preset_names()) {
    const MixedGraph g = preset_truth(name);
    CHECK(g.directed_part_is_acyclic());
    CHECK(g.size() >= 3);
  }
  CHECK(preset_truth("M4").undirected_edge_count() == 1);
  CHECK(preset_truth("truth1").size() == 4);
  CHECK(preset_truth("truth2").gv_count() == 2);
  CHECK_THROWS_AS(preset_truth("nope"), std::invalid_argument);
}

TEST_CASE("permutation harness shape and determinism") {
  const MixedGraph truth = preset_truth("truth1");
  const HarnessResult a = permutation_harness(truth, 400, 1.0, 2, 42);
  CHECK(a.permutations.size() == 6);
  CHECK(a.identifiers.size() == 2);
  for (const auto& row : a.identifiers) CHECK(row.size() == 6);
  CHECK(a.unique_counts.size() == 2);
  for (int u : a.unique_counts) CHECK(u >= 1);

  const HarnessResult b = permutation_harness(truth, 400, 1.0, 2, 42);
  for (int d = 0; d < 2; ++d)
    for (int p = 0; p < 6; ++p)
      CHECK(a.identifiers[d][p].to_string() == b.identifiers[d][p].to_string());

  CHECK_THROWS_AS(permutation_harness(MixedGraph({"A", "B"}, 0), 100, 1.0, 1, 1),
                  std::invalid_argument);
}
