#include "nbqc/bench.hpp"
#include "nbqc/profiler.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace nbqc;

TEST(Bias, SingleEventCountsOne) {
  const std::vector<Time> ev{0};
  EXPECT_EQ(peak_window_count(ev, 1000), 1);
  EXPECT_EQ(peak_window_count(std::vector<Time>{}, 1000), 0);
}

TEST(Bias, WindowIsStrict) {
  EXPECT_EQ(peak_window_count(std::vector<Time>{0, 500, 999}, 1000), 3);
  EXPECT_EQ(peak_window_count(std::vector<Time>{0, 500, 1000}, 1000), 2);
}

TEST(Bias, MatchesBruteForce) {
  std::mt19937_64 rng(2024);
  for (int trial = 0; trial < 1000; ++trial) {
    const int k = static_cast<int>(rng() % 201);
    const Time w = 1 + static_cast<Time>(rng() % 300);
    std::vector<Time> ev(static_cast<std::size_t>(k));
    for (auto& t : ev) t = static_cast<Time>(rng() % 2000);
    std::sort(ev.begin(), ev.end());
    ASSERT_EQ(peak_window_count(ev, w), oracle::brute_bias(ev, w)) << "trial " << trial;
  }
}

TEST(Bias, BiasedPatternLoadsRowZero) {
  LatencyTable lat;
  const auto c = bench::biased_pattern(5, 4);
  const auto p = compute_bias(asap_schedule(c, lat), lat.t_bell);
  const auto st = bias_summary(p);
  for (int i = 1; i < 5; ++i) {
    EXPECT_GT(p.bias_qq[0][static_cast<std::size_t>(i)], 0);
    for (int j = 1; j < 5; ++j) EXPECT_EQ(p.bias_qq[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], 0);
  }
  EXPECT_EQ(st.row_sums[0], st.total_qq);
}

TEST(Bias, ProfileIsSymmetric) {
  LatencyTable lat;
  lat.t_bell = 100;
  const auto p = compute_bias(asap_schedule(bench::random_circuit(7, 500, 9), lat), lat.t_bell);
  for (int i = 0; i < 7; ++i) {
    EXPECT_EQ(p.bias_qq[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)], 0);
    for (int j = 0; j < 7; ++j) {
      EXPECT_EQ(p.bias_qq[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                p.bias_qq[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)]);
    }
  }
}

TEST(Bias, ShorterWindowNeverIncreasesBias) {
  LatencyTable lat;
  const auto tl = asap_schedule(bench::random_circuit(6, 400, 5), lat);
  const auto wide = compute_bias(tl, 200);
  const auto narrow = compute_bias(tl, 50);
  for (int i = 0; i < 6; ++i) {
    EXPECT_LE(narrow.bias_qf[static_cast<std::size_t>(i)], wide.bias_qf[static_cast<std::size_t>(i)]);
    for (int j = 0; j < 6; ++j) {
      EXPECT_LE(narrow.bias_qq[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)],
                wide.bias_qq[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
    }
  }
}

TEST(Summary, ZeroProfile) {
  AccessProfile p;
  p.n_alg = 3;
  p.bias_qq.assign(3, std::vector<int>(3, 0));
  p.bias_qf.assign(3, 0);
  const auto st = bias_summary(p);
  EXPECT_EQ(st.total_qq, 0);
  EXPECT_EQ(st.max_bias_qq, 0);
  EXPECT_EQ(st.max_bias_qf, 0);
  EXPECT_DOUBLE_EQ(st.concentration, 0.0);
  EXPECT_EQ(st.row_sums, std::vector<int>(3, 0));
}

TEST(Summary, RecomputedDirectly) {
  LatencyTable lat;
  lat.t_bell = 60;
  const auto p = compute_bias(asap_schedule(bench::random_circuit(5, 300, 17), lat), lat.t_bell);
  const auto st = bias_summary(p);
  int total = 0, mx = 0, mxf = 0;
  std::vector<int> rows(5, 0);
  for (std::size_t i = 0; i < 5; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      rows[i] += p.bias_qq[i][j];
      if (i < j) total += p.bias_qq[i][j];
      mx = std::max(mx, p.bias_qq[i][j]);
    }
    mxf = std::max(mxf, p.bias_qf[i]);
  }
  EXPECT_EQ(st.row_sums, rows);
  EXPECT_EQ(st.total_qq, total);
  EXPECT_EQ(st.max_bias_qq, mx);
  EXPECT_EQ(st.max_bias_qf, mxf);
  // Gini via sorted-rank formula
  std::vector<double> x(rows.begin(), rows.end());
  std::sort(x.begin(), x.end());
  double num = 0, sum = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    num += (2.0 * static_cast<double>(i + 1) - 6.0) * x[i];
    sum += x[i];
  }
  EXPECT_NEAR(st.concentration, num / (5.0 * sum), 1e-12);
}

TEST(ProfileJson, DenseAndSparseRoundTrip) {
  LatencyTable lat;
  for (int n : {4, 70}) {
    const auto p = compute_bias(asap_schedule(bench::random_circuit(n, 600, 3), lat), lat.t_bell);
    const auto j = to_json(p);
    EXPECT_EQ(j["format"], n <= 64 ? "dense" : "sparse");
    const auto back = profile_from_json(j);
    EXPECT_EQ(back.bias_qq, p.bias_qq);
    EXPECT_EQ(back.bias_qf, p.bias_qf);
  }
}

TEST(ProfileJson, EmptyCircuitGivesZeroProfile) {
  LatencyTable lat;
  LogicalCircuit c;
  c.n_alg = 3;
  const auto p = compute_bias(asap_schedule(c, lat), lat.t_bell);
  EXPECT_EQ(bias_summary(p).total_qq, 0);
  EXPECT_THROW(profile_from_json(nlohmann::json{{"n_alg", 2}}), InputError);
}
