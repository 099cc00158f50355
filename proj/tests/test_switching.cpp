#include "nbqc/switching.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <numeric>

using namespace nbqc;

TEST(TreeCount, SpotValues) {
  EXPECT_EQ(tree_node_count(2, 3), 1);
  EXPECT_EQ(tree_node_count(5, 3), 4);
  EXPECT_EQ(tree_node_count(9, 4), 4);
  EXPECT_THROW(tree_node_count(3, 2), InvalidDegree);
}

TEST(BipartiteCount, PaperValues) {
  EXPECT_EQ(bipartite_node_count(2, 3, 3), 7);
  EXPECT_EQ(bipartite_node_count(2, 3, 4), 5);
  EXPECT_EQ(bipartite_node_count(2, 3, 5), 1);
  EXPECT_EQ(bipartite_node_count(2, 3, 6), 1);
}

TEST(ClosCount, HandRecursion) {
  for (int d = 4; d <= 6; ++d) EXPECT_EQ(clos_node_count(2, 2, d, 2, 3), bipartite_node_count(2, 2, d));
  EXPECT_EQ(clos_node_count(4, 4, 6, 2, 3), 2 * 2 * bipartite_node_count(2, 3, 6) + 3 * bipartite_node_count(2, 2, 6));
  EXPECT_EQ(clos_node_count(4, 4, 6, 2, 3), 7);
  EXPECT_THROW(clos_node_count(4, 4, 3, 2, 2), NonBlockingViolation);
}

TEST(ClosCount, ClosedFormMatchesRecursion) {
  for (int s : {2, 3}) {
    const int t = 2 * s - 1;
    for (int d = 3; d <= 6; ++d) {
      std::int64_t n = 1;
      for (int k = 1; k <= 5; ++k) {
        n *= s;
        // the recurrence, evaluated directly
        std::int64_t rec = bipartite_node_count(s, s, d);
        std::int64_t m = s;
        for (int j = 2; j <= k; ++j) {
          m *= s;
          rec = 2 * (m / s) * bipartite_node_count(s, t, d) + t * rec;
        }
        EXPECT_EQ(clos_closed_form(k, d, s, t), rec) << "k=" << k << " d=" << d << " s=" << s;
        EXPECT_EQ(clos_node_count(n, n, d, s, t), rec) << "k=" << k << " d=" << d << " s=" << s;
      }
    }
  }
}

TEST(Construction, TreesMatchCount) {
  for (int d = 3; d <= 6; ++d) {
    for (int n = 1; n <= 64; ++n) {
      NodeGraph g;
      const auto tr = build_tree(g, n, d, NodeRole::Tree, 0);
      ASSERT_EQ(g.node_count(), tree_node_count(n, d));
      ASSERT_TRUE(g.degree_sound());
      ASSERT_TRUE(g.cluster_connected(0));
      ASSERT_EQ(static_cast<int>(tr.leaf_node.size()), n);
      EXPECT_GE(g.free_ports(tr.root), 1);
      for (int q = 0; q < n; ++q) {
        EXPECT_TRUE(oracle::is_path(g, tr.leaf_path[static_cast<std::size_t>(q)], tr.root, tr.leaf_node[static_cast<std::size_t>(q)]));
      }
    }
  }
}

TEST(Construction, BipartiteAndClosMatchCount) {
  for (int d = 3; d <= 6; ++d) {
    for (int n = 1; n <= 64; ++n) {
      NodeGraph g;
      build_bipartite(g, n, n, d, 0);
      ASSERT_EQ(g.node_count(), bipartite_node_count(n, n, d)) << n << " " << d;
      ASSERT_TRUE(g.degree_sound());
      for (int s : {2, 3}) {
        NodeGraph h;
        const auto sw = build_clos(h, n, n, d, s, 2 * s - 1, 0);
        ASSERT_EQ(h.node_count(), clos_node_count(n, n, d, s, 2 * s - 1)) << n << " " << d << " " << s;
        ASSERT_EQ(sw.nodes, h.node_count());
        ASSERT_TRUE(h.degree_sound());
        ASSERT_TRUE(h.cluster_connected(0));
      }
    }
  }
}

TEST(Construction, UnequalSides) {
  for (int d = 3; d <= 5; ++d) {
    for (int a = 1; a <= 12; ++a) {
      for (int b = 1; b <= 12; ++b) {
        NodeGraph g;
        build_clos(g, a, b, d, 2, 3, 0);
        EXPECT_EQ(g.node_count(), clos_node_count(a, b, d, 2, 3));
      }
    }
  }
}

TEST(Construction, ClosShape) {
  NodeGraph g;
  const auto sw = build_clos(g, 4, 4, 6, 2, 3, 0);
  EXPECT_EQ(sw.kind, SwitchKind::Clos);
  EXPECT_EQ(sw.left.size(), 2u);
  EXPECT_EQ(sw.right.size(), 2u);
  EXPECT_EQ(sw.middle.size(), 3u);
  NodeGraph h;
  EXPECT_NE(build_clos(h, 2, 2, 4, 2, 3, 0).kind, SwitchKind::Clos);
  NodeGraph big;
  build_clos(big, 16, 16, 3, 2, 3, 0);
  EXPECT_EQ(big.node_count(), clos_node_count(16, 16, 3, 2, 3));
}

TEST(Construction, TrimShrinksOuterSwitches) {
  ClosTrim trim;
  trim.keep = 1;
  NodeGraph g;
  const auto sw = build_clos(g, 8, 8, 3, 2, 3, 0, &trim);
  EXPECT_EQ(sw.middle.size(), 1u);
  EXPECT_EQ(g.node_count(), switch_node_count(8, 8, 3, 2, 3, &trim));
  EXPECT_LT(g.node_count(), clos_node_count(8, 8, 3, 2, 3));
}

TEST(Construction, BadParameters) {
  NodeGraph g;
  EXPECT_THROW(build_bipartite(g, 2, 3, 2, 0), InvalidDegree);
  EXPECT_THROW(build_clos(g, 4, 4, 3, 2, 2, 0), NonBlockingViolation);
  EXPECT_THROW(build_clos(g, 0, 4, 3, 2, 3, 0), InputError);
}

// Condition 1: every perfect matching routes on edge-disjoint paths.
TEST(NonBlocking, ConditionOneAllMatchings) {
  for (int n = 1; n <= 7; ++n) {
    for (int s : {0, 2, 3}) {
      NodeGraph g;
      const SwitchNet sw = s == 0 ? build_bipartite(g, n, n, 3, 0) : build_clos(g, n, n, 3, s, 2 * s - 1, 0);
      std::vector<int> src, dst;
      for (int p = 0; p < n; ++p) src.push_back(sw.entry_node(p));
      for (int q = 0; q < n; ++q) dst.push_back(sw.exit_node(q));
      ASSERT_EQ(oracle::max_flow(g, src, dst), n);
      std::vector<int> perm(static_cast<std::size_t>(n));
      std::iota(perm.begin(), perm.end(), 0);
      do {
        oracle::Matching m;
        for (int p = 0; p < n; ++p) m.push_back({p, perm[static_cast<std::size_t>(p)]});
        ASSERT_TRUE(oracle::condition_one(g, sw, m)) << "n=" << n << " s=" << s;
      } while (std::next_permutation(perm.begin(), perm.end()));
    }
  }
}

TEST(NonBlocking, OnlineAssignerNeverStalls) {
  for (auto [n, s] : {std::pair{4, 2}, {8, 2}, {6, 3}, {7, 2}}) {
    NodeGraph g;
    const auto sw = build_clos(g, n, n, 3, s, 2 * s - 1, 0);
    EXPECT_EQ(oracle::online_stalls(sw, static_cast<std::size_t>(g.edge_count()), 11, 500, 40), 0) << n << " " << s;
  }
}

TEST(NonBlocking, UndersizedMiddleStageStalls) {
  NodeGraph g;
  const auto sw = build_clos(g, 8, 8, 3, 2, 2, 0, nullptr, true);
  EXPECT_GT(oracle::online_stalls(sw, static_cast<std::size_t>(g.edge_count()), 11, 500, 40), 0);
}

TEST(Routing, ReturnedPathsAreDisjointFromHeldOnes) {
  std::mt19937_64 rng(5);
  NodeGraph g;
  const auto sw = build_clos(g, 4, 4, 3, 2, 3, 0);
  for (int trial = 0; trial < 300; ++trial) {
    EdgeClock clk(static_cast<std::size_t>(g.edge_count()), 0);
    // random background of consumed channels
    for (auto& r : clk.ready_at) r = rng() % 5 == 0 ? 100 : 0;
    std::set<int> held;
    std::vector<int> src, dst;
    std::vector<int> ins{0, 1, 2, 3}, outs{0, 1, 2, 3};
    std::shuffle(ins.begin(), ins.end(), rng);
    std::shuffle(outs.begin(), outs.end(), rng);
    for (int k = 0; k < 4; ++k) {
      const auto r = route_switch(sw, ins[static_cast<std::size_t>(k)], outs[static_cast<std::size_t>(k)], clk, 0);
      if (!r.found) {
        EXPECT_GT(r.earliest, 0);
        continue;
      }
      EXPECT_TRUE(oracle::is_path(g, r.edges, sw.entry_node(ins[static_cast<std::size_t>(k)]), sw.exit_node(outs[static_cast<std::size_t>(k)])));
      for (int e : r.edges) {
        EXPECT_TRUE(clk.ready(e, 0));
        EXPECT_TRUE(held.insert(e).second);
        clk.consume(e, 0, 100);
      }
      src.push_back(sw.entry_node(ins[static_cast<std::size_t>(k)]));
      dst.push_back(sw.exit_node(outs[static_cast<std::size_t>(k)]));
    }
    EXPECT_EQ(oracle::max_flow(g, src, dst), static_cast<int>(src.size()));
  }
}

TEST(Routing, ForcedChoiceIsHonoured) {
  NodeGraph g;
  const auto sw = build_clos(g, 8, 8, 3, 2, 3, 0);
  EdgeClock clk(static_cast<std::size_t>(g.edge_count()), 0);
  const std::vector<int> forced{2, 1};
  const auto r = route_switch(sw, 3, 5, clk, 0, forced);
  ASSERT_TRUE(r.found);
  EXPECT_EQ(r.choices, forced);
}

TEST(Routing, AllConsumedWaitsOneBellTime) {
  NodeGraph g;
  const auto sw = build_bipartite(g, 2, 3, 3, 0);
  EdgeClock clk(static_cast<std::size_t>(g.edge_count()), 0);
  for (int e = 0; e < g.edge_count(); ++e) clk.consume(e, 7, 1000);
  const auto r = route_switch(sw, 0, 1, clk, 7);
  EXPECT_FALSE(r.found);
  EXPECT_EQ(r.earliest, 1007);
}
