#include "nbqc/bench.hpp"
#include "nbqc/io.hpp"
#include "nbqc/network.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace nbqc;

namespace {

LinkConfig random_links(int n, std::mt19937_64& rng, int max_m = 4) {
  LinkConfig c = LinkConfig::zeros(n);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const int m = static_cast<int>(rng() % static_cast<std::uint64_t>(max_m + 1));
      c.m_qq[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = m;
      c.m_qq[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)] = m;
    }
    c.m_qf[static_cast<std::size_t>(i)] = static_cast<int>(rng() % 3);
  }
  return c;
}

}  // namespace

TEST(Ring, SingleNodeKeepsAllPorts) {
  NodeGraph g;
  const auto r = build_ring(g, 1, 3, 0);
  EXPECT_EQ(r.nodes.size(), 1u);
  EXPECT_TRUE(r.edges.empty());
  EXPECT_EQ(g.free_ports(r.nodes[0]), 3);
}

TEST(Ring, FourCycleAtDegreeFour) {
  NodeGraph g;
  const auto r = build_ring(g, 4, 4, 0);
  EXPECT_EQ(g.edge_count(), 4);
  int free = 0;
  for (int v : r.nodes) free += g.free_ports(v);
  EXPECT_EQ(free, 8);
  EXPECT_TRUE(g.cluster_connected(0));
}

TEST(Ring, AgnosticLengthAtPaperConstants) {
  NetworkParams p;  // T_Bell = 1000, T_local = 1, d = 3
  const auto net = build_circuit_agnostic(1, p);
  EXPECT_EQ(net.qubits[0].n_ring, 500);
}

TEST(Factory, LeafCountAtPaperConstants) {
  LatencyTable lat;
  EXPECT_EQ(lat.n_leaf(), 1);
  lat.t_bell = 50;  // 2 / (50 * 0.01) = 4
  EXPECT_EQ(lat.n_leaf(), 4);
}

TEST(Factory, SingleGeneratorIsItsOwnRoot) {
  NodeGraph g;
  LatencyTable lat;
  const auto f = build_factory(g, 2, 1, lat, 3, 0);
  EXPECT_EQ(f.nodes, 2);
  EXPECT_EQ(f.ports[0].root, f.ports[0].generators[0]);
  EXPECT_TRUE(f.ports[0].gen_path[0].empty());
}

TEST(Factory, FourLeafShape) {
  NodeGraph g;
  LatencyTable lat;
  lat.t_bell = 50;
  const auto f = build_factory(g, 1, 4, lat, 3, 0);
  // a 4-leaf tree at d=3 (3 nodes) plus 4 generators
  EXPECT_EQ(f.nodes, 7);
  EXPECT_EQ(g.node_count(), 7);
  EXPECT_TRUE(g.degree_sound());
  EXPECT_GE(g.free_ports(f.ports[0].root), 1);
  for (std::size_t x = 0; x < 4; ++x) {
    EXPECT_TRUE(oracle::is_path(g, f.ports[0].gen_path[x], f.ports[0].root, f.ports[0].generators[x]));
  }
}

TEST(Agnostic, ToyExample) {
  NetworkParams p;
  p.lat.t_bell = 4;
  const auto net = build_circuit_agnostic(2, p);
  for (const auto& q : net.qubits) {
    EXPECT_EQ(q.n_ring, 2);
    EXPECT_EQ(q.n_int, 2);
    EXPECT_EQ(q.n_ext, 4);
    EXPECT_EQ(q.qf_ports.size(), 2u);
  }
  EXPECT_EQ(net.links_cfg.qq(0, 1), 2);
  EXPECT_EQ(net.links_cfg.qf(0), 2);
  EXPECT_EQ(net.links_cfg.qf(1), 2);
  EXPECT_EQ(net.pair_links[0][1].size(), 2u);
  EXPECT_TRUE(net.graph.degree_sound());
}

TEST(Agnostic, SingleQubitHasOnlyFactoryLinks) {
  NetworkParams p;
  p.lat.t_bell = 20;
  const auto net = build_circuit_agnostic(1, p);
  for (const auto& l : net.links) EXPECT_TRUE(l.qf);
  EXPECT_FALSE(net.links.empty());
}

TEST(Agnostic, SwitchingGrowsQuadratically) {
  NetworkParams p;
  p.lat.t_bell = 40;
  const auto a = build_circuit_agnostic(4, p);
  const auto b = build_circuit_agnostic(8, p);
  const double ratio = static_cast<double>(b.switching_nodes()) / static_cast<double>(a.switching_nodes());
  EXPECT_GT(ratio, 3.0);
  EXPECT_LT(ratio, 5.0);
}

TEST(Specific, ZeroConfigIsEmpty) {
  NetworkParams p;
  const auto net = build_circuit_specific(LinkConfig::zeros(3), p);
  EXPECT_TRUE(net.links.empty());
  EXPECT_EQ(net.switching_nodes(), 0);
  EXPECT_EQ(net.factory_nodes(), 0);
}

TEST(Specific, CountsMatchConstruction) {
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 40; ++trial) {
    NetworkParams p;
    p.d = 3 + trial % 4;
    p.lat.t_bell = trial % 2 ? 50 : 1000;
    p.s = trial % 3 == 0 ? 0 : 2;
    const auto cfg = random_links(2 + trial % 6, rng, 6);
    const auto net = build_circuit_specific(cfg, p);
    ASSERT_EQ(net.graph.node_count(), net.total_nodes());
    ASSERT_EQ(net.total_nodes(), circuit_specific_node_count(cfg, p));
    ASSERT_TRUE(net.graph.degree_sound());
    // factory ports are separate trees; each qubit component is one piece
    for (const auto& q : net.qubits) ASSERT_TRUE(net.graph.cluster_connected(q.cluster));
  }
}

TEST(Specific, LinksJoinTheRightComponents) {
  std::mt19937_64 rng(3);
  NetworkParams p;
  const auto cfg = random_links(5, rng);
  const auto net = build_circuit_specific(cfg, p);
  for (int i = 0; i < 5; ++i) {
    for (int j = 0; j < 5; ++j) {
      const std::size_t want = i == j ? static_cast<std::size_t>(cfg.qf(i)) : static_cast<std::size_t>(cfg.qq(i, j));
      EXPECT_EQ(net.pair_links[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].size(), want);
    }
  }
  for (const auto& l : net.links) {
    const auto& e = net.graph.edge(l.edge);
    const auto& qa = net.qubits[static_cast<std::size_t>(l.a)];
    EXPECT_TRUE(e.u == qa.sw.exit_node(l.qa) || e.v == qa.sw.exit_node(l.qa));
  }
}

TEST(Specific, PicksTheCheaperSwitch) {
  NetworkParams p;
  for (int n = 1; n <= 40; ++n) {
    const auto plan = plan_switch(n, n, p);
    const auto bip = bipartite_node_count(n, n, p.d);
    EXPECT_LE(plan_node_count(plan, n, n, p.d), bip);
    if (n > p.s) {
      EXPECT_LE(plan_node_count(plan, n, n, p.d), clos_node_count(n, n, p.d, p.s, p.t));
    }
  }
}

TEST(Specific, RingsDifferPerComponent) {
  NetworkParams p;
  LinkConfig cfg = LinkConfig::zeros(3);
  cfg.m_qq[0][1] = cfg.m_qq[1][0] = 5;
  cfg.m_qq[0][2] = cfg.m_qq[2][0] = 1;
  const auto net = build_circuit_specific(cfg, p);
  EXPECT_EQ(net.qubits[0].n_ring, 6);
  EXPECT_EQ(net.qubits[1].n_ring, 5);
  EXPECT_EQ(net.qubits[2].n_ring, 1);
}

TEST(Specific, RejectsBadInput) {
  NetworkParams p;
  LinkConfig cfg = LinkConfig::zeros(2);
  cfg.m_qq[0][1] = 1;
  EXPECT_THROW(build_circuit_specific(cfg, p), InputError);
  p.d = 2;
  EXPECT_THROW(build_circuit_specific(LinkConfig::zeros(2), p), InvalidDegree);
}

TEST(Manifest, RebuildsTheSameNetwork) {
  std::mt19937_64 rng(8);
  NetworkParams p;
  p.lat.t_bell = 200;
  const auto cfg = random_links(4, rng, 8);
  const auto net = build_circuit_specific(cfg, p);
  const auto j = manifest(net);
  const auto back = network_from_manifest(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(back.net.total_nodes(), net.total_nodes());
  EXPECT_EQ(back.net.graph.edge_count(), net.graph.edge_count());
  EXPECT_EQ(manifest(back.net), j);
}

TEST(Manifest, DotListsEveryNode) {
  NetworkParams p;
  LinkConfig cfg = LinkConfig::zeros(2);
  cfg.m_qq[0][1] = cfg.m_qq[1][0] = 2;
  const auto net = build_circuit_specific(cfg, p);
  std::ostringstream os;
  net.graph.write_dot(os);
  const std::string dot = os.str();
  EXPECT_NE(dot.find("graph"), std::string::npos);
  std::size_t edges = 0;
  for (std::size_t at = dot.find(" -- "); at != std::string::npos; at = dot.find(" -- ", at + 1)) ++edges;
  EXPECT_EQ(edges, static_cast<std::size_t>(net.graph.edge_count()));
}

TEST(LinkJson, RoundTripAndValidation) {
  std::mt19937_64 rng(4);
  auto cfg = random_links(4, rng);
  cfg.magic_demand = {1, 2, 3, 4};
  EXPECT_EQ(links_from_json(to_json(cfg)), cfg);
  auto bad = to_json(cfg);
  bad["m_qq"][0][1] = -1;
  EXPECT_THROW(links_from_json(bad), InputError);
  EXPECT_THROW(links_from_json(nlohmann::json{{"n_alg", 2}}), InputError);
}
