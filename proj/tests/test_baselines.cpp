#include "nbqc/baselines.hpp"
#include "nbqc/bench.hpp"

#include <gtest/gtest.h>

using namespace nbqc;

namespace {

// `layers` rounds of disjoint CNOTs on n qubits.
LogicalCircuit remote_layers(int n, int layers) {
  LogicalCircuit c;
  c.n_alg = n;
  for (int l = 0; l < layers; ++l) {
    for (int i = 0; i + 1 < n; i += 2) bench::add(c, GateKind::CNOT, i, i + 1);
  }
  return c;
}

}  // namespace

TEST(CircuitBased, AdderNodeCounts) {
  LatencyTable lat;
  const auto e = cb_dftqc(bench::ripple_adder(13), lat);
  EXPECT_EQ(e.nodes_optimistic, 28);
  EXPECT_EQ(e.nodes_pessimistic, 28 * 26);
}

TEST(CircuitBased, LocalOnlyTakesNoTime) {
  LatencyTable lat;
  LogicalCircuit c;
  c.n_alg = 3;
  for (int q = 0; q < 3; ++q) bench::add(c, GateKind::H, q);
  bench::add(c, GateKind::TviaMagic, 1);
  EXPECT_EQ(cb_dftqc(c, lat).time, 0);
}

TEST(CircuitBased, EachRemoteLayerCostsOneBellTime) {
  LatencyTable lat;
  EXPECT_EQ(cb_dftqc(remote_layers(6, 5), lat).time, 5000);
  EXPECT_EQ(remote_layer_depth(remote_layers(6, 5)), 5);
}

TEST(CircuitBased, LocalLayersAreNotCounted) {
  LogicalCircuit c;
  c.n_alg = 2;
  bench::add(c, GateKind::CNOT, 0, 1);
  bench::add(c, GateKind::H, 0);
  bench::add(c, GateKind::H, 1);
  bench::add(c, GateKind::CNOT, 0, 1);
  EXPECT_EQ(remote_layer_depth(c), 2);
}

TEST(MeasurementBased, CliqueRingNodes) {
  LatencyTable lat;
  const auto c = remote_layers(10, 3);
  const auto e = mb_dftqc(MbKind::Clique, true, c, lat);
  EXPECT_EQ(e.scheme, "mb_clique_ring");
  EXPECT_EQ(e.nodes, 100000);
  EXPECT_EQ(mb_dftqc(MbKind::Brickwork, true, c, lat).nodes, 10000);
}

TEST(MeasurementBased, EmptyCircuitTakesBellTime) {
  LatencyTable lat;
  LogicalCircuit c;
  c.n_alg = 4;
  for (auto kind : {MbKind::Brickwork, MbKind::Clique}) {
    for (bool ring : {false, true}) EXPECT_EQ(mb_dftqc(kind, ring, c, lat).time, lat.t_bell);
  }
  EXPECT_EQ(mb_dftqc(MbKind::Clique, false, c, lat).nodes, 0);
}

TEST(MeasurementBased, BrickworkIsSlowerByAboutN) {
  LatencyTable lat;
  lat.t_bell = 10;
  const auto c = bench::random_circuit(12, 4000, 5);
  const auto depth = asap_schedule(c, lat).depth;
  const auto bw = mb_dftqc(MbKind::Brickwork, false, c, lat);
  const auto cl = mb_dftqc(MbKind::Clique, false, c, lat);
  EXPECT_EQ(bw.time, lat.t_bell + 12 * depth);
  EXPECT_EQ(cl.time, lat.t_bell + depth);
  const double ratio = static_cast<double>(bw.time) / static_cast<double>(cl.time);
  EXPECT_NEAR(ratio, 12.0, 0.5);
  // without a ring the chain grows with the depth
  EXPECT_EQ(cl.nodes, 144 * depth);
  EXPECT_EQ(bw.nodes, 12 * depth);
}
