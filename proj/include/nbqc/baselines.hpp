#pragma once

#include "nbqc/circuit.hpp"

#include <algorithm>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

namespace nbqc {

/// Order-of-magnitude cost of a baseline scheme; constants are 1 and magic
/// states are ignored.
struct BaselineEstimate {
  std::string scheme;
  Time time = 0;
  std::int64_t nodes = 0;
  std::string note = "order estimate, magic ignored";
};

struct CbEstimate {
  Time time = 0;
  std::int64_t nodes_optimistic = 0;
  std::int64_t nodes_pessimistic = 0;
};

/// Gate-layer depth counting only layers that hold a two-qubit gate.
inline std::int64_t remote_layer_depth(const LogicalCircuit& c) {
  std::vector<std::int64_t> layer(static_cast<std::size_t>(c.n_alg), 0);
  std::set<std::int64_t> remote;
  for (const Gate& g : c.gates) {
    std::int64_t l = 0;
    for (int s = 0; s < g.arity(); ++s) l = std::max(l, layer[static_cast<std::size_t>(g.q[static_cast<std::size_t>(s)])]);
    ++l;
    for (int s = 0; s < g.arity(); ++s) layer[static_cast<std::size_t>(g.q[static_cast<std::size_t>(s)])] = l;
    if (classify(g) == EventClass::QQ) remote.insert(l);
  }
  return static_cast<std::int64_t>(remote.size());
}

/// Circuit-based DFTQC: each remote layer waits for fresh Bell pairs.
inline CbEstimate cb_dftqc(const LogicalCircuit& c, const LatencyTable& lat) {
  CbEstimate e;
  e.time = remote_layer_depth(c) * lat.t_bell;
  e.nodes_optimistic = c.n_alg;
  e.nodes_pessimistic = static_cast<std::int64_t>(c.n_alg) * std::max(0, c.n_alg - 2);
  return e;
}

enum class MbKind { Brickwork, Clique };

inline BaselineEstimate mb_dftqc(MbKind kind, bool ring, const LogicalCircuit& c, const LatencyTable& lat) {
  const Time depth = asap_schedule(c, lat).depth;
  const std::int64_t n = c.n_alg;
  const std::int64_t len = ring ? lat.bell_ratio() : depth;
  BaselineEstimate e;
  if (kind == MbKind::Brickwork) {
    e.scheme = ring ? "mb_brickwork_ring" : "mb_brickwork";
    e.time = lat.t_bell + n * depth * lat.t_local;
    e.nodes = n * len;
  } else {
    e.scheme = ring ? "mb_clique_ring" : "mb_clique";
    e.time = lat.t_bell + depth * lat.t_local;
    e.nodes = n * n * len;
  }
  return e;
}

}  // namespace nbqc
