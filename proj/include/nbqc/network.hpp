#pragma once

#include "nbqc/profiler.hpp"
#include "nbqc/switching.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace nbqc {

// ---------------------------------------------------------------------------
// Link configuration
// ---------------------------------------------------------------------------

struct LinkConfig {
  int n_alg = 0;
  std::vector<std::vector<int>> m_qq;  // symmetric, zero diagonal
  std::vector<int> m_qf;
  /// Optional total magic-state demand per qubit; caps generators per port.
  std::vector<int> magic_demand;

  static LinkConfig zeros(int n) {
    LinkConfig c;
    c.n_alg = n;
    c.m_qq.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(n), 0));
    c.m_qf.assign(static_cast<std::size_t>(n), 0);
    return c;
  }

  [[nodiscard]] int qq(int i, int j) const { return m_qq[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]; }
  [[nodiscard]] int qf(int i) const { return m_qf[static_cast<std::size_t>(i)]; }

  [[nodiscard]] int n_ext(int i) const {
    int n = qf(i);
    for (int j = 0; j < n_alg; ++j) {
      if (j != i) n += qq(i, j);
    }
    return n;
  }

  void validate() const {
    const auto n = static_cast<std::size_t>(n_alg);
    if (n_alg < 0 || m_qq.size() != n || m_qf.size() != n) throw InputError("link config dimensions do not match n_alg");
    if (!magic_demand.empty() && magic_demand.size() != n) throw InputError("magic_demand length does not match n_alg");
    for (std::size_t i = 0; i < n; ++i) {
      if (m_qq[i].size() != n) throw InputError("link config m_qq is not square");
      if (m_qq[i][i] != 0) throw InputError("link config m_qq has a nonzero diagonal");
      if (m_qf[i] < 0) throw InputError("negative QF link count");
      for (std::size_t j = 0; j < n; ++j) {
        if (m_qq[i][j] < 0) throw InputError("negative QQ link count");
        if (m_qq[i][j] != m_qq[j][i]) throw InputError("link config m_qq is not symmetric");
      }
    }
  }

  friend bool operator==(const LinkConfig&, const LinkConfig&) = default;
};

inline nlohmann::json to_json(const LinkConfig& c) {
  nlohmann::json j{{"n_alg", c.n_alg}, {"m_qq", c.m_qq}, {"m_qf", c.m_qf}};
  if (!c.magic_demand.empty()) j["magic_demand"] = c.magic_demand;
  return j;
}

inline LinkConfig links_from_json(const nlohmann::json& j) {
  LinkConfig c;
  try {
    c.n_alg = j.at("n_alg").get<int>();
    c.m_qq = j.at("m_qq").get<std::vector<std::vector<int>>>();
    c.m_qf = j.at("m_qf").get<std::vector<int>>();
    if (j.contains("magic_demand")) c.magic_demand = j.at("magic_demand").get<std::vector<int>>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed link config JSON: ") + e.what());
  }
  c.validate();
  return c;
}

/// The bottleneck-free link configuration M = <Bias>.
inline LinkConfig links_from_profile(const AccessProfile& p) {
  LinkConfig c = LinkConfig::zeros(p.n_alg);
  c.m_qq = p.bias_qq;
  c.m_qf = p.bias_qf;
  return c;
}

inline std::vector<int> magic_demand(const LogicalCircuit& c) {
  std::vector<int> d(static_cast<std::size_t>(c.n_alg), 0);
  for (const Gate& g : c.gates) {
    if (g.kind == GateKind::TviaMagic) d[static_cast<std::size_t>(g.q[0])] += std::max(1, g.magic);
  }
  return d;
}

// ---------------------------------------------------------------------------
// Components
// ---------------------------------------------------------------------------

struct RingFragment {
  std::vector<int> nodes;
  std::vector<int> edges;  // edge p joins node p to node (p+1) mod n_ring
};

inline RingFragment build_ring(NodeGraph& g, int n_ring, int d, int cluster) {
  if (d < 3) throw InvalidDegree(d);
  if (n_ring < 1) throw InputError("ring needs at least one node");
  RingFragment r;
  for (int p = 0; p < n_ring; ++p) r.nodes.push_back(g.add_node(NodeRole::Ring, cluster, d));
  if (n_ring >= 2) {
    for (int p = 0; p < n_ring; ++p) {
      r.edges.push_back(g.add_edge(r.nodes[static_cast<std::size_t>(p)],
                                   r.nodes[static_cast<std::size_t>((p + 1) % n_ring)]));
    }
  }
  return r;
}

/// Internal ports a ring node can expose.
inline int ring_port_capacity(int n_ring, int d) { return n_ring == 1 ? d : d - 2; }

enum class SwitchChoice { None, Bipartite, Clos, Trees };

struct SwitchPlan {
  SwitchChoice kind = SwitchChoice::None;
  int s = 0;
  int t = 0;
  ClosTrim trim;
};

inline const char* to_string(SwitchChoice k) {
  switch (k) {
    case SwitchChoice::None: return "none";
    case SwitchChoice::Bipartite: return "bipartite";
    case SwitchChoice::Clos: return "clos";
    case SwitchChoice::Trees: return "trees";
  }
  return "?";
}

/// Picks the node-cheaper of a perfect bipartite network and a Clos network.
/// With params.s == 0, s is swept with t = 2s-1.
inline SwitchPlan plan_switch(int n_int, int n_ext, const NetworkParams& params) {
  SwitchPlan plan;
  if (n_int < 1 || n_ext < 1) return plan;
  plan.kind = SwitchChoice::Bipartite;
  std::int64_t best = bipartite_node_count(n_int, n_ext, params.d);
  auto consider = [&](int s, int t) {
    if (std::max(n_int, n_ext) <= s) return;  // degenerates to bipartite
    const std::int64_t n = clos_node_count(n_int, n_ext, params.d, s, t);
    if (n < best) {
      best = n;
      plan.kind = SwitchChoice::Clos;
      plan.s = s;
      plan.t = t;
    }
  };
  if (params.s == 0) {
    for (int s = 2; s < std::max(n_int, n_ext); ++s) consider(s, 2 * s - 1);
  } else {
    consider(params.s, params.t);
  }
  return plan;
}

/// Cheapest unreduced Clos plan for the port block, or a None plan when the
/// block fits inside one outer switch.
inline SwitchPlan clos_plan(int n_int, int n_ext, const NetworkParams& params) {
  SwitchPlan plan;
  std::int64_t best = std::numeric_limits<std::int64_t>::max();
  auto consider = [&](int s, int t) {
    if (n_int < 1 || n_ext < 1 || std::max(n_int, n_ext) <= s) return;
    const std::int64_t n = clos_node_count(n_int, n_ext, params.d, s, t);
    if (n < best) {
      best = n;
      plan = {SwitchChoice::Clos, s, t, {}};
    }
  };
  if (params.s == 0) {
    for (int s = 2; s < std::max(n_int, n_ext); ++s) consider(s, 2 * s - 1);
  } else {
    consider(params.s, params.t);
  }
  return plan;
}

inline std::int64_t plan_node_count(const SwitchPlan& p, int n_int, int n_ext, int d) {
  switch (p.kind) {
    case SwitchChoice::None: return 0;
    case SwitchChoice::Bipartite: return bipartite_node_count(n_int, n_ext, d);
    case SwitchChoice::Clos: return switch_node_count(n_int, n_ext, d, p.s, p.t, &p.trim);
    case SwitchChoice::Trees: return static_cast<std::int64_t>(n_int) * tree_node_count(n_ext / n_int, d);
  }
  return 0;
}

struct ExtPort {
  int partner = -1;  // qubit component, or -1 for the factory
  int link = -1;     // index into NbqcNetwork::links
};

struct QubitComponent {
  int index = 0;
  int cluster = -1;
  int n_ring = 1;
  int n_int = 0;
  int n_ext = 0;
  RingFragment ring;
  std::vector<int> port_pos;               // internal port -> ring position
  std::vector<int> port_edge;              // internal port -> ring-to-switch channel
  std::vector<std::vector<int>> ports_at;  // ring position -> internal ports
  SwitchPlan plan;
  SwitchNet sw;
  std::vector<ExtPort> ext;
  std::vector<std::vector<int>> partner_ports;  // partner -> external ports
  std::vector<int> qf_ports;
  int nodes = 0;
};

struct FactoryPort {
  int root = -1;
  std::vector<int> generators;
  std::vector<std::vector<int>> gen_path;  // channels from root to generator
};

struct FactoryComponent {
  int index = 0;
  int cluster = -1;
  int n_leaf = 1;       // generators per port after trimming
  int n_leaf_full = 1;  // untrimmed sizing
  Time period = 0;      // deterministic-rate success period per generator
  Time supply_period = 0;
  std::vector<FactoryPort> ports;
  int nodes = 0;
};

inline std::int64_t factory_port_node_count(int n_leaf, int d) {
  if (n_leaf <= 1) return 1;
  return tree_node_count(n_leaf, d) + n_leaf;
}

inline int trimmed_leaf_count(const LatencyTable& lat, int demand) {
  const int full = lat.n_leaf();
  return demand > 0 ? std::min(full, demand) : full;
}

/// Factory with one generator tree per external port. A single generator is
/// its own root; otherwise generators hang off the leaf slots of a tree.
inline FactoryComponent build_factory(NodeGraph& g, int n_ports, int n_leaf, const LatencyTable& lat, int d,
                                      int cluster, int n_leaf_full = 0) {
  if (d < 3) throw InvalidDegree(d);
  if (n_ports < 0) throw InputError("negative factory port count");
  FactoryComponent f;
  f.cluster = cluster;
  f.n_leaf = std::max(1, n_leaf);
  f.n_leaf_full = std::max(f.n_leaf, n_leaf_full);
  f.period = lat.magic_period();
  f.supply_period = std::max(ceil_div(f.period, f.n_leaf), lat.t_bell);
  for (int k = 0; k < n_ports; ++k) {
    FactoryPort port;
    if (f.n_leaf == 1) {
      port.root = g.add_node(NodeRole::Generator, cluster, d);
      port.generators.push_back(port.root);
      port.gen_path.emplace_back();
    } else {
      const TreeFragment tr = build_tree(g, f.n_leaf, d, NodeRole::Tree, cluster);
      port.root = tr.root;
      for (int x = 0; x < f.n_leaf; ++x) {
        const int gen = g.add_node(NodeRole::Generator, cluster, d);
        std::vector<int> path = tr.leaf_path[static_cast<std::size_t>(x)];
        path.push_back(g.add_edge(tr.leaf_node[static_cast<std::size_t>(x)], gen));
        port.generators.push_back(gen);
        port.gen_path.push_back(std::move(path));
      }
    }
    f.ports.push_back(std::move(port));
  }
  f.nodes = static_cast<int>(n_ports * factory_port_node_count(f.n_leaf, d));
  return f;
}

// ---------------------------------------------------------------------------
// Whole network
// ---------------------------------------------------------------------------

enum class NetworkMode { Agnostic, Specific };

struct Link {
  int a = -1;  // qubit component
  int qa = -1; // its external port
  int b = -1;  // partner qubit component, or factory index when qf
  int qb = -1;
  bool qf = false;
  int edge = -1;
};

struct NbqcNetwork {
  NetworkMode mode = NetworkMode::Specific;
  NetworkParams params;
  LinkConfig links_cfg;
  NodeGraph graph;
  std::vector<QubitComponent> qubits;
  std::vector<FactoryComponent> factories;
  std::vector<Link> links;
  /// Per ordered pair (i, j): links joining i and j.
  std::vector<std::vector<std::vector<int>>> pair_links;

  [[nodiscard]] int n_alg() const { return static_cast<int>(qubits.size()); }
  [[nodiscard]] std::int64_t qubit_nodes() const {
    std::int64_t n = 0;
    for (const auto& q : qubits) n += q.nodes;
    return n;
  }
  [[nodiscard]] std::int64_t factory_nodes() const {
    std::int64_t n = 0;
    for (const auto& f : factories) n += f.nodes;
    return n;
  }
  [[nodiscard]] std::int64_t total_nodes() const { return qubit_nodes() + factory_nodes(); }
  [[nodiscard]] std::int64_t ring_nodes() const {
    std::int64_t n = 0;
    for (const auto& q : qubits) n += q.n_ring;
    return n;
  }
  [[nodiscard]] std::int64_t switching_nodes() const { return qubit_nodes() - ring_nodes(); }
};

namespace detail {

inline void place_internal_ports(NodeGraph& g, QubitComponent& qc, int d) {
  qc.ports_at.assign(static_cast<std::size_t>(qc.n_ring), {});
  for (int p = 0; p < qc.n_int; ++p) {
    const int pos = p % qc.n_ring;
    qc.port_pos.push_back(pos);
    qc.ports_at[static_cast<std::size_t>(pos)].push_back(p);
    qc.port_edge.push_back(g.add_edge(qc.ring.nodes[static_cast<std::size_t>(pos)], qc.sw.entry_node(p)));
  }
  for (const auto& v : qc.ports_at) {
    if (static_cast<int>(v.size()) > ring_port_capacity(qc.n_ring, d)) throw Error("ring node over capacity");
  }
}

inline SwitchNet realize(NodeGraph& g, const SwitchPlan& plan, int n_int, int n_ext, int d, int cluster) {
  switch (plan.kind) {
    case SwitchChoice::None: return {};
    case SwitchChoice::Bipartite: return build_bipartite(g, n_int, n_ext, d, cluster);
    case SwitchChoice::Clos:
      return build_clos(g, n_int, n_ext, d, plan.s, plan.t, cluster, plan.trim.empty() ? nullptr : &plan.trim);
    case SwitchChoice::Trees: return build_port_trees(g, n_int, n_ext / n_int, d, cluster);
  }
  return {};
}

}  // namespace detail

inline std::int64_t ring_length_for(int n_int, int d) {
  if (n_int <= 0) return 1;
  return std::max<std::int64_t>(1, ceil_div(n_int, d - 2));
}

inline int internal_port_count(int n_ext, const NetworkParams& params) {
  if (params.n_int_eq_n_ext) return n_ext;
  return static_cast<int>(std::min<Time>(n_ext, params.lat.bell_ratio()));
}

/// Qubit-component node count for a given external port count, with the
/// cheapest switch. Used for incremental cost estimates.
inline std::int64_t qubit_component_node_count(int n_ext, const NetworkParams& params) {
  const int n_int = internal_port_count(n_ext, params);
  const SwitchPlan plan = plan_switch(n_int, n_ext, params);
  return ring_length_for(n_int, params.d) + plan_node_count(plan, n_int, n_ext, params.d);
}

inline std::int64_t factory_node_count(int m_qf, const LatencyTable& lat, int d, int demand = 0) {
  return m_qf * factory_port_node_count(trimmed_leaf_count(lat, demand), d);
}

/// Node total of the circuit-specific network for `cfg`, without building it.
inline std::int64_t circuit_specific_node_count(const LinkConfig& cfg, const NetworkParams& params) {
  std::int64_t n = 0;
  for (int i = 0; i < cfg.n_alg; ++i) {
    n += qubit_component_node_count(cfg.n_ext(i), params);
    const int demand = cfg.magic_demand.empty() ? 0 : cfg.magic_demand[static_cast<std::size_t>(i)];
    n += factory_node_count(cfg.qf(i), params.lat, params.d, demand);
  }
  return n;
}

/// Circuit-specific network. `plans` (optional, one per component) pins the
/// switch shape, e.g. a reduced Clos network.
inline NbqcNetwork build_circuit_specific(const LinkConfig& cfg, const NetworkParams& params,
                                          const std::vector<SwitchPlan>* plans = nullptr) {
  params.validate();
  cfg.validate();
  NbqcNetwork net;
  net.mode = NetworkMode::Specific;
  net.params = params;
  net.links_cfg = cfg;
  const int n = cfg.n_alg;
  const int d = params.d;
  net.pair_links.assign(static_cast<std::size_t>(n), std::vector<std::vector<int>>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i) {
    QubitComponent qc;
    qc.index = i;
    qc.cluster = net.graph.add_cluster("qubit " + std::to_string(i));
    qc.n_ext = cfg.n_ext(i);
    qc.n_int = qc.n_ext == 0 ? 0 : internal_port_count(qc.n_ext, params);
    qc.n_ring = static_cast<int>(ring_length_for(qc.n_int, d));
    qc.ring = build_ring(net.graph, qc.n_ring, d, qc.cluster);
    qc.plan = plans != nullptr ? (*plans)[static_cast<std::size_t>(i)] : plan_switch(qc.n_int, qc.n_ext, params);
    if (qc.n_ext == 0) qc.plan = {};
    qc.sw = detail::realize(net.graph, qc.plan, qc.n_int, qc.n_ext, d, qc.cluster);
    detail::place_internal_ports(net.graph, qc, d);
    qc.nodes = qc.n_ring + qc.sw.nodes;
    qc.partner_ports.assign(static_cast<std::size_t>(n), {});
    for (int j = 0; j < n; ++j) {
      for (int m = 0; m < cfg.qq(i, j); ++m) {
        qc.partner_ports[static_cast<std::size_t>(j)].push_back(static_cast<int>(qc.ext.size()));
        qc.ext.push_back({j, -1});
      }
    }
    for (int m = 0; m < cfg.qf(i); ++m) {
      qc.qf_ports.push_back(static_cast<int>(qc.ext.size()));
      qc.ext.push_back({-1, -1});
    }
    net.qubits.push_back(std::move(qc));
  }
  for (int i = 0; i < n; ++i) {
    const int demand = cfg.magic_demand.empty() ? 0 : cfg.magic_demand[static_cast<std::size_t>(i)];
    const int cluster = net.graph.add_cluster("factory " + std::to_string(i));
    FactoryComponent f = build_factory(net.graph, cfg.qf(i), trimmed_leaf_count(params.lat, demand), params.lat, d,
                                       cluster, params.lat.n_leaf());
    f.index = i;
    net.factories.push_back(std::move(f));
  }
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const auto& pi = net.qubits[static_cast<std::size_t>(i)].partner_ports[static_cast<std::size_t>(j)];
      const auto& pj = net.qubits[static_cast<std::size_t>(j)].partner_ports[static_cast<std::size_t>(i)];
      for (std::size_t m = 0; m < pi.size(); ++m) {
        Link l{i, pi[m], j, pj[m], false, -1};
        l.edge = net.graph.add_edge(net.qubits[static_cast<std::size_t>(i)].sw.exit_node(l.qa),
                                    net.qubits[static_cast<std::size_t>(j)].sw.exit_node(l.qb));
        const int id = static_cast<int>(net.links.size());
        net.links.push_back(l);
        net.qubits[static_cast<std::size_t>(i)].ext[static_cast<std::size_t>(l.qa)].link = id;
        net.qubits[static_cast<std::size_t>(j)].ext[static_cast<std::size_t>(l.qb)].link = id;
        net.pair_links[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].push_back(id);
        net.pair_links[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)].push_back(id);
      }
    }
    auto& qc = net.qubits[static_cast<std::size_t>(i)];
    for (std::size_t k = 0; k < qc.qf_ports.size(); ++k) {
      Link l{i, qc.qf_ports[k], i, static_cast<int>(k), true, -1};
      l.edge = net.graph.add_edge(qc.sw.exit_node(l.qa), net.factories[static_cast<std::size_t>(i)].ports[k].root);
      const int id = static_cast<int>(net.links.size());
      net.links.push_back(l);
      qc.ext[static_cast<std::size_t>(l.qa)].link = id;
      net.pair_links[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)].push_back(id);
    }
  }
  return net;
}

/// Circuit-agnostic network: common ring length, one fan-out tree per
/// internal port, and links v(i,j,k) <-> v(j,i,k).
inline NbqcNetwork build_circuit_agnostic(int n_alg, const NetworkParams& params) {
  params.validate();
  if (n_alg < 0) throw InputError("negative n_alg");
  NbqcNetwork net;
  net.mode = NetworkMode::Agnostic;
  net.params = params;
  const int d = params.d;
  const int n_ring = static_cast<int>(ceil_div(params.lat.t_bell, static_cast<Time>(d - 1) * params.lat.t_local));
  const int n_int = n_ring * (d - 2);
  net.links_cfg = LinkConfig::zeros(n_alg);
  for (int i = 0; i < n_alg; ++i) {
    net.links_cfg.m_qf[static_cast<std::size_t>(i)] = n_int;
    for (int j = 0; j < n_alg; ++j) {
      if (j != i) net.links_cfg.m_qq[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = n_int;
    }
  }
  net.pair_links.assign(static_cast<std::size_t>(n_alg), std::vector<std::vector<int>>(static_cast<std::size_t>(n_alg)));
  for (int i = 0; i < n_alg; ++i) {
    QubitComponent qc;
    qc.index = i;
    qc.cluster = net.graph.add_cluster("qubit " + std::to_string(i));
    qc.n_ring = n_ring;
    qc.n_int = n_int;
    qc.n_ext = n_int * n_alg;
    qc.ring = build_ring(net.graph, n_ring, d, qc.cluster);
    qc.plan.kind = SwitchChoice::Trees;
    qc.sw = detail::realize(net.graph, qc.plan, n_int, qc.n_ext, d, qc.cluster);
    // n_ring == 1 gives the lone ring node d ports; the agnostic sizing only
    // ever places d - 2 there, so round-robin placement is unchanged.
    detail::place_internal_ports(net.graph, qc, d);
    qc.nodes = n_ring + qc.sw.nodes;
    qc.partner_ports.assign(static_cast<std::size_t>(n_alg), {});
    for (int k = 0; k < n_int; ++k) {
      for (int j = 0; j < n_alg; ++j) {
        const int q = k * n_alg + j;
        qc.ext.push_back({j == i ? -1 : j, -1});
        if (j == i) {
          qc.qf_ports.push_back(q);
        } else {
          qc.partner_ports[static_cast<std::size_t>(j)].push_back(q);
        }
      }
    }
    net.qubits.push_back(std::move(qc));
  }
  for (int i = 0; i < n_alg; ++i) {
    const int cluster = net.graph.add_cluster("factory " + std::to_string(i));
    FactoryComponent f = build_factory(net.graph, n_int, params.lat.n_leaf(), params.lat, d, cluster);
    f.index = i;
    net.factories.push_back(std::move(f));
  }
  for (int k = 0; k < n_int; ++k) {
    for (int i = 0; i < n_alg; ++i) {
      for (int j = i; j < n_alg; ++j) {
        auto& qi = net.qubits[static_cast<std::size_t>(i)];
        Link l;
        l.a = i;
        l.qa = k * n_alg + j;
        if (j == i) {
          l.b = i;
          l.qb = k;
          l.qf = true;
          l.edge = net.graph.add_edge(qi.sw.exit_node(l.qa), net.factories[static_cast<std::size_t>(i)].ports[static_cast<std::size_t>(k)].root);
        } else {
          auto& qj = net.qubits[static_cast<std::size_t>(j)];
          l.b = j;
          l.qb = k * n_alg + i;
          l.edge = net.graph.add_edge(qi.sw.exit_node(l.qa), qj.sw.exit_node(l.qb));
        }
        const int id = static_cast<int>(net.links.size());
        net.links.push_back(l);
        qi.ext[static_cast<std::size_t>(l.qa)].link = id;
        if (!l.qf) net.qubits[static_cast<std::size_t>(j)].ext[static_cast<std::size_t>(l.qb)].link = id;
        net.pair_links[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)].push_back(id);
        if (j != i) net.pair_links[static_cast<std::size_t>(j)][static_cast<std::size_t>(i)].push_back(id);
      }
    }
  }
  return net;
}

// ---------------------------------------------------------------------------
// Manifest
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const NetworkParams& p) {
  return {{"d", p.d},
          {"s", p.s},
          {"t", p.t},
          {"n_int_eq_n_ext", p.n_int_eq_n_ext},
          {"t_bell", p.lat.t_bell},
          {"t_local", p.lat.t_local},
          {"t_magic", p.lat.t_magic},
          {"p_magic", p.lat.p_magic}};
}

inline nlohmann::json to_json(const ClosTrim& t) {
  nlohmann::json j{{"keep", t.keep}};
  if (!t.inner.empty()) {
    auto& arr = j["inner"] = nlohmann::json::array();
    for (const auto& x : t.inner) arr.push_back(to_json(x));
  }
  return j;
}

inline ClosTrim trim_from_json(const nlohmann::json& j) {
  ClosTrim t;
  t.keep = j.value("keep", -1);
  if (j.contains("inner")) {
    for (const auto& x : j.at("inner")) t.inner.push_back(trim_from_json(x));
  }
  return t;
}

inline nlohmann::json manifest(const NbqcNetwork& net) {
  nlohmann::json j;
  j["version"] = kVersion;
  j["mode"] = net.mode == NetworkMode::Agnostic ? "agnostic" : "specific";
  j["params"] = to_json(net.params);
  j["n_alg"] = net.n_alg();
  auto& comps = j["qubit_components"] = nlohmann::json::array();
  for (const auto& q : net.qubits) {
    nlohmann::json c{{"index", q.index},
                     {"n_ring", q.n_ring},
                     {"n_int", q.n_int},
                     {"n_ext", q.n_ext},
                     {"switch", to_string(q.plan.kind)},
                     {"nodes", q.nodes},
                     {"switch_nodes", q.sw.nodes}};
    if (q.plan.kind == SwitchChoice::Clos) {
      c["s"] = q.plan.s;
      c["t"] = q.plan.t;
      c["clos_depth"] = q.sw.clos_depth();
      if (!q.plan.trim.empty()) c["trim"] = to_json(q.plan.trim);
    }
    comps.push_back(std::move(c));
  }
  auto& facs = j["factory_components"] = nlohmann::json::array();
  for (const auto& f : net.factories) {
    facs.push_back({{"index", f.index},
                    {"ports", f.ports.size()},
                    {"n_leaf", f.n_leaf},
                    {"supply_period", f.supply_period},
                    {"nodes", f.nodes}});
  }
  if (net.mode == NetworkMode::Specific) j["links"] = to_json(net.links_cfg);
  auto& table = j["link_table"] = nlohmann::json::array();
  for (const auto& l : net.links) table.push_back({l.qf ? "qf" : "qq", l.a, l.qa, l.b, l.qb});
  j["totals"] = {{"qubit", net.qubit_nodes()},
                 {"ring", net.ring_nodes()},
                 {"switching", net.switching_nodes()},
                 {"factory", net.factory_nodes()},
                 {"total", net.total_nodes()},
                 {"channels", net.graph.edge_count()}};
  return j;
}

/// Switch plans stored in a manifest, for rebuilding a reduced network.
inline std::vector<SwitchPlan> plans_from_manifest(const nlohmann::json& j) {
  std::vector<SwitchPlan> plans;
  for (const auto& c : j.at("qubit_components")) {
    SwitchPlan p;
    const auto kind = c.at("switch").get<std::string>();
    if (kind == "bipartite") p.kind = SwitchChoice::Bipartite;
    if (kind == "clos") {
      p.kind = SwitchChoice::Clos;
      p.s = c.at("s").get<int>();
      p.t = c.at("t").get<int>();
      if (c.contains("trim")) p.trim = trim_from_json(c.at("trim"));
    }
    if (kind == "trees") p.kind = SwitchChoice::Trees;
    plans.push_back(std::move(p));
  }
  return plans;
}

}  // namespace nbqc
