#pragma once

#include "nbqc/simulator.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <tuple>
#include <vector>

namespace nbqc {

// ---------------------------------------------------------------------------
// Step 1: initial links
// ---------------------------------------------------------------------------

inline LinkConfig init_links(const LogicalCircuit& c) {
  LinkConfig cfg = LinkConfig::zeros(c.n_alg);
  for (const Gate& g : c.gates) {
    const EventClass cls = classify(g);
    if (cls == EventClass::QQ) {
      cfg.m_qq[static_cast<std::size_t>(g.q[0])][static_cast<std::size_t>(g.q[1])] = 1;
      cfg.m_qq[static_cast<std::size_t>(g.q[1])][static_cast<std::size_t>(g.q[0])] = 1;
    } else if (cls == EventClass::QF) {
      cfg.m_qf[static_cast<std::size_t>(g.q[0])] = 1;
    }
  }
  cfg.magic_demand = magic_demand(c);
  return cfg;
}

// ---------------------------------------------------------------------------
// Clos middle-switch reduction
// ---------------------------------------------------------------------------

struct PortMap {
  std::vector<int> left;   // internal port -> left switch
  std::vector<int> right;  // external port -> right switch
};

inline PortMap cyclic_port_map(int n_int, int n_ext, int s) {
  PortMap m;
  const int L = static_cast<int>(ceil_div(n_int, s));
  const int R = static_cast<int>(ceil_div(n_ext, s));
  for (int p = 0; p < n_int; ++p) m.left.push_back(p % L);
  for (int q = 0; q < n_ext; ++q) m.right.push_back(q % R);
  return m;
}

struct ConflictOp {
  Time time = 0;
  int a = 0;  // left switch
  int c = 0;  // right switch
};

struct ConflictGraph {
  std::vector<std::vector<int>> adj;

  [[nodiscard]] int size() const { return static_cast<int>(adj.size()); }
  [[nodiscard]] int max_degree() const {
    std::size_t m = 0;
    for (const auto& v : adj) m = std::max(m, v.size());
    return static_cast<int>(m);
  }
  [[nodiscard]] std::size_t edge_count() const {
    std::size_t n = 0;
    for (const auto& v : adj) n += v.size();
    return n / 2;
  }
};

/// Ops conflict when they run within T_Bell of each other and share a left
/// or a right switch.
inline ConflictGraph build_conflict_graph(const std::vector<ConflictOp>& ops, Time t_bell) {
  ConflictGraph g;
  g.adj.resize(ops.size());
  std::vector<std::size_t> order(ops.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return ops[x].time < ops[y].time; });
  for (std::size_t u = 0; u < order.size(); ++u) {
    const auto& x = ops[order[u]];
    for (std::size_t v = u + 1; v < order.size(); ++v) {
      const auto& y = ops[order[v]];
      if (y.time - x.time >= t_bell) break;
      if (x.a == y.a || x.c == y.c) {
        g.adj[order[u]].push_back(static_cast<int>(order[v]));
        g.adj[order[v]].push_back(static_cast<int>(order[u]));
      }
    }
  }
  for (auto& v : g.adj) std::sort(v.begin(), v.end());
  return g;
}

struct Coloring {
  std::vector<int> color;
  int colors = 0;
};

inline Coloring color_welsh_powell(const ConflictGraph& g) {
  Coloring col;
  const int n = g.size();
  col.color.assign(static_cast<std::size_t>(n), -1);
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
    return g.adj[static_cast<std::size_t>(x)].size() > g.adj[static_cast<std::size_t>(y)].size();
  });
  std::vector<char> used;
  for (int v : order) {
    used.assign(g.adj[static_cast<std::size_t>(v)].size() + 1, 0);
    for (int u : g.adj[static_cast<std::size_t>(v)]) {
      const int c = col.color[static_cast<std::size_t>(u)];
      if (c >= 0 && c < static_cast<int>(used.size())) used[static_cast<std::size_t>(c)] = 1;
    }
    int c = 0;
    while (used[static_cast<std::size_t>(c)]) ++c;
    col.color[static_cast<std::size_t>(v)] = c;
    col.colors = std::max(col.colors, c + 1);
  }
  return col;
}

inline bool is_proper(const ConflictGraph& g, const Coloring& c) {
  for (int v = 0; v < g.size(); ++v) {
    for (int u : g.adj[static_cast<std::size_t>(v)]) {
      if (c.color[static_cast<std::size_t>(u)] == c.color[static_cast<std::size_t>(v)]) return false;
    }
  }
  return true;
}

struct ClosReduction {
  NbqcNetwork net;                  // reduced (or original when not applied)
  std::vector<SwitchPlan> plans;
  std::map<OpSide, std::vector<int>> forced;
  SimReport report;                 // simulation of `net`
  Time time_before = 0;
  Time time_after = 0;
  std::int64_t nodes_before = 0;
  std::int64_t nodes_after = 0;
  bool applied = false;
  std::size_t clashes = 0;  // conflict edges seen across all levels
};

namespace detail {

struct RoutedOp {
  Time time = 0;
  int in = 0;
  int out = 0;
  OpSide key;
  std::vector<int> probe;  // middle choices of the probe run, one per level
};

inline ClosTrim reduce_level(const SwitchNet& sw, const std::vector<RoutedOp>& ops, Time t_bell,
                             std::map<OpSide, std::vector<int>>& forced, std::size_t& clashes, std::size_t level = 0) {
  ClosTrim trim;
  if (sw.kind != SwitchKind::Clos) return trim;
  const int L = static_cast<int>(sw.left.size());
  const int R = static_cast<int>(sw.right.size());
  std::vector<ConflictOp> cops;
  cops.reserve(ops.size());
  for (const auto& op : ops) cops.push_back({op.time, op.in % L, op.out % R});
  const ConflictGraph g = build_conflict_graph(cops, t_bell);
  clashes += g.edge_count();
  Coloring col = color_welsh_powell(g);
  // The greedy colouring can overshoot the middle stage; the probe's own
  // routing is known to fit, so that level keeps it instead.
  if (col.colors > static_cast<int>(sw.middle.size())) {
    col.colors = 0;
    for (std::size_t x = 0; x < ops.size(); ++x) {
      col.color[x] = ops[x].probe.at(level);
      col.colors = std::max(col.colors, col.color[x] + 1);
    }
  }
  trim.keep = std::max(1, col.colors);
  std::vector<std::vector<RoutedOp>> per(static_cast<std::size_t>(trim.keep));
  for (std::size_t x = 0; x < ops.size(); ++x) {
    const int b = col.color[x];
    forced[ops[x].key].push_back(b);
    per[static_cast<std::size_t>(b)].push_back({ops[x].time, cops[x].a, cops[x].c, ops[x].key, ops[x].probe});
  }
  bool any_inner = false;
  for (int b = 0; b < trim.keep; ++b) {
    trim.inner.push_back(
        reduce_level(sw.middle[static_cast<std::size_t>(b)], per[static_cast<std::size_t>(b)], t_bell, forced, clashes, level + 1));
    any_inner = any_inner || !trim.inner.back().empty();
  }
  if (!any_inner) trim.inner.clear();
  return trim;
}

}  // namespace detail

/// Removes middle switches (and the outer-switch channels feeding them)
/// that the circuit never needs, keeping the simulated execution time
/// unchanged. Every component able to host a Clos network is tried; the
/// reduced Clos network replaces the original switch only when smaller.
/// The forced middle-switch assignment realizing the result is returned.
inline ClosReduction clos_optimize(const NbqcNetwork& net, const LogicalCircuit& c, SimConfig cfg = {}) {
  ClosReduction out;
  cfg.forced.clear();
  cfg.record_routes = false;
  SimReport base = simulate(net, c, cfg);
  out.time_before = base.total_time;
  out.nodes_before = net.total_nodes();
  auto keep_original = [&]() {
    out.net = net;
    out.plans.clear();
    for (const auto& qc : net.qubits) out.plans.push_back(qc.plan);
    out.forced.clear();
    out.report = std::move(base);
    out.time_after = out.time_before;
    out.nodes_after = out.nodes_before;
    out.applied = false;
    return out;
  };
  if (net.mode != NetworkMode::Specific) return keep_original();

  // Probe network: every eligible component gets its unreduced Clos switch.
  std::vector<SwitchPlan> probe_plans;
  bool any = false;
  for (const auto& qc : net.qubits) {
    SwitchPlan p = qc.plan.kind == SwitchChoice::Clos ? SwitchPlan{SwitchChoice::Clos, qc.plan.s, qc.plan.t, {}}
                                                      : clos_plan(qc.n_int, qc.n_ext, net.params);
    if (p.kind == SwitchChoice::None) p = qc.plan;
    any = any || p.kind == SwitchChoice::Clos;
    probe_plans.push_back(std::move(p));
  }
  if (!any) return keep_original();
  const NbqcNetwork probe = build_circuit_specific(net.links_cfg, net.params, &probe_plans);
  SimConfig pcfg = cfg;
  pcfg.record_routes = true;
  const SimReport routed = simulate(probe, c, pcfg);
  if (routed.start != base.start) return keep_original();

  std::vector<SwitchPlan> plans;
  std::map<OpSide, std::vector<int>> forced;
  bool changed = false;
  for (const auto& qc : probe.qubits) {
    const SwitchPlan& orig = net.qubits[static_cast<std::size_t>(qc.index)].plan;
    if (qc.plan.kind != SwitchChoice::Clos) {
      plans.push_back(orig);
      continue;
    }
    std::vector<detail::RoutedOp> ops;
    for (const auto& r : routed.routes) {
      if (r.component == qc.index) ops.push_back({r.time, r.in_port, r.out_port, {r.op, r.side}, r.choices});
    }
    std::map<OpSide, std::vector<int>> local;
    SwitchPlan p = qc.plan;
    p.trim = detail::reduce_level(qc.sw, ops, net.params.lat.t_bell, local, out.clashes);
    if (plan_node_count(p, qc.n_int, qc.n_ext, net.params.d) < plan_node_count(orig, qc.n_int, qc.n_ext, net.params.d)) {
      plans.push_back(std::move(p));
      forced.insert(local.begin(), local.end());
      changed = true;
    } else {
      plans.push_back(orig);
    }
  }
  if (!changed) return keep_original();
  NbqcNetwork reduced = build_circuit_specific(net.links_cfg, net.params, &plans);
  SimConfig rcfg = cfg;
  rcfg.forced = forced;
  SimReport rep = simulate(reduced, c, rcfg);
  if (rep.total_time != base.total_time || rep.start != base.start) return keep_original();
  out.nodes_after = reduced.total_nodes();
  out.net = std::move(reduced);
  out.plans = std::move(plans);
  out.forced = std::move(forced);
  out.report = std::move(rep);
  out.time_after = out.report.total_time;
  out.applied = true;
  return out;
}

// ---------------------------------------------------------------------------
// Bottlenecks and greedy updates
// ---------------------------------------------------------------------------

struct WaitLedger {
  std::map<QubitPair, std::vector<Time>> qq;
  std::map<int, std::vector<Time>> qf;

  [[nodiscard]] bool empty() const { return qq.empty() && qf.empty(); }
  [[nodiscard]] Time total() const {
    Time t = 0;
    for (const auto& [k, v] : qq) t = std::accumulate(v.begin(), v.end(), t);
    for (const auto& [k, v] : qf) t = std::accumulate(v.begin(), v.end(), t);
    return t;
  }
};

inline WaitLedger identify_bottlenecks(const SimReport& r) {
  WaitLedger l;
  for (const auto& w : r.waits) {
    if (w.wait <= 0) continue;
    if (w.cls == EventClass::QQ) {
      l.qq[make_pair_key(w.a, w.b)].push_back(w.wait);
    } else {
      l.qf[w.a].push_back(w.wait);
    }
  }
  return l;
}

/// Latency gain from adding one link to a link class holding M links.
inline double delta_w(Time w, int m, Time t_bell) {
  const double gain = static_cast<double>(t_bell) * (1.0 / m - 1.0 / (m + 1));
  return std::min(static_cast<double>(w), gain);
}

struct Candidate {
  bool qf = false;
  int i = 0;
  int j = 0;
  double gain = 0;
  std::int64_t dn = 0;
};

struct Update {
  LinkConfig next;
  Candidate pick;
};

/// Greedy step: the single link increment with the largest wait reduction
/// per added node. Returns nullopt when no candidate improves anything.
inline std::optional<Update> update_config(const LinkConfig& links, const WaitLedger& ledger, const NetworkParams& params) {
  const std::int64_t base = circuit_specific_node_count(links, params);
  std::vector<Candidate> cands;
  for (const auto& [pair, ws] : ledger.qq) {
    Candidate c{false, pair.first, pair.second, 0, 0};
    const int m = links.qq(pair.first, pair.second);
    for (Time w : ws) c.gain += delta_w(w, std::max(m, 1), params.lat.t_bell);
    LinkConfig next = links;
    ++next.m_qq[static_cast<std::size_t>(c.i)][static_cast<std::size_t>(c.j)];
    ++next.m_qq[static_cast<std::size_t>(c.j)][static_cast<std::size_t>(c.i)];
    c.dn = circuit_specific_node_count(next, params) - base;
    cands.push_back(c);
  }
  for (const auto& [i, ws] : ledger.qf) {
    Candidate c{true, i, i, 0, 0};
    const int m = links.qf(i);
    for (Time w : ws) c.gain += delta_w(w, std::max(m, 1), params.lat.t_bell);
    LinkConfig next = links;
    ++next.m_qf[static_cast<std::size_t>(i)];
    c.dn = circuit_specific_node_count(next, params) - base;
    cands.push_back(c);
  }
  const Candidate* best = nullptr;
  auto key = [](const Candidate& c) { return std::make_tuple(c.qf ? 1 : 0, c.i, c.j); };
  for (const auto& c : cands) {
    if (c.gain <= 0) continue;
    if (best == nullptr) {
      best = &c;
      continue;
    }
    // compare gain/dn without division; dn is clamped to 1
    const auto lhs = static_cast<long double>(c.gain) * static_cast<long double>(std::max<std::int64_t>(best->dn, 1));
    const auto rhs = static_cast<long double>(best->gain) * static_cast<long double>(std::max<std::int64_t>(c.dn, 1));
    if (lhs > rhs || (lhs == rhs && (c.dn < best->dn || (c.dn == best->dn && key(c) < key(*best))))) best = &c;
  }
  if (best == nullptr) return std::nullopt;
  Update u{links, *best};
  if (best->qf) {
    ++u.next.m_qf[static_cast<std::size_t>(best->i)];
  } else {
    ++u.next.m_qq[static_cast<std::size_t>(best->i)][static_cast<std::size_t>(best->j)];
    ++u.next.m_qq[static_cast<std::size_t>(best->j)][static_cast<std::size_t>(best->i)];
  }
  return u;
}

// ---------------------------------------------------------------------------
// Bottleneck-free configuration
// ---------------------------------------------------------------------------

struct BottleneckFree {
  LinkConfig links;
  NbqcNetwork net;
  SimReport report;
  int rounds = 0;  // extra rounds beyond M = <Bias> of the ideal timeline
};

/// M = <Bias> of the ideal timeline, raised where the simulated timeline
/// packs events more tightly than the ideal one.
inline BottleneckFree bottleneck_free_links(const LogicalCircuit& c, const NetworkParams& params,
                                            const SimConfig& cfg = {}, int max_rounds = 50) {
  const IdealTimeline tl = asap_schedule(c, params.lat);
  BottleneckFree out;
  out.links = links_from_profile(compute_bias(tl, params.lat.t_bell));
  out.links.magic_demand = magic_demand(c);
  for (int round = 0;; ++round) {
    out.net = build_circuit_specific(out.links, params);
    out.report = simulate(out.net, c, cfg);
    out.rounds = round;
    if (out.report.wait_free() || round >= max_rounds) return out;
    std::map<QubitPair, std::vector<Time>> qq;
    std::vector<std::vector<Time>> qf(static_cast<std::size_t>(c.n_alg));
    for (std::size_t k = 0; k < c.gates.size(); ++k) {
      const Gate& g = c.gates[k];
      const EventClass cls = classify(g);
      if (cls == EventClass::QQ) qq[make_pair_key(g.q[0], g.q[1])].push_back(out.report.start[k]);
      if (cls == EventClass::QF) qf[static_cast<std::size_t>(g.q[0])].push_back(out.report.start[k]);
    }
    for (auto& [p, v] : qq) std::sort(v.begin(), v.end());
    for (auto& v : qf) std::sort(v.begin(), v.end());
    const AccessProfile real = compute_bias(qq, qf, c.n_alg, params.lat.t_bell);
    bool grew = false;
    for (int i = 0; i < c.n_alg; ++i) {
      for (int j = 0; j < c.n_alg; ++j) {
        auto& m = out.links.m_qq[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        const int b = real.bias_qq[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        if (b > m) {
          m = b;
          grew = true;
        }
      }
      auto& m = out.links.m_qf[static_cast<std::size_t>(i)];
      const int b = real.bias_qf[static_cast<std::size_t>(i)];
      if (b > m) {
        m = b;
        grew = true;
      }
    }
    if (!grew) {
      for (const auto& w : out.report.waits) {
        if (w.cls == EventClass::QQ) {
          ++out.links.m_qq[static_cast<std::size_t>(w.a)][static_cast<std::size_t>(w.b)];
          ++out.links.m_qq[static_cast<std::size_t>(w.b)][static_cast<std::size_t>(w.a)];
        } else {
          ++out.links.m_qf[static_cast<std::size_t>(w.a)];
        }
        break;
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Optimization loop
// ---------------------------------------------------------------------------

struct ParetoPoint {
  LinkConfig links;
  std::int64_t nodes = 0;
  std::int64_t nodes_unreduced = 0;
  Time time = 0;
  int iteration = 0;
};

struct OptimizeOptions {
  bool clos_opt = true;
  int iteration_cap = 500;
  SimConfig sim;
};

struct OptimizeResult {
  std::vector<ParetoPoint> history;
  std::vector<ParetoPoint> frontier;
  std::string stop_reason;
};

/// Non-dominated points sorted by node count (time strictly decreasing).
inline std::vector<ParetoPoint> pareto(std::vector<ParetoPoint> pts) {
  std::stable_sort(pts.begin(), pts.end(), [](const ParetoPoint& a, const ParetoPoint& b) {
    return a.nodes != b.nodes ? a.nodes < b.nodes : a.time < b.time;
  });
  std::vector<ParetoPoint> out;
  for (auto& p : pts) {
    if (out.empty() || p.time < out.back().time) out.push_back(std::move(p));
  }
  return out;
}

namespace detail {

struct Evaluated {
  std::int64_t nodes = 0;
  std::int64_t nodes_unreduced = 0;
  SimReport report;
};

inline Evaluated evaluate(const LinkConfig& links, const LogicalCircuit& c, const NetworkParams& params,
                          const OptimizeOptions& opt) {
  Evaluated e;
  NbqcNetwork net = build_circuit_specific(links, params);
  e.nodes_unreduced = net.total_nodes();
  if (opt.clos_opt) {
    ClosReduction red = clos_optimize(net, c, opt.sim);
    e.nodes = red.nodes_after;
    e.report = std::move(red.report);
  } else {
    e.nodes = e.nodes_unreduced;
    e.report = simulate(net, c, opt.sim);
  }
  return e;
}

}  // namespace detail

inline OptimizeResult optimize_loop(const LogicalCircuit& c, const NetworkParams& params, std::int64_t node_budget,
                                    const OptimizeOptions& opt = {}) {
  OptimizeResult res;
  LinkConfig links = init_links(c);
  detail::Evaluated ev = detail::evaluate(links, c, params, opt);
  if (ev.nodes > node_budget) {
    throw BudgetTooSmall("initial network needs " + std::to_string(ev.nodes) + " nodes, budget is " +
                         std::to_string(node_budget));
  }
  res.history.push_back({links, ev.nodes, ev.nodes_unreduced, ev.report.total_time, 0});
  res.stop_reason = "iteration cap";
  for (int it = 1; it <= opt.iteration_cap; ++it) {
    const WaitLedger ledger = identify_bottlenecks(ev.report);
    if (ledger.empty()) {
      res.stop_reason = "no bottleneck";
      break;
    }
    auto up = update_config(links, ledger, params);
    if (!up) {
      res.stop_reason = "no improvement";
      break;
    }
    detail::Evaluated next = detail::evaluate(up->next, c, params, opt);
    if (next.nodes > node_budget) {
      res.stop_reason = "budget";
      break;
    }
    links = std::move(up->next);
    ev = std::move(next);
    res.history.push_back({links, ev.nodes, ev.nodes_unreduced, ev.report.total_time, it});
  }
  res.frontier = pareto(res.history);
  return res;
}

}  // namespace nbqc
