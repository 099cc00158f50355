#pragma once

#include "nbqc/network.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <ostream>
#include <queue>
#include <random>
#include <sstream>
#include <string>
#include <vector>

namespace nbqc {

enum class MagicMode { Deterministic, Stochastic };

inline const char* to_string(MagicMode m) { return m == MagicMode::Deterministic ? "deterministic" : "stochastic"; }

inline MagicMode magic_mode_from_string(const std::string& s) {
  if (s == "deterministic") return MagicMode::Deterministic;
  if (s == "stochastic") return MagicMode::Stochastic;
  throw InputError("unknown magic mode '" + s + "'");
}

/// Key of one side of a remote op: (instruction index, operand slot).
using OpSide = std::pair<std::size_t, int>;

struct SimConfig {
  std::optional<LatencyTable> lat;  // defaults to the network's table
  std::uint64_t seed = 1;
  MagicMode magic = MagicMode::Deterministic;
  bool per_edge_swap = false;  // swap cost = path length * t_local
  /// Forced middle-switch choices per op side (preorder over Clos levels).
  std::map<OpSide, std::vector<int>> forced;
  bool record_trace = false;
  bool record_routes = false;
};

enum class WaitCause { None, Link, Switching, Ring, Factory };

inline const char* to_string(WaitCause c) {
  switch (c) {
    case WaitCause::None: return "none";
    case WaitCause::Link: return "link";
    case WaitCause::Switching: return "switching";
    case WaitCause::Ring: return "ring";
    case WaitCause::Factory: return "factory";
  }
  return "?";
}

struct OpWait {
  std::size_t op = 0;
  EventClass cls = EventClass::QQ;
  int a = -1;
  int b = -1;  // partner, or a itself for QF
  Time requested = 0;
  Time wait = 0;
  Time by_cause[5] = {0, 0, 0, 0, 0};
};

struct RouteRecord {
  std::size_t op = 0;
  int side = 0;
  int component = 0;
  Time time = 0;
  int in_port = 0;
  int out_port = 0;
  std::vector<int> choices;
};

struct TraceEvent {
  Time time = 0;
  std::string kind;  // gate | wait | teleport
  std::size_t op = 0;
  int a = -1;
  int b = -1;
  std::string detail;

  friend bool operator==(const TraceEvent&, const TraceEvent&) = default;
};

struct SimReport {
  Time total_time = 0;
  std::vector<Time> start;
  std::vector<Time> finish;
  std::vector<OpWait> waits;  // one entry per remote op that waited
  std::map<QubitPair, std::vector<std::pair<std::size_t, Time>>> w_qq;
  std::vector<std::vector<std::pair<std::size_t, Time>>> w_qf;
  Time overhead[5] = {0, 0, 0, 0, 0};
  std::vector<std::int64_t> edge_uses;
  std::vector<std::int64_t> teleports;
  std::size_t remote_ops = 0;
  std::vector<RouteRecord> routes;
  std::vector<TraceEvent> trace;

  [[nodiscard]] Time total_wait() const {
    Time t = 0;
    for (const auto& w : waits) t += w.wait;
    return t;
  }
  [[nodiscard]] bool wait_free() const { return waits.empty(); }
};

/// T_Bell + D: startup plus algorithmic depth.
inline Time estimate_ideal_floor(const IdealTimeline& tl, const LatencyTable& lat) { return lat.t_bell + tl.depth; }

// ---------------------------------------------------------------------------
// Path assignment
// ---------------------------------------------------------------------------

struct PathResult {
  bool found = false;
  std::vector<int> edges;
  std::vector<int> choices_a;
  std::vector<int> choices_b;
  Time wait_until = 0;
  WaitCause cause = WaitCause::None;
};

/// One side of a routing request: internal port `in` of component `comp`
/// towards external port `out`.
struct PathEnd {
  int comp = -1;
  int in = -1;
  int out = -1;
  std::span<const int> forced;
};

/// Path from a's ring node through a's switch, across `link`, then either
/// through b's switch to b's ring node or into factory port `gen_port`.
/// Every returned channel is ready at `now`; otherwise wait_until bounds the
/// earliest time a retry can succeed.
inline PathResult assign_path(const NbqcNetwork& net, const EdgeClock& clk, int link, const PathEnd& a,
                              const std::optional<PathEnd>& b, Time now) {
  PathResult r;
  Time bound = now + 1;
  auto need = [&](int e, WaitCause c) {
    if (clk.ready(e, now)) return true;
    bound = std::max(bound, clk.ready_at[static_cast<std::size_t>(e)]);
    if (r.cause == WaitCause::None || static_cast<int>(c) < static_cast<int>(r.cause)) r.cause = c;
    return false;
  };
  bool ok = need(net.links[static_cast<std::size_t>(link)].edge, WaitCause::Link);
  auto side = [&](const PathEnd& e, std::vector<int>& choices) {
    const auto& qc = net.qubits[static_cast<std::size_t>(e.comp)];
    bool good = need(qc.port_edge[static_cast<std::size_t>(e.in)], WaitCause::Ring);
    RouteResult rr = route_switch(qc.sw, e.in, e.out, clk, now, e.forced);
    if (!rr.found) {
      good = false;
      bound = std::max(bound, rr.earliest);
      if (r.cause == WaitCause::None || r.cause == WaitCause::Ring) r.cause = WaitCause::Switching;
    } else {
      r.edges.insert(r.edges.end(), rr.edges.begin(), rr.edges.end());
      choices = std::move(rr.choices);
    }
    if (good) r.edges.push_back(qc.port_edge[static_cast<std::size_t>(e.in)]);
    return good;
  };
  ok = side(a, r.choices_a) && ok;
  if (b) ok = side(*b, r.choices_b) && ok;
  if (ok) {
    r.edges.push_back(net.links[static_cast<std::size_t>(link)].edge);
    r.found = true;
    r.cause = WaitCause::None;
    r.wait_until = now;
  } else {
    r.edges.clear();
    r.wait_until = bound;
  }
  return r;
}

// ---------------------------------------------------------------------------
// Simulation
// ---------------------------------------------------------------------------

namespace detail {

struct Generator {
  bool stored = false;
  Time next_success = 0;
};

class Simulation {
public:
  Simulation(const NbqcNetwork& net, const LogicalCircuit& c, const SimConfig& cfg)
      : net_(net), c_(c), cfg_(cfg), lat_(cfg.lat.value_or(net.params.lat)), rng_(cfg.seed) {}

  SimReport run() {
    c_.validate();
    if (c_.n_alg > net_.n_alg()) throw InputError("network has fewer qubit components than the circuit");
    const IdealTimeline tl = asap_schedule(c_, lat_);
    const std::size_t n_gates = c_.gates.size();
    clk_ = EdgeClock(static_cast<std::size_t>(net_.graph.edge_count()), lat_.t_bell);
    rep_.start.assign(n_gates, -1);
    rep_.finish.assign(n_gates, -1);
    rep_.w_qf.assign(static_cast<std::size_t>(c_.n_alg), {});
    rep_.teleports.assign(static_cast<std::size_t>(net_.n_alg()), 0);
    pos_.assign(static_cast<std::size_t>(net_.n_alg()), 0);
    cur_.assign(static_cast<std::size_t>(net_.n_alg()), 0);
    // The circuit starts once every channel holds its first Bell pair.
    avail_.assign(static_cast<std::size_t>(c_.n_alg), lat_.t_bell);
    init_generators();

    std::vector<std::vector<std::size_t>> chain(static_cast<std::size_t>(c_.n_alg));
    for (std::size_t k = 0; k < n_gates; ++k) {
      for (int s = 0; s < c_.gates[k].arity(); ++s) chain[static_cast<std::size_t>(c_.gates[k].q[static_cast<std::size_t>(s)])].push_back(k);
    }
    std::vector<std::size_t> head(static_cast<std::size_t>(c_.n_alg), 0);
    std::vector<Time> requested(n_gates, 0);
    std::vector<char> pushed(n_gates, 0);

    using Entry = std::tuple<Time, Time, std::size_t>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> pq;
    auto at_head = [&](std::size_t k) {
      const Gate& g = c_.gates[k];
      for (int s = 0; s < g.arity(); ++s) {
        const auto q = static_cast<std::size_t>(g.q[static_cast<std::size_t>(s)]);
        if (head[q] >= chain[q].size() || chain[q][head[q]] != k) return false;
      }
      return true;
    };
    auto try_push = [&](std::size_t k) {
      if (pushed[k] || !at_head(k)) return;
      pushed[k] = 1;
      const Gate& g = c_.gates[k];
      Time t = 0;
      for (int s = 0; s < g.arity(); ++s) t = std::max(t, avail_[static_cast<std::size_t>(g.q[static_cast<std::size_t>(s)])]);
      requested[k] = t;
      pq.emplace(t, tl.instrs[k].start, k);
    };
    for (int q = 0; q < c_.n_alg; ++q) {
      if (!chain[static_cast<std::size_t>(q)].empty()) try_push(chain[static_cast<std::size_t>(q)].front());
    }

    std::map<std::size_t, OpWait> pending_wait;
    while (!pq.empty()) {
      const auto [now, ideal, k] = pq.top();
      pq.pop();
      const Gate& g = c_.gates[k];
      const EventClass cls = classify(g);
      Attempt at;
      if (cls == EventClass::Local) {
        at.ok = true;
        at.finish = now + latency(g.kind, lat_);
      } else {
        at = cls == EventClass::QQ ? try_qq(k, g, now) : try_qf(k, g, now);
      }
      if (!at.ok) {
        auto [it, fresh] = pending_wait.try_emplace(k);
        auto& w = it->second;
        if (fresh) {
          w.op = k;
          w.cls = cls;
          w.a = g.q[0];
          w.b = cls == EventClass::QQ ? g.q[1] : g.q[0];
          w.requested = requested[k];
        }
        const Time until = std::max(at.wait_until, now + 1);
        w.by_cause[static_cast<int>(at.cause)] += until - now;
        rep_.overhead[static_cast<int>(at.cause)] += until - now;
        if (cfg_.record_trace) {
          rep_.trace.push_back({now, "wait", k, w.a, w.b, std::string(to_string(at.cause)) + " until=" + std::to_string(until)});
        }
        pq.emplace(until, ideal, k);
        continue;
      }
      if (cls != EventClass::Local) ++rep_.remote_ops;
      rep_.start[k] = now;
      rep_.finish[k] = at.finish;
      rep_.total_time = std::max(rep_.total_time, at.finish);
      if (cfg_.record_trace) {
        rep_.trace.push_back({now, "gate", k, g.q[0], g.q[1], std::string(to_string(g.kind)) + " finish=" + std::to_string(at.finish)});
      }
      for (int s = 0; s < g.arity(); ++s) {
        const auto q = static_cast<std::size_t>(g.q[static_cast<std::size_t>(s)]);
        avail_[q] = at.finish + (at.teleport[s] ? lat_.t_local : 0);
        if (at.teleport[s] && cfg_.record_trace) {
          rep_.trace.push_back({at.finish, "teleport", k, static_cast<int>(q), -1, "to=" + std::to_string(pos_[q])});
        }
      }
      if (auto it = pending_wait.find(k); it != pending_wait.end()) {
        OpWait w = it->second;
        pending_wait.erase(it);
        w.wait = now - w.requested;
        if (w.cls == EventClass::QQ) {
          rep_.w_qq[make_pair_key(w.a, w.b)].emplace_back(k, w.wait);
        } else {
          rep_.w_qf[static_cast<std::size_t>(w.a)].emplace_back(k, w.wait);
        }
        rep_.waits.push_back(w);
      }
      for (int s = 0; s < g.arity(); ++s) {
        const auto q = static_cast<std::size_t>(g.q[static_cast<std::size_t>(s)]);
        ++head[q];
        if (head[q] < chain[q].size()) try_push(chain[q][head[q]]);
      }
    }
    rep_.edge_uses = clk_.uses;
    std::sort(rep_.waits.begin(), rep_.waits.end(), [](const OpWait& x, const OpWait& y) { return x.op < y.op; });
    return std::move(rep_);
  }

private:
  struct Attempt {
    bool ok = false;
    Time finish = 0;
    Time wait_until = 0;
    WaitCause cause = WaitCause::None;
    bool teleport[2] = {false, false};
  };

  void init_generators() {
    gens_.clear();
    for (const auto& f : net_.factories) {
      std::vector<std::vector<Generator>> ports;
      for (const auto& p : f.ports) {
        std::vector<Generator> gs(p.generators.size());
        for (std::size_t x = 0; x < gs.size(); ++x) {
          if (cfg_.magic == MagicMode::Deterministic) {
            gs[x].next_success = ceil_div(f.period * static_cast<Time>(x + 1), f.n_leaf_full);
          } else {
            gs[x].next_success = sample_success(0);
          }
        }
        ports.push_back(std::move(gs));
      }
      gens_.push_back(std::move(ports));
    }
  }

  Time sample_success(Time from) {
    std::geometric_distribution<std::int64_t> geo(lat_.p_magic);
    return from + (geo(rng_) + 1) * lat_.t_magic;
  }

  Time swap_cost(const PathResult& p) const {
    if (!cfg_.per_edge_swap) return lat_.t_local;
    return static_cast<Time>(p.edges.size()) * lat_.t_local;
  }

  int pick_link(const std::vector<int>& cands, Time now, Time& earliest) const {
    int best = -1;
    earliest = std::numeric_limits<Time>::max();
    for (int l : cands) {
      const int e = net_.links[static_cast<std::size_t>(l)].edge;
      if (clk_.ready(e, now)) {
        if (best < 0 || clk_.last_used[static_cast<std::size_t>(e)] <
                            clk_.last_used[static_cast<std::size_t>(net_.links[static_cast<std::size_t>(best)].edge)]) {
          best = l;
        }
      } else {
        earliest = std::min(earliest, clk_.ready_at[static_cast<std::size_t>(e)]);
      }
    }
    return best;
  }

  [[nodiscard]] int current_port(int comp) const {
    const auto& qc = net_.qubits[static_cast<std::size_t>(comp)];
    return qc.ports_at[static_cast<std::size_t>(pos_[static_cast<std::size_t>(comp)])][static_cast<std::size_t>(cur_[static_cast<std::size_t>(comp)])];
  }

  /// Whether using the current port leaves the ring node without ports.
  [[nodiscard]] bool exhausts(int comp) const {
    const auto& qc = net_.qubits[static_cast<std::size_t>(comp)];
    return cur_[static_cast<std::size_t>(comp)] + 1 ==
               static_cast<int>(qc.ports_at[static_cast<std::size_t>(pos_[static_cast<std::size_t>(comp)])].size()) &&
           qc.n_ring >= 2;
  }

  void advance_port(int comp, Time now) {
    const auto& qc = net_.qubits[static_cast<std::size_t>(comp)];
    auto& pos = pos_[static_cast<std::size_t>(comp)];
    auto& cur = cur_[static_cast<std::size_t>(comp)];
    if (cur + 1 < static_cast<int>(qc.ports_at[static_cast<std::size_t>(pos)].size())) {
      ++cur;
      return;
    }
    cur = 0;
    if (qc.n_ring >= 2) {
      clk_.consume(qc.ring.edges[static_cast<std::size_t>(pos)], now, lat_.t_bell);
      pos = (pos + 1) % qc.n_ring;
      ++rep_.teleports[static_cast<std::size_t>(comp)];
    }
  }

  std::span<const int> forced_for(std::size_t k, int side) const {
    auto it = cfg_.forced.find({k, side});
    if (it == cfg_.forced.end()) return {};
    return it->second;
  }

  void record_route(std::size_t k, int side, int comp, Time now, int in, int out, const std::vector<int>& ch) {
    if (cfg_.record_routes) rep_.routes.push_back({k, side, comp, now, in, out, ch});
  }

  // Agnostic networks: all qubits sit at the same ring index, advancing
  // every (d-1) time units; ports on that node are shared round the slot.
  [[nodiscard]] Time slot_length() const { return static_cast<Time>(net_.params.d - 1) * lat_.t_local; }
  [[nodiscard]] int agnostic_pos(Time now) const {
    return static_cast<int>((now / slot_length()) % net_.qubits.front().n_ring);
  }

  /// The teleport channel is committed together with the node's last port.
  bool ring_ready(int comp, bool teleport, Time now, Time& bound) const {
    if (!teleport) return true;
    const auto& qc = net_.qubits[static_cast<std::size_t>(comp)];
    const int e = qc.ring.edges[static_cast<std::size_t>(pos_[static_cast<std::size_t>(comp)])];
    if (clk_.ready(e, now)) return true;
    bound = std::max(bound, clk_.ready_at[static_cast<std::size_t>(e)]);
    return false;
  }

  Attempt try_qq(std::size_t k, const Gate& g, Time now) {
    Attempt at;
    const int i = g.q[0];
    const int j = g.q[1];
    const auto& cands = net_.pair_links[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    if (cands.empty()) throw Unroutable("no QQ link between qubits " + std::to_string(i) + " and " + std::to_string(j) + " (op " + std::to_string(k) + ")");
    if (net_.mode == NetworkMode::Agnostic) return try_agnostic(k, g, now);
    Time link_ready = 0;
    const int link = pick_link(cands, now, link_ready);
    if (link < 0) {
      at.cause = WaitCause::Link;
      at.wait_until = link_ready;
      return at;
    }
    const Link& L = net_.links[static_cast<std::size_t>(link)];
    const int qi = L.a == i ? L.qa : L.qb;
    const int qj = L.a == i ? L.qb : L.qa;
    const int pi = current_port(i);
    const int pj = current_port(j);
    const bool ti = exhausts(i);
    const bool tj = exhausts(j);
    PathResult p = assign_path(net_, clk_, link, PathEnd{i, pi, qi, forced_for(k, 0)}, PathEnd{j, pj, qj, forced_for(k, 1)}, now);
    Time ring_bound = now + 1;
    const bool ring_ok = ring_ready(i, ti, now, ring_bound) & ring_ready(j, tj, now, ring_bound);
    if (!p.found || !ring_ok) {
      at.cause = p.found ? WaitCause::Ring : p.cause;
      at.wait_until = std::max(p.found ? now + 1 : p.wait_until, ring_ok ? now + 1 : ring_bound);
      return at;
    }
    for (int e : p.edges) clk_.consume(e, now, lat_.t_bell);
    record_route(k, 0, i, now, pi, qi, p.choices_a);
    record_route(k, 1, j, now, pj, qj, p.choices_b);
    at.ok = true;
    at.finish = now + swap_cost(p) + latency(g.kind, lat_);
    at.teleport[0] = ti;
    at.teleport[1] = tj;
    advance_port(i, now);
    advance_port(j, now);
    return at;
  }

  /// Picks a generator with a stored state and a ready path from the port root.
  int pick_generator(int comp, int fport, Time now, Time& bound) {
    auto& gs = gens_[static_cast<std::size_t>(comp)][static_cast<std::size_t>(fport)];
    const auto& port = net_.factories[static_cast<std::size_t>(comp)].ports[static_cast<std::size_t>(fport)];
    int best = -1;
    bound = std::numeric_limits<Time>::max();
    for (std::size_t x = 0; x < gs.size(); ++x) {
      if (!gs[x].stored && gs[x].next_success <= now) gs[x].stored = true;
      Time ready = gs[x].stored ? now : gs[x].next_success;
      for (int e : port.gen_path[x]) ready = std::max(ready, clk_.ready_at[static_cast<std::size_t>(e)]);
      if (ready <= now) {
        if (best < 0 || gs[x].next_success < gs[static_cast<std::size_t>(best)].next_success) best = static_cast<int>(x);
      } else {
        bound = std::min(bound, ready);
      }
    }
    return best;
  }

  void consume_generator(int comp, int fport, int x, Time now) {
    auto& gen = gens_[static_cast<std::size_t>(comp)][static_cast<std::size_t>(fport)][static_cast<std::size_t>(x)];
    const auto& f = net_.factories[static_cast<std::size_t>(comp)];
    for (int e : f.ports[static_cast<std::size_t>(fport)].gen_path[static_cast<std::size_t>(x)]) clk_.consume(e, now, lat_.t_bell);
    gen.stored = false;
    gen.next_success = cfg_.magic == MagicMode::Deterministic ? now + f.period : sample_success(now);
  }

  Attempt try_qf(std::size_t k, const Gate& g, Time now) {
    Attempt at;
    const int i = g.q[0];
    const auto& cands = net_.pair_links[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)];
    if (cands.empty()) throw Unroutable("no QF link for qubit " + std::to_string(i) + " (op " + std::to_string(k) + ")");
    if (net_.mode == NetworkMode::Agnostic) return try_agnostic(k, g, now);
    Time link_ready = 0;
    const int link = pick_link(cands, now, link_ready);
    if (link < 0) {
      at.cause = WaitCause::Link;
      at.wait_until = link_ready;
      return at;
    }
    const Link& L = net_.links[static_cast<std::size_t>(link)];
    const int pi = current_port(i);
    const bool ti = exhausts(i);
    PathResult p = assign_path(net_, clk_, link, PathEnd{i, pi, L.qa, forced_for(k, 0)}, std::nullopt, now);
    Time ring_bound = now + 1;
    const bool ring_ok = ring_ready(i, ti, now, ring_bound);
    Time gen_bound = 0;
    const int gen = pick_generator(i, L.qb, now, gen_bound);
    if (!p.found || !ring_ok || gen < 0) {
      at.cause = !p.found ? p.cause : (!ring_ok ? WaitCause::Ring : WaitCause::Factory);
      Time until = now + 1;
      if (!p.found) until = std::max(until, p.wait_until);
      if (!ring_ok) until = std::max(until, ring_bound);
      if (gen < 0) until = std::max(until, gen_bound);
      at.wait_until = until;
      return at;
    }
    for (int e : p.edges) clk_.consume(e, now, lat_.t_bell);
    consume_generator(i, L.qb, gen, now);
    record_route(k, 0, i, now, pi, L.qa, p.choices_a);
    at.ok = true;
    at.finish = now + swap_cost(p) + latency(g.kind, lat_);
    at.teleport[0] = ti;
    advance_port(i, now);
    return at;
  }

  Attempt try_agnostic(std::size_t k, const Gate& g, Time now) {
    Attempt at;
    const bool qf = g.kind == GateKind::TviaMagic;
    const int i = g.q[0];
    const int j = qf ? i : g.q[1];
    const auto& qi = net_.qubits[static_cast<std::size_t>(i)];
    const auto& qj = net_.qubits[static_cast<std::size_t>(j)];
    const int pos = agnostic_pos(now);
    const Time next_slot = (now / slot_length() + 1) * slot_length();
    int port = -1;
    for (int P : qi.ports_at[static_cast<std::size_t>(pos)]) {
      if (clk_.ready(qi.port_edge[static_cast<std::size_t>(P)], now) &&
          (qf || clk_.ready(qj.port_edge[static_cast<std::size_t>(P)], now))) {
        port = P;
        break;
      }
    }
    if (port < 0) {
      at.cause = WaitCause::Ring;
      at.wait_until = next_slot;
      return at;
    }
    const int n = net_.n_alg();
    const int link = qi.ext[static_cast<std::size_t>(port * n + j)].link;
    std::optional<PathEnd> other;
    if (!qf) other = PathEnd{j, port, port * n + i, {}};
    PathResult p = assign_path(net_, clk_, link, PathEnd{i, port, port * n + j, {}}, other, now);
    Time gen_bound = 0;
    int gen = -1;
    if (qf) gen = pick_generator(i, port, now, gen_bound);
    if (!p.found || (qf && gen < 0)) {
      at.cause = !p.found ? p.cause : WaitCause::Factory;
      Time until = now + 1;
      if (!p.found) until = std::max(until, p.wait_until);
      if (qf && gen < 0) until = std::max(until, gen_bound);
      at.wait_until = std::min(until, next_slot);
      return at;
    }
    for (int e : p.edges) clk_.consume(e, now, lat_.t_bell);
    if (qf) consume_generator(i, port, gen, now);
    record_route(k, 0, i, now, port, port * n + j, {});
    if (!qf) record_route(k, 1, j, now, port, port * n + i, {});
    at.ok = true;
    at.finish = now + swap_cost(p) + latency(g.kind, lat_);
    return at;
  }

  const NbqcNetwork& net_;
  const LogicalCircuit& c_;
  const SimConfig& cfg_;
  LatencyTable lat_;
  std::mt19937_64 rng_;
  EdgeClock clk_;
  SimReport rep_;
  std::vector<int> pos_;
  std::vector<int> cur_;
  std::vector<Time> avail_;
  std::vector<std::vector<std::vector<Generator>>> gens_;
};

}  // namespace detail

/// Discrete-event timing simulation of `c` on `net`.
inline SimReport simulate(const NbqcNetwork& net, const LogicalCircuit& c, const SimConfig& cfg = {}) {
  detail::Simulation sim(net, c, cfg);
  return sim.run();
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const SimReport& r) {
  nlohmann::json j;
  j["total_time"] = r.total_time;
  j["remote_ops"] = r.remote_ops;
  j["total_wait"] = r.total_wait();
  j["overhead"] = {{"link", r.overhead[1]}, {"switching", r.overhead[2]}, {"ring", r.overhead[3]}, {"factory", r.overhead[4]}};
  auto& qq = j["w_qq"] = nlohmann::json::array();
  for (const auto& [pair, v] : r.w_qq) {
    for (const auto& [k, w] : v) qq.push_back({pair.first, pair.second, k, w});
  }
  auto& qf = j["w_qf"] = nlohmann::json::array();
  for (std::size_t i = 0; i < r.w_qf.size(); ++i) {
    for (const auto& [k, w] : r.w_qf[i]) qf.push_back({i, k, w});
  }
  j["teleports"] = r.teleports;
  std::int64_t used = 0;
  std::int64_t max_use = 0;
  for (auto u : r.edge_uses) {
    used += u > 0 ? 1 : 0;
    max_use = std::max(max_use, u);
  }
  j["edges"] = {{"total", r.edge_uses.size()}, {"used", used}, {"max_uses", max_use}};
  return j;
}

/// One line per event: `<time> <kind> op=<k> a=<i> b=<j> <detail>`.
inline std::string format_trace_line(const TraceEvent& e) {
  std::ostringstream os;
  os << e.time << ' ' << e.kind << " op=" << e.op << " a=" << e.a << " b=" << e.b;
  if (!e.detail.empty()) os << ' ' << e.detail;
  return os.str();
}

inline TraceEvent parse_trace_line(const std::string& line) {
  TraceEvent e;
  std::istringstream is(line);
  std::string op, a, b;
  if (!(is >> e.time >> e.kind >> op >> a >> b) || op.rfind("op=", 0) != 0 || a.rfind("a=", 0) != 0 ||
      b.rfind("b=", 0) != 0) {
    throw InputError("malformed trace line: " + line);
  }
  e.op = static_cast<std::size_t>(std::stoull(op.substr(3)));
  e.a = std::stoi(a.substr(2));
  e.b = std::stoi(b.substr(2));
  std::getline(is >> std::ws, e.detail);
  return e;
}

inline void write_trace(std::ostream& os, const SimReport& r) {
  for (const auto& e : r.trace) os << format_trace_line(e) << '\n';
}

inline std::vector<TraceEvent> read_trace(std::istream& is) {
  std::vector<TraceEvent> out;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty()) out.push_back(parse_trace_line(line));
  }
  return out;
}

}  // namespace nbqc
