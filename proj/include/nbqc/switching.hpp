#pragma once

#include "nbqc/graph.hpp"

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <span>
#include <vector>

namespace nbqc {

// ---------------------------------------------------------------------------
// Closed-form node counts
// ---------------------------------------------------------------------------

/// Nodes of a tree with one root port and n leaf ports.
inline std::int64_t tree_node_count(std::int64_t n, int d) {
  if (d < 3) throw InvalidDegree(d);
  if (n < 1) throw InputError("tree needs at least one leaf port");
  if (n < d) return 1;
  return ceil_div(n - 1, d - 2);
}

inline std::int64_t bipartite_node_count(std::int64_t n_int, std::int64_t n_ext, int d) {
  if (d < 3) throw InvalidDegree(d);
  if (n_int < 1 || n_ext < 1) throw InputError("bipartite network needs ports on both sides");
  if (n_int + n_ext <= d) return 1;
  return n_ext * tree_node_count(n_int, d) + n_int * tree_node_count(n_ext, d);
}

/// Per-Clos-level record of how many middle switches survive reduction.
/// keep < 0 keeps all t switches; inner[b] applies to middle switch b.
struct ClosTrim {
  int keep = -1;
  std::vector<ClosTrim> inner;

  [[nodiscard]] bool empty() const { return keep < 0 && inner.empty(); }
};

namespace detail {
inline const ClosTrim* inner_trim(const ClosTrim* trim, int b) {
  if (trim == nullptr || static_cast<std::size_t>(b) >= trim->inner.size()) return nullptr;
  return &trim->inner[static_cast<std::size_t>(b)];
}
}  // namespace detail

/// Node count of the switch used for an (n_in, n_out) port block: a
/// bipartite network when both sides fit in one outer switch, otherwise a
/// three-stage Clos network whose middle switches recurse.
inline std::int64_t switch_node_count(std::int64_t n_in, std::int64_t n_out, int d, int s, int t,
                                      const ClosTrim* trim = nullptr) {
  if (std::max(n_in, n_out) <= s) return bipartite_node_count(n_in, n_out, d);
  const std::int64_t left = ceil_div(n_in, s);
  const std::int64_t right = ceil_div(n_out, s);
  const int mids = (trim != nullptr && trim->keep >= 0) ? trim->keep : t;
  // outer switches lose the exits of removed middle switches
  std::int64_t total = left * bipartite_node_count(s, mids, d) + right * bipartite_node_count(mids, s, d);
  for (int b = 0; b < mids; ++b) {
    total += switch_node_count(left, right, d, s, t, detail::inner_trim(trim, b));
  }
  return total;
}

inline std::int64_t clos_node_count(std::int64_t n_int, std::int64_t n_ext, int d, int s, int t) {
  if (d < 3) throw InvalidDegree(d);
  if (s < 2) throw InputError("Clos parameter s must be >= 2");
  if (t < 2 * s - 1) throw NonBlockingViolation(s, t);
  return switch_node_count(n_int, n_ext, d, s, t);
}

/// Closed-form count of a Clos network with s^k ports on each side.
inline std::int64_t clos_closed_form(int k, int d, int s, int t) {
  if (k < 1) throw InputError("k must be >= 1");
  std::int64_t geo = 0;  // (t^{k-1} - s^{k-1}) / (t - s)
  for (int i = 0; i <= k - 2; ++i) {
    std::int64_t term = 1;
    for (int a = 0; a < i; ++a) term *= t;
    for (int a = 0; a < k - 2 - i; ++a) term *= s;
    geo += term;
  }
  std::int64_t tk = 1;
  for (int a = 0; a < k - 1; ++a) tk *= t;
  return 2 * s * geo * bipartite_node_count(s, t, d) + tk * bipartite_node_count(s, s, d);
}

// ---------------------------------------------------------------------------
// Trees
// ---------------------------------------------------------------------------

struct TreeFragment {
  int root = -1;
  std::vector<int> leaf_node;               // node hosting leaf port q
  std::vector<std::vector<int>> leaf_path;  // tree edges from root to leaf q
  int nodes = 0;
};

/// Builds a heap-shaped tree; the root keeps one slot free for its root port.
inline TreeFragment build_tree(NodeGraph& g, int n, int d, NodeRole role, int cluster) {
  const int count = static_cast<int>(tree_node_count(n, d));
  TreeFragment tr;
  tr.nodes = count;
  std::vector<int> ids(static_cast<std::size_t>(count));
  std::vector<int> parent_edge(static_cast<std::size_t>(count), -1);
  std::vector<int> parent(static_cast<std::size_t>(count), -1);
  for (int m = 0; m < count; ++m) {
    ids[static_cast<std::size_t>(m)] = g.add_node(role, cluster, d);
    if (m > 0) {
      const int p = (m - 1) / (d - 1);
      parent[static_cast<std::size_t>(m)] = p;
      parent_edge[static_cast<std::size_t>(m)] =
          g.add_edge(ids[static_cast<std::size_t>(p)], ids[static_cast<std::size_t>(m)]);
    }
  }
  tr.root = ids[0];
  for (int m = 0; m < count && static_cast<int>(tr.leaf_node.size()) < n; ++m) {
    int free = g.free_ports(ids[static_cast<std::size_t>(m)]);
    if (m == 0) --free;  // root port
    // children not yet attached would be built above; all are attached already
    std::vector<int> path;
    for (int x = m; x > 0; x = parent[static_cast<std::size_t>(x)]) {
      path.push_back(parent_edge[static_cast<std::size_t>(x)]);
    }
    std::reverse(path.begin(), path.end());
    for (int k = 0; k < free && static_cast<int>(tr.leaf_node.size()) < n; ++k) {
      tr.leaf_node.push_back(ids[static_cast<std::size_t>(m)]);
      tr.leaf_path.push_back(path);
    }
  }
  if (static_cast<int>(tr.leaf_node.size()) != n) throw Error("tree construction ran out of leaf ports");
  return tr;
}

// ---------------------------------------------------------------------------
// Switching networks
// ---------------------------------------------------------------------------

enum class SwitchKind { Single, Bipartite, Clos, Trees };

inline const char* to_string(SwitchKind k) {
  switch (k) {
    case SwitchKind::Single: return "single";
    case SwitchKind::Bipartite: return "bipartite";
    case SwitchKind::Clos: return "clos";
    case SwitchKind::Trees: return "trees";
  }
  return "?";
}

/// Readiness clock of every channel in a graph.
struct EdgeClock {
  std::vector<Time> ready_at;
  std::vector<Time> last_used;
  std::vector<std::int64_t> uses;

  EdgeClock() = default;
  EdgeClock(std::size_t n, Time initial)
      : ready_at(n, initial), last_used(n, std::numeric_limits<Time>::min()), uses(n, 0) {}

  [[nodiscard]] bool ready(int e, Time now) const { return ready_at[static_cast<std::size_t>(e)] <= now; }
  void consume(int e, Time now, Time t_bell) {
    ready_at[static_cast<std::size_t>(e)] = now + t_bell;
    last_used[static_cast<std::size_t>(e)] = now;
    ++uses[static_cast<std::size_t>(e)];
  }
};

struct SwitchNet {
  SwitchKind kind = SwitchKind::Single;
  int n_in = 0;
  int n_out = 0;
  int nodes = 0;

  // Single
  int node = -1;
  // Bipartite
  std::vector<TreeFragment> in_trees;
  std::vector<TreeFragment> out_trees;
  std::vector<std::vector<int>> cross;  // [p][q]
  // Clos
  int s = 0;
  int t = 0;
  std::vector<SwitchNet> left;
  std::vector<SwitchNet> middle;
  std::vector<SwitchNet> right;
  std::vector<std::vector<int>> lm;  // [a][b]
  std::vector<std::vector<int>> mr;  // [b][c]
  // Trees (circuit-agnostic): one tree per internal port, fan = n_out / n_in
  int fan = 0;

  [[nodiscard]] int entry_node(int p) const {
    switch (kind) {
      case SwitchKind::Single: return node;
      case SwitchKind::Bipartite: return in_trees[static_cast<std::size_t>(p)].root;
      case SwitchKind::Trees: return in_trees[static_cast<std::size_t>(p)].root;
      case SwitchKind::Clos: {
        const int L = static_cast<int>(left.size());
        return left[static_cast<std::size_t>(p % L)].entry_node(p / L);
      }
    }
    return -1;
  }

  [[nodiscard]] int exit_node(int q) const {
    switch (kind) {
      case SwitchKind::Single: return node;
      case SwitchKind::Bipartite: return out_trees[static_cast<std::size_t>(q)].root;
      case SwitchKind::Trees: {
        const auto& tr = in_trees[static_cast<std::size_t>(q / fan)];
        return tr.leaf_node[static_cast<std::size_t>(q % fan)];
      }
      case SwitchKind::Clos: {
        const int R = static_cast<int>(right.size());
        return right[static_cast<std::size_t>(q % R)].exit_node(q / R);
      }
    }
    return -1;
  }

  [[nodiscard]] int left_switch_of(int p) const { return p % static_cast<int>(left.size()); }
  [[nodiscard]] int right_switch_of(int q) const { return q % static_cast<int>(right.size()); }
  [[nodiscard]] int clos_depth() const {
    if (kind != SwitchKind::Clos) return 0;
    int m = 0;
    for (const auto& sw : middle) m = std::max(m, sw.clos_depth());
    return 1 + m;
  }
};

inline SwitchNet build_bipartite(NodeGraph& g, int n_int, int n_ext, int d, int cluster) {
  if (d < 3) throw InvalidDegree(d);
  if (n_int < 1 || n_ext < 1) throw InputError("bipartite network needs ports on both sides");
  SwitchNet sw;
  sw.n_in = n_int;
  sw.n_out = n_ext;
  if (n_int + n_ext <= d) {
    sw.kind = SwitchKind::Single;
    sw.node = g.add_node(NodeRole::Switch, cluster, d);
    sw.nodes = 1;
    return sw;
  }
  sw.kind = SwitchKind::Bipartite;
  for (int p = 0; p < n_int; ++p) sw.in_trees.push_back(build_tree(g, n_ext, d, NodeRole::Switch, cluster));
  for (int q = 0; q < n_ext; ++q) sw.out_trees.push_back(build_tree(g, n_int, d, NodeRole::Switch, cluster));
  sw.cross.assign(static_cast<std::size_t>(n_int), std::vector<int>(static_cast<std::size_t>(n_ext), -1));
  for (int p = 0; p < n_int; ++p) {
    for (int q = 0; q < n_ext; ++q) {
      sw.cross[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)] =
          g.add_edge(sw.in_trees[static_cast<std::size_t>(p)].leaf_node[static_cast<std::size_t>(q)],
                     sw.out_trees[static_cast<std::size_t>(q)].leaf_node[static_cast<std::size_t>(p)]);
    }
  }
  for (const auto& tr : sw.in_trees) sw.nodes += tr.nodes;
  for (const auto& tr : sw.out_trees) sw.nodes += tr.nodes;
  return sw;
}

namespace detail {

inline SwitchNet build_switch(NodeGraph& g, int n_in, int n_out, int d, int s, int t, int cluster,
                              const ClosTrim* trim) {
  if (std::max(n_in, n_out) <= s) return build_bipartite(g, n_in, n_out, d, cluster);
  SwitchNet sw;
  sw.kind = SwitchKind::Clos;
  sw.n_in = n_in;
  sw.n_out = n_out;
  sw.s = s;
  sw.t = t;
  const int L = static_cast<int>(ceil_div(n_in, s));
  const int R = static_cast<int>(ceil_div(n_out, s));
  const int mids = (trim != nullptr && trim->keep >= 0) ? trim->keep : t;
  for (int a = 0; a < L; ++a) sw.left.push_back(build_bipartite(g, s, mids, d, cluster));
  for (int b = 0; b < mids; ++b) {
    sw.middle.push_back(build_switch(g, L, R, d, s, t, cluster, inner_trim(trim, b)));
  }
  for (int c = 0; c < R; ++c) sw.right.push_back(build_bipartite(g, mids, s, d, cluster));
  sw.lm.assign(static_cast<std::size_t>(L), std::vector<int>(static_cast<std::size_t>(mids), -1));
  sw.mr.assign(static_cast<std::size_t>(mids), std::vector<int>(static_cast<std::size_t>(R), -1));
  for (int a = 0; a < L; ++a) {
    for (int b = 0; b < mids; ++b) {
      sw.lm[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)] =
          g.add_edge(sw.left[static_cast<std::size_t>(a)].exit_node(b), sw.middle[static_cast<std::size_t>(b)].entry_node(a));
    }
  }
  for (int b = 0; b < mids; ++b) {
    for (int c = 0; c < R; ++c) {
      sw.mr[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)] =
          g.add_edge(sw.middle[static_cast<std::size_t>(b)].exit_node(c), sw.right[static_cast<std::size_t>(c)].entry_node(b));
    }
  }
  for (const auto& x : sw.left) sw.nodes += x.nodes;
  for (const auto& x : sw.middle) sw.nodes += x.nodes;
  for (const auto& x : sw.right) sw.nodes += x.nodes;
  return sw;
}

}  // namespace detail

/// Three-stage Clos network with cyclic port-to-switch wiring. Port counts
/// that are not multiples of s are padded up to whole outer switches.
/// `allow_blocking` admits t < 2s-1 (used only for negative controls).
inline SwitchNet build_clos(NodeGraph& g, int n_int, int n_ext, int d, int s, int t, int cluster,
                            const ClosTrim* trim = nullptr, bool allow_blocking = false) {
  if (d < 3) throw InvalidDegree(d);
  if (s < 2) throw InputError("Clos parameter s must be >= 2");
  if (t < 2 * s - 1 && !allow_blocking) throw NonBlockingViolation(s, t);
  if (n_int < 1 || n_ext < 1) throw InputError("Clos network needs ports on both sides");
  return detail::build_switch(g, n_int, n_ext, d, s, t, cluster, trim);
}

/// Per-internal-port fan-out trees: internal port k reaches external ports
/// k*fan .. k*fan+fan-1 only.
inline SwitchNet build_port_trees(NodeGraph& g, int n_int, int fan, int d, int cluster) {
  SwitchNet sw;
  sw.kind = SwitchKind::Trees;
  sw.n_in = n_int;
  sw.n_out = n_int * fan;
  sw.fan = fan;
  for (int k = 0; k < n_int; ++k) {
    sw.in_trees.push_back(build_tree(g, fan, d, NodeRole::Switch, cluster));
    sw.nodes += sw.in_trees.back().nodes;
  }
  return sw;
}

// ---------------------------------------------------------------------------
// Routing
// ---------------------------------------------------------------------------

struct RouteResult {
  bool found = false;
  std::vector<int> edges;    // channels inside the switching network
  std::vector<int> choices;  // middle switch picked at each Clos level
  Time earliest = std::numeric_limits<Time>::max();  // lower bound on next readiness
};

namespace detail {

inline bool all_ready(std::span<const int> edges, const EdgeClock& clk, Time now, Time& worst) {
  bool ok = true;
  for (int e : edges) {
    const Time r = clk.ready_at[static_cast<std::size_t>(e)];
    if (r > now) {
      ok = false;
      worst = std::max(worst, r);
    }
  }
  return ok;
}

inline void append(std::vector<int>& dst, std::span<const int> src) { dst.insert(dst.end(), src.begin(), src.end()); }

inline bool route(const SwitchNet& sw, int in, int out, const EdgeClock& clk, Time now,
                  std::span<const int> forced, std::vector<int>& edges, std::vector<int>& choices,
                  Time& earliest) {
  switch (sw.kind) {
    case SwitchKind::Single: return true;
    case SwitchKind::Trees: {
      if (out / sw.fan != in) return false;
      const auto& path = sw.in_trees[static_cast<std::size_t>(in)].leaf_path[static_cast<std::size_t>(out % sw.fan)];
      Time worst = now;
      if (!all_ready(path, clk, now, worst)) {
        earliest = std::min(earliest, worst);
        return false;
      }
      append(edges, path);
      return true;
    }
    case SwitchKind::Bipartite: {
      std::vector<int> path = sw.in_trees[static_cast<std::size_t>(in)].leaf_path[static_cast<std::size_t>(out)];
      path.push_back(sw.cross[static_cast<std::size_t>(in)][static_cast<std::size_t>(out)]);
      append(path, sw.out_trees[static_cast<std::size_t>(out)].leaf_path[static_cast<std::size_t>(in)]);
      Time worst = now;
      if (!all_ready(path, clk, now, worst)) {
        earliest = std::min(earliest, worst);
        return false;
      }
      append(edges, path);
      return true;
    }
    case SwitchKind::Clos: {
      const int L = static_cast<int>(sw.left.size());
      const int R = static_cast<int>(sw.right.size());
      const int a = in % L;
      const int c = out % R;
      const int li = in / L;
      const int ro = out / R;
      std::vector<int> order;
      if (!forced.empty()) {
        if (forced.front() >= static_cast<int>(sw.middle.size())) return false;
        order.push_back(forced.front());
      } else {
        order.resize(sw.middle.size());
        std::iota(order.begin(), order.end(), 0);
        // least recently consumed first
        auto key = [&](int b) {
          return std::max(clk.last_used[static_cast<std::size_t>(sw.lm[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)])],
                          clk.last_used[static_cast<std::size_t>(sw.mr[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)])]);
        };
        std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return key(x) < key(y); });
      }
      const auto rest = forced.empty() ? forced : forced.subspan(1);
      for (int b : order) {
        const std::size_t mark_e = edges.size();
        const std::size_t mark_c = choices.size();
        Time worst = now;
        const int links[2] = {sw.lm[static_cast<std::size_t>(a)][static_cast<std::size_t>(b)],
                              sw.mr[static_cast<std::size_t>(b)][static_cast<std::size_t>(c)]};
        bool ok = all_ready(links, clk, now, worst);
        Time sub = std::numeric_limits<Time>::max();
        if (ok) ok = route(sw.left[static_cast<std::size_t>(a)], li, b, clk, now, {}, edges, choices, sub);
        if (ok) ok = route(sw.right[static_cast<std::size_t>(c)], b, ro, clk, now, {}, edges, choices, sub);
        if (ok) {
          choices.push_back(b);
          ok = route(sw.middle[static_cast<std::size_t>(b)], a, c, clk, now, rest, edges, choices, sub);
        }
        if (ok) {
          append(edges, links);
          return true;
        }
        edges.resize(mark_e);
        choices.resize(mark_c);
        const Time bound = sub == std::numeric_limits<Time>::max() ? worst : std::max(worst, sub);
        earliest = std::min(earliest, std::max(bound, now + 1));
      }
      return false;
    }
  }
  return false;
}

}  // namespace detail

/// Finds a path of ready channels from internal port `in` to external port
/// `out`. `forced` pins the middle switch at each Clos level (preorder).
inline RouteResult route_switch(const SwitchNet& sw, int in, int out, const EdgeClock& clk, Time now,
                                std::span<const int> forced = {}) {
  RouteResult r;
  r.found = detail::route(sw, in, out, clk, now, forced, r.edges, r.choices, r.earliest);
  if (r.found) r.earliest = now;
  return r;
}

}  // namespace nbqc
