#pragma once

#include "nbqc/types.hpp"

#include <cstddef>
#include <ostream>
#include <string>
#include <vector>

namespace nbqc {

enum class NodeRole { Ring, Switch, Tree, Generator, Buffer };

inline const char* to_string(NodeRole r) {
  switch (r) {
    case NodeRole::Ring: return "ring";
    case NodeRole::Switch: return "switch";
    case NodeRole::Tree: return "tree";
    case NodeRole::Generator: return "generator";
    case NodeRole::Buffer: return "buffer";
  }
  return "?";
}

struct GraphNode {
  NodeRole role = NodeRole::Switch;
  int cluster = -1;
  int cap = 3;
  std::vector<int> ports;  // edge id per used port slot
};

struct Channel {
  int u = -1;
  int v = -1;
};

/// Degree-bounded multigraph of fault-tolerant nodes. Each channel occupies
/// one port slot on both endpoints.
class NodeGraph {
public:
  int add_node(NodeRole role, int cluster, int cap) {
    nodes_.push_back({role, cluster, cap, {}});
    return static_cast<int>(nodes_.size()) - 1;
  }

  int add_edge(int u, int v) {
    if (u == v) throw Error("self-loop on node " + std::to_string(u));
    check_node(u);
    check_node(v);
    auto& a = nodes_[static_cast<std::size_t>(u)];
    auto& b = nodes_[static_cast<std::size_t>(v)];
    if (static_cast<int>(a.ports.size()) >= a.cap || static_cast<int>(b.ports.size()) >= b.cap) {
      throw Error("port capacity exceeded on edge " + std::to_string(u) + "-" + std::to_string(v));
    }
    const int id = static_cast<int>(edges_.size());
    edges_.push_back({u, v});
    a.ports.push_back(id);
    b.ports.push_back(id);
    return id;
  }

  [[nodiscard]] int node_count() const { return static_cast<int>(nodes_.size()); }
  [[nodiscard]] int edge_count() const { return static_cast<int>(edges_.size()); }
  [[nodiscard]] const GraphNode& node(int i) const { return nodes_.at(static_cast<std::size_t>(i)); }
  [[nodiscard]] const Channel& edge(int e) const { return edges_.at(static_cast<std::size_t>(e)); }
  [[nodiscard]] const std::vector<GraphNode>& nodes() const { return nodes_; }
  [[nodiscard]] const std::vector<Channel>& edges() const { return edges_; }
  [[nodiscard]] int degree(int i) const { return static_cast<int>(node(i).ports.size()); }
  [[nodiscard]] int free_ports(int i) const { return node(i).cap - degree(i); }

  int add_cluster(std::string name) {
    clusters_.push_back(std::move(name));
    return static_cast<int>(clusters_.size()) - 1;
  }
  [[nodiscard]] const std::vector<std::string>& clusters() const { return clusters_; }

  [[nodiscard]] bool degree_sound() const {
    for (const auto& n : nodes_) {
      if (static_cast<int>(n.ports.size()) > n.cap) return false;
    }
    for (const auto& e : edges_) {
      if (e.u == e.v) return false;
    }
    return true;
  }

  /// Connected components restricted to nodes of one cluster.
  [[nodiscard]] bool cluster_connected(int cluster) const {
    std::vector<int> members;
    for (int i = 0; i < node_count(); ++i) {
      if (nodes_[static_cast<std::size_t>(i)].cluster == cluster) members.push_back(i);
    }
    if (members.empty()) return true;
    std::vector<char> seen(nodes_.size(), 0);
    std::vector<int> stack{members.front()};
    seen[static_cast<std::size_t>(members.front())] = 1;
    std::size_t reached = 0;
    while (!stack.empty()) {
      const int x = stack.back();
      stack.pop_back();
      ++reached;
      for (int e : nodes_[static_cast<std::size_t>(x)].ports) {
        const auto& ch = edges_[static_cast<std::size_t>(e)];
        const int y = ch.u == x ? ch.v : ch.u;
        if (nodes_[static_cast<std::size_t>(y)].cluster == cluster && !seen[static_cast<std::size_t>(y)]) {
          seen[static_cast<std::size_t>(y)] = 1;
          stack.push_back(y);
        }
      }
    }
    return reached == members.size();
  }

  void write_dot(std::ostream& os, const std::string& name = "nbqc") const {
    os << "graph " << name << " {\n  node [fontsize=8];\n";
    for (std::size_t c = 0; c < clusters_.size(); ++c) {
      os << "  subgraph cluster_" << c << " {\n    label=\"" << clusters_[c] << "\";\n";
      for (std::size_t i = 0; i < nodes_.size(); ++i) {
        if (nodes_[i].cluster == static_cast<int>(c)) {
          os << "    n" << i << " [shape=" << shape(nodes_[i].role) << ",label=\"" << i << "\"];\n";
        }
      }
      os << "  }\n";
    }
    for (std::size_t i = 0; i < nodes_.size(); ++i) {
      if (nodes_[i].cluster < 0 || nodes_[i].cluster >= static_cast<int>(clusters_.size())) {
        os << "  n" << i << " [shape=" << shape(nodes_[i].role) << "];\n";
      }
    }
    for (const auto& e : edges_) os << "  n" << e.u << " -- n" << e.v << ";\n";
    os << "}\n";
  }

private:
  static const char* shape(NodeRole r) {
    switch (r) {
      case NodeRole::Ring: return "doublecircle";
      case NodeRole::Switch: return "box";
      case NodeRole::Tree: return "triangle";
      case NodeRole::Generator: return "diamond";
      case NodeRole::Buffer: return "ellipse";
    }
    return "point";
  }

  void check_node(int i) const {
    if (i < 0 || i >= node_count()) throw Error("node index out of range");
  }

  std::vector<GraphNode> nodes_;
  std::vector<Channel> edges_;
  std::vector<std::string> clusters_;
};

}  // namespace nbqc
