#pragma once

#include "nbqc/types.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstddef>
#include <map>
#include <nlohmann/json.hpp>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nbqc {

enum class GateKind {
  InitX,
  InitZ,
  MeasX,
  MeasZ,
  H,
  S,
  Sdg,
  CNOT,
  LatticeSurgeryZZ,
  LatticeSurgeryXX,
  TviaMagic,
  Teleport,
  PauliX,  // Pauli-frame update, zero cost
  PauliZ,
};

inline const char* to_string(GateKind k) {
  switch (k) {
    case GateKind::InitX: return "init_x";
    case GateKind::InitZ: return "init_z";
    case GateKind::MeasX: return "meas_x";
    case GateKind::MeasZ: return "meas_z";
    case GateKind::H: return "h";
    case GateKind::S: return "s";
    case GateKind::Sdg: return "sdg";
    case GateKind::CNOT: return "cnot";
    case GateKind::LatticeSurgeryZZ: return "ls_zz";
    case GateKind::LatticeSurgeryXX: return "ls_xx";
    case GateKind::TviaMagic: return "t_magic";
    case GateKind::Teleport: return "teleport";
    case GateKind::PauliX: return "x";
    case GateKind::PauliZ: return "z";
  }
  return "?";
}

inline bool is_two_qubit(GateKind k) {
  return k == GateKind::CNOT || k == GateKind::LatticeSurgeryZZ ||
         k == GateKind::LatticeSurgeryXX;
}

inline Time latency(GateKind k, const LatencyTable& lat) {
  switch (k) {
    case GateKind::InitX:
    case GateKind::InitZ: return lat.init;
    case GateKind::MeasX:
    case GateKind::MeasZ: return lat.measure;
    case GateKind::H: return lat.h;
    case GateKind::S:
    case GateKind::Sdg: return lat.s;
    case GateKind::CNOT: return lat.cnot;
    case GateKind::LatticeSurgeryZZ:
    case GateKind::LatticeSurgeryXX:
    case GateKind::TviaMagic: return lat.lattice_surgery;
    case GateKind::Teleport: return lat.t_local;
    case GateKind::PauliX:
    case GateKind::PauliZ: return 0;
  }
  return 0;
}

struct Gate {
  GateKind kind = GateKind::H;
  std::array<int, 2> q{0, -1};
  /// Magic states consumed; set by lower() on TviaMagic.
  int magic = 0;

  [[nodiscard]] int arity() const { return q[1] < 0 ? 1 : 2; }
  friend bool operator==(const Gate&, const Gate&) = default;
};

struct LogicalCircuit {
  int n_alg = 0;
  std::vector<Gate> gates;
  bool lowered = false;

  void validate() const {
    for (const Gate& g : gates) {
      for (int i = 0; i < g.arity(); ++i) {
        if (g.q[static_cast<std::size_t>(i)] < 0 || g.q[static_cast<std::size_t>(i)] >= n_alg) {
          throw InputError("operand index out of range");
        }
      }
      if (is_two_qubit(g.kind) && g.q[0] == g.q[1]) {
        throw InputError("two-qubit gate with identical operands");
      }
    }
  }
  friend bool operator==(const LogicalCircuit&, const LogicalCircuit&) = default;
};

// ---------------------------------------------------------------------------
// QASM subset parser
// ---------------------------------------------------------------------------

namespace detail {

inline std::string trim(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

struct Register {
  int offset = 0;
  int size = 0;
};

}  // namespace detail

/// Parses an OpenQASM 2.0 program restricted to {h, s, sdg, t, tdg, cx, x, z,
/// measure, reset}. Registers are flattened in declaration order.
inline LogicalCircuit parse_qasm(std::string_view text) {
  LogicalCircuit circ;
  std::map<std::string, detail::Register> qregs;
  std::map<std::string, int> cregs;

  // Strip comments, remembering the line of each statement start.
  std::string buf;
  std::vector<int> line_of;
  {
    int line = 1;
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (text[i] == '/' && i + 1 < text.size() && text[i + 1] == '/') {
        while (i < text.size() && text[i] != '\n') ++i;
        if (i == text.size()) break;
      }
      buf.push_back(text[i]);
      line_of.push_back(line);
      if (text[i] == '\n') ++line;
    }
  }

  auto parse_operand = [&](const std::string& tok, int line) -> std::vector<int> {
    const std::string s = detail::trim(tok);
    const auto lb = s.find('[');
    const std::string name = detail::trim(s.substr(0, lb));
    auto it = qregs.find(name);
    if (it == qregs.end()) throw ParseError(line, "unknown quantum register '" + name + "'");
    if (lb == std::string::npos) {
      std::vector<int> all(static_cast<std::size_t>(it->second.size));
      for (int k = 0; k < it->second.size; ++k) all[static_cast<std::size_t>(k)] = it->second.offset + k;
      return all;
    }
    const auto rb = s.find(']', lb);
    if (rb == std::string::npos || rb != s.size() - 1) throw ParseError(line, "malformed operand '" + s + "'");
    int idx = 0;
    try {
      std::size_t used = 0;
      idx = std::stoi(s.substr(lb + 1, rb - lb - 1), &used);
      if (used != rb - lb - 1) throw std::invalid_argument("junk");
    } catch (const std::exception&) {
      throw ParseError(line, "bad index in '" + s + "'");
    }
    if (idx < 0 || idx >= it->second.size) throw ParseError(line, "index out of range in '" + s + "'");
    return {it->second.offset + idx};
  };

  auto split_args = [](const std::string& s) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
      if (c == ',') {
        out.push_back(detail::trim(cur));
        cur.clear();
      } else {
        cur.push_back(c);
      }
    }
    if (!detail::trim(cur).empty() || !out.empty()) out.push_back(detail::trim(cur));
    return out;
  };

  std::size_t pos = 0;
  while (pos < buf.size()) {
    const std::size_t semi = buf.find(';', pos);
    const std::size_t end = semi == std::string::npos ? buf.size() : semi;
    std::size_t first = pos;
    while (first < end && std::isspace(static_cast<unsigned char>(buf[first]))) ++first;
    const int line = first < line_of.size() ? line_of[first] : (line_of.empty() ? 1 : line_of.back());
    std::string stmt = detail::trim(std::string_view(buf).substr(pos, end - pos));
    pos = end + 1;
    if (stmt.empty()) continue;
    if (semi == std::string::npos) throw ParseError(line, "missing ';'");

    // keyword / gate name
    std::size_t k = 0;
    while (k < stmt.size() && (std::isalnum(static_cast<unsigned char>(stmt[k])) || stmt[k] == '_')) ++k;
    const std::string head = stmt.substr(0, k);
    std::string rest = detail::trim(std::string_view(stmt).substr(k));
    if (head.empty()) throw ParseError(line, "expected statement, got '" + stmt + "'");

    if (head == "OPENQASM" || head == "include" || head == "barrier") continue;
    if (head == "qreg" || head == "creg") {
      const auto lb = rest.find('[');
      const auto rb = rest.find(']');
      if (lb == std::string::npos || rb == std::string::npos || rb < lb) {
        throw ParseError(line, "malformed register declaration");
      }
      const std::string name = detail::trim(rest.substr(0, lb));
      int size = 0;
      try {
        size = std::stoi(rest.substr(lb + 1, rb - lb - 1));
      } catch (const std::exception&) {
        throw ParseError(line, "bad register size");
      }
      if (size <= 0 || name.empty()) throw ParseError(line, "bad register declaration");
      if (head == "qreg") {
        if (qregs.count(name) != 0U) throw ParseError(line, "duplicate register '" + name + "'");
        qregs[name] = {circ.n_alg, size};
        circ.n_alg += size;
      } else {
        cregs[name] = size;
      }
      continue;
    }
    if (head == "if" || head == "gate" || head == "opaque") throw UnsupportedGate(head, line);
    if (!rest.empty() && rest.front() == '(') throw UnsupportedGate(head, line);

    if (head == "measure") {
      const auto arrow = rest.find("->");
      const std::string lhs = arrow == std::string::npos ? rest : rest.substr(0, arrow);
      for (int q : parse_operand(lhs, line)) circ.gates.push_back({GateKind::MeasZ, {q, -1}, 0});
      continue;
    }

    static const std::map<std::string, GateKind> one_qubit = {
        {"h", GateKind::H},          {"s", GateKind::S},          {"sdg", GateKind::Sdg},
        {"t", GateKind::TviaMagic},  {"tdg", GateKind::TviaMagic}, {"x", GateKind::PauliX},
        {"z", GateKind::PauliZ},     {"reset", GateKind::InitZ},
    };
    if (auto it = one_qubit.find(head); it != one_qubit.end()) {
      const auto args = split_args(rest);
      if (args.size() != 1) throw ParseError(line, head + " expects one operand");
      for (int q : parse_operand(args[0], line)) circ.gates.push_back({it->second, {q, -1}, 0});
      continue;
    }
    if (head == "cx" || head == "CX") {
      const auto args = split_args(rest);
      if (args.size() != 2) throw ParseError(line, "cx expects two operands");
      const auto a = parse_operand(args[0], line);
      const auto b = parse_operand(args[1], line);
      if (a.size() != b.size() && a.size() != 1 && b.size() != 1) {
        throw ParseError(line, "register size mismatch");
      }
      const std::size_t n = std::max(a.size(), b.size());
      for (std::size_t i = 0; i < n; ++i) {
        const int qa = a.size() == 1 ? a[0] : a[i];
        const int qb = b.size() == 1 ? b[0] : b[i];
        if (qa == qb) throw ParseError(line, "cx with identical operands");
        circ.gates.push_back({GateKind::CNOT, {qa, qb}, 0});
      }
      continue;
    }
    throw UnsupportedGate(head, line);
  }
  return circ;
}

/// Writes the circuit back in the accepted QASM subset (single register q).
inline std::string to_qasm(const LogicalCircuit& c) {
  std::ostringstream os;
  os << "OPENQASM 2.0;\ninclude \"qelib1.inc\";\n";
  if (c.n_alg > 0) os << "qreg q[" << c.n_alg << "];\n";
  for (const Gate& g : c.gates) {
    const int a = g.q[0];
    switch (g.kind) {
      case GateKind::InitX:
      case GateKind::InitZ: os << "reset q[" << a << "];\n"; break;
      case GateKind::MeasX:
      case GateKind::MeasZ: os << "measure q[" << a << "];\n"; break;
      case GateKind::H: os << "h q[" << a << "];\n"; break;
      case GateKind::S: os << "s q[" << a << "];\n"; break;
      case GateKind::Sdg: os << "sdg q[" << a << "];\n"; break;
      case GateKind::TviaMagic: os << "t q[" << a << "];\n"; break;
      case GateKind::PauliX: os << "x q[" << a << "];\n"; break;
      case GateKind::PauliZ: os << "z q[" << a << "];\n"; break;
      case GateKind::CNOT: os << "cx q[" << a << "],q[" << g.q[1] << "];\n"; break;
      default: throw InputError(std::string("gate kind ") + to_string(g.kind) + " has no QASM form");
    }
  }
  return os.str();
}

/// Marks every T-type gate as a lattice-surgery consumption of one magic
/// state. The feedforward Clifford is always skipped.
inline LogicalCircuit lower(LogicalCircuit c, const LatencyTable& /*lat*/) {
  for (Gate& g : c.gates) {
    if (g.kind == GateKind::TviaMagic) g.magic = 1;
  }
  c.lowered = true;
  return c;
}

// ---------------------------------------------------------------------------
// Bottleneck-free (ASAP) timeline
// ---------------------------------------------------------------------------

enum class EventClass { Local, QQ, QF };

inline const char* to_string(EventClass e) {
  switch (e) {
    case EventClass::Local: return "local";
    case EventClass::QQ: return "qq";
    case EventClass::QF: return "qf";
  }
  return "?";
}

inline EventClass classify(const Gate& g) {
  if (g.kind == GateKind::TviaMagic) return EventClass::QF;
  if (is_two_qubit(g.kind) && g.q[0] != g.q[1]) return EventClass::QQ;
  return EventClass::Local;
}

using QubitPair = std::pair<int, int>;  // always first < second

inline QubitPair make_pair_key(int a, int b) { return a < b ? QubitPair{a, b} : QubitPair{b, a}; }

struct TimedInstr {
  std::size_t index = 0;
  Gate gate;
  Time start = 0;
  Time finish = 0;
  EventClass cls = EventClass::Local;
};

struct IdealTimeline {
  int n_alg = 0;
  std::vector<TimedInstr> instrs;
  std::map<QubitPair, std::vector<Time>> qq_events;
  std::vector<std::vector<Time>> qf_events;
  Time depth = 0;

  [[nodiscard]] std::size_t remote_count() const {
    std::size_t n = 0;
    for (const auto& [k, v] : qq_events) n += v.size();
    for (const auto& v : qf_events) n += v.size();
    return n;
  }
};

inline IdealTimeline asap_schedule(const LogicalCircuit& c, const LatencyTable& lat) {
  IdealTimeline tl;
  tl.n_alg = c.n_alg;
  tl.qf_events.resize(static_cast<std::size_t>(c.n_alg));
  std::vector<Time> ready(static_cast<std::size_t>(c.n_alg), 0);
  tl.instrs.reserve(c.gates.size());
  for (std::size_t k = 0; k < c.gates.size(); ++k) {
    const Gate& g = c.gates[k];
    Time start = 0;
    for (int i = 0; i < g.arity(); ++i) start = std::max(start, ready[static_cast<std::size_t>(g.q[static_cast<std::size_t>(i)])]);
    const Time finish = start + latency(g.kind, lat);
    for (int i = 0; i < g.arity(); ++i) ready[static_cast<std::size_t>(g.q[static_cast<std::size_t>(i)])] = finish;
    const EventClass cls = classify(g);
    if (cls == EventClass::QQ) tl.qq_events[make_pair_key(g.q[0], g.q[1])].push_back(start);
    if (cls == EventClass::QF) tl.qf_events[static_cast<std::size_t>(g.q[0])].push_back(start);
    tl.instrs.push_back({k, g, start, finish, cls});
    tl.depth = std::max(tl.depth, finish);
  }
  for (auto& [k, v] : tl.qq_events) std::sort(v.begin(), v.end());
  for (auto& v : tl.qf_events) std::sort(v.begin(), v.end());
  return tl;
}

inline nlohmann::json to_json(const IdealTimeline& tl) {
  nlohmann::json j;
  j["n_alg"] = tl.n_alg;
  j["depth"] = tl.depth;
  auto& arr = j["instructions"] = nlohmann::json::array();
  for (const TimedInstr& in : tl.instrs) {
    nlohmann::json ops = nlohmann::json::array();
    for (int i = 0; i < in.gate.arity(); ++i) ops.push_back(in.gate.q[static_cast<std::size_t>(i)]);
    arr.push_back({{"index", in.index},
                   {"kind", to_string(in.gate.kind)},
                   {"operands", ops},
                   {"start", in.start},
                   {"finish", in.finish},
                   {"event_class", to_string(in.cls)}});
  }
  return j;
}

}  // namespace nbqc
