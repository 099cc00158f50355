#pragma once

#include "nbqc/circuit.hpp"

#include <cstdint>
#include <random>
#include <string>

namespace nbqc::bench {

inline void add(LogicalCircuit& c, GateKind k, int a, int b = -1) { c.gates.push_back({k, {a, b}, 0}); }

/// Seven-T Toffoli in Clifford+T.
inline void toffoli(LogicalCircuit& c, int a, int b, int t) {
  add(c, GateKind::H, t);
  add(c, GateKind::CNOT, b, t);
  add(c, GateKind::TviaMagic, t);
  add(c, GateKind::CNOT, a, t);
  add(c, GateKind::TviaMagic, t);
  add(c, GateKind::CNOT, b, t);
  add(c, GateKind::TviaMagic, t);
  add(c, GateKind::CNOT, a, t);
  add(c, GateKind::TviaMagic, b);
  add(c, GateKind::TviaMagic, t);
  add(c, GateKind::H, t);
  add(c, GateKind::CNOT, a, b);
  add(c, GateKind::TviaMagic, a);
  add(c, GateKind::TviaMagic, b);
  add(c, GateKind::CNOT, a, b);
}

/// Ripple-carry adder of two n-bit registers (2n+2 qubits: carry-in,
/// interleaved a/b bits, carry-out). n = 13 gives a 28-qubit adder.
inline LogicalCircuit ripple_adder(int n) {
  LogicalCircuit c;
  c.n_alg = 2 * n + 2;
  auto A = [](int i) { return 1 + 2 * i; };
  auto B = [](int i) { return 2 + 2 * i; };
  const int cin = 0;
  const int cout = 2 * n + 1;
  for (int i = 0; i < n; ++i) {
    add(c, GateKind::H, A(i));  // prepare a superposed input
    add(c, GateKind::H, B(i));
  }
  auto maj = [&](int x, int y, int z) {
    add(c, GateKind::CNOT, z, y);
    add(c, GateKind::CNOT, z, x);
    toffoli(c, x, y, z);
  };
  auto uma = [&](int x, int y, int z) {
    toffoli(c, x, y, z);
    add(c, GateKind::CNOT, z, x);
    add(c, GateKind::CNOT, x, y);
  };
  maj(cin, B(0), A(0));
  for (int i = 1; i < n; ++i) maj(A(i - 1), B(i), A(i));
  add(c, GateKind::CNOT, A(n - 1), cout);
  for (int i = n - 1; i >= 1; --i) uma(A(i - 1), B(i), A(i));
  uma(cin, B(0), A(0));
  for (int q = 0; q < c.n_alg; ++q) add(c, GateKind::MeasZ, q);
  return c;
}

/// Random Clifford+T circuit with the given gate mix.
inline LogicalCircuit random_circuit(int n_alg, int n_gates, std::uint64_t seed, double p_two = 0.4,
                                     double p_t = 0.3) {
  LogicalCircuit c;
  c.n_alg = n_alg;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::uniform_int_distribution<int> q(0, n_alg - 1);
  for (int k = 0; k < n_gates; ++k) {
    const double x = u(rng);
    const int a = q(rng);
    if (x < p_two && n_alg >= 2) {
      int b = q(rng);
      while (b == a) b = q(rng);
      add(c, GateKind::CNOT, a, b);
    } else if (x < p_two + p_t) {
      add(c, GateKind::TviaMagic, a);
    } else {
      const double y = u(rng);
      add(c, y < 0.5 ? GateKind::H : (y < 0.8 ? GateKind::S : GateKind::Sdg), a);
    }
  }
  return c;
}

/// Every two-qubit gate touches qubit 0.
inline LogicalCircuit biased_pattern(int n_alg, int rounds, bool with_t = false) {
  LogicalCircuit c;
  c.n_alg = n_alg;
  for (int r = 0; r < rounds; ++r) {
    for (int i = 1; i < n_alg; ++i) {
      add(c, GateKind::CNOT, 0, i);
      if (with_t) add(c, GateKind::TviaMagic, i);
    }
  }
  return c;
}

/// Two-qubit gates spread over all pairs in round-robin layers.
inline LogicalCircuit uniform_pattern(int n_alg, int rounds) {
  LogicalCircuit c;
  c.n_alg = n_alg;
  for (int r = 0; r < rounds; ++r) {
    for (int s = 1; s < n_alg; ++s) {
      for (int i = 0; i < n_alg; ++i) {
        const int j = (i + s) % n_alg;
        if (i < j) add(c, GateKind::CNOT, i, j);
      }
    }
  }
  return c;
}

/// `times` back-to-back copies of `c`.
inline LogicalCircuit repeat(const LogicalCircuit& c, int times) {
  LogicalCircuit out;
  out.n_alg = c.n_alg;
  for (int r = 0; r < times; ++r) out.gates.insert(out.gates.end(), c.gates.begin(), c.gates.end());
  return out;
}

}  // namespace nbqc::bench
