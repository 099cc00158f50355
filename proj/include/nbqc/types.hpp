#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace nbqc {

/// Abstract time unit: one code-distance round of syndrome measurement.
using Time = std::int64_t;

inline constexpr const char* kVersion = "0.3.0";

// ---------------------------------------------------------------------------
// Errors
// ---------------------------------------------------------------------------

/// Base of every domain error raised by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Malformed input text (QASM, JSON manifests, configs).
class InputError : public Error {
public:
  using Error::Error;
};

class ParseError : public InputError {
public:
  ParseError(int line, const std::string& reason)
      : InputError("line " + std::to_string(line) + ": " + reason), line_(line) {}
  [[nodiscard]] int line() const noexcept { return line_; }

private:
  int line_;
};

class UnsupportedGate : public InputError {
public:
  UnsupportedGate(std::string name, int line)
      : InputError("unsupported gate '" + name + "' at line " + std::to_string(line)),
        name_(std::move(name)), line_(line) {}
  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  [[nodiscard]] int line() const noexcept { return line_; }

private:
  std::string name_;
  int line_;
};

class InvalidDegree : public Error {
public:
  explicit InvalidDegree(int d)
      : Error("channel cap d=" + std::to_string(d) + " is invalid (need d >= 3)") {}
};

class NonBlockingViolation : public Error {
public:
  NonBlockingViolation(int s, int t)
      : Error("Clos parameters (s=" + std::to_string(s) + ", t=" + std::to_string(t) +
              ") violate t >= 2s-1") {}
};

class Unroutable : public Error {
public:
  using Error::Error;
};

class BudgetTooSmall : public Error {
public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Latencies and build parameters
// ---------------------------------------------------------------------------

struct LatencyTable {
  Time init = 0;
  Time measure = 0;
  Time h = 3;
  Time s = 2;
  Time lattice_surgery = 1;
  Time cnot = 2;
  Time t_magic = 2;
  double p_magic = 0.01;
  Time t_bell = 1000;
  Time t_local = 1;  // teleport / swap latency

  void validate() const {
    if (init < 0 || measure < 0 || h < 0 || s < 0 || lattice_surgery < 0 || cnot < 0 ||
        t_magic < 0 || t_local < 0) {
      throw InputError("latencies must be non-negative");
    }
    if (t_local < 1) throw InputError("t_local must be >= 1");
    if (t_bell <= t_local) throw InputError("t_bell must exceed t_local");
    if (!(p_magic > 0.0 && p_magic <= 1.0)) throw InputError("p_magic must lie in (0, 1]");
  }

  /// T_Bell / T_local, the largest useful port count per component.
  [[nodiscard]] Time bell_ratio() const { return t_bell / t_local; }

  /// Period of one generator in deterministic-rate mode, T_magic / p_magic.
  [[nodiscard]] Time magic_period() const {
    return static_cast<Time>(std::ceil(static_cast<double>(t_magic) / p_magic - 1e-9));
  }

  /// Generators per factory port that saturate the Bell-limited supply.
  [[nodiscard]] int n_leaf() const {
    const double x = static_cast<double>(t_magic) / (static_cast<double>(t_bell) * p_magic);
    const int n = static_cast<int>(std::ceil(x - 1e-9));
    return n < 1 ? 1 : n;
  }
};

struct NetworkParams {
  LatencyTable lat;
  int d = 3;
  int s = 2;  // 0 = sweep s with t = 2s-1
  int t = 3;
  bool n_int_eq_n_ext = true;

  void validate() const {
    lat.validate();
    if (d < 3) throw InvalidDegree(d);
    if (s != 0) {
      if (s < 2) throw InputError("Clos parameter s must be >= 2");
      if (t < 2 * s - 1) throw NonBlockingViolation(s, t);
    }
  }
};

inline Time ceil_div(Time a, Time b) { return (a + b - 1) / b; }

}  // namespace nbqc
