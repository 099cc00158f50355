#pragma once

#include "nbqc/circuit.hpp"

#include <algorithm>
#include <numeric>
#include <span>
#include <vector>

namespace nbqc {

/// Peak number of events inside any window shorter than `window`.
/// A lone event counts 1; an empty list counts 0.
inline int peak_window_count(std::span<const Time> events, Time window) {
  int best = 0;
  std::size_t lo = 0;
  for (std::size_t hi = 0; hi < events.size(); ++hi) {
    while (events[hi] - events[lo] >= window) ++lo;
    best = std::max(best, static_cast<int>(hi - lo + 1));
  }
  return best;
}

struct AccessProfile {
  int n_alg = 0;
  std::vector<std::vector<int>> bias_qq;  // symmetric, zero diagonal
  std::vector<int> bias_qf;
  Time window = 0;
};

inline AccessProfile compute_bias(const std::map<QubitPair, std::vector<Time>>& qq_events,
                                  const std::vector<std::vector<Time>>& qf_events, int n_alg,
                                  Time t_bell) {
  AccessProfile p;
  p.n_alg = n_alg;
  p.window = t_bell;
  p.bias_qq.assign(static_cast<std::size_t>(n_alg), std::vector<int>(static_cast<std::size_t>(n_alg), 0));
  p.bias_qf.assign(static_cast<std::size_t>(n_alg), 0);
  for (const auto& [pair, ev] : qq_events) {
    const int b = peak_window_count(ev, t_bell);
    p.bias_qq[static_cast<std::size_t>(pair.first)][static_cast<std::size_t>(pair.second)] = b;
    p.bias_qq[static_cast<std::size_t>(pair.second)][static_cast<std::size_t>(pair.first)] = b;
  }
  for (std::size_t i = 0; i < qf_events.size() && i < p.bias_qf.size(); ++i) {
    p.bias_qf[i] = peak_window_count(qf_events[i], t_bell);
  }
  return p;
}

inline AccessProfile compute_bias(const IdealTimeline& tl, Time t_bell) {
  return compute_bias(tl.qq_events, tl.qf_events, tl.n_alg, t_bell);
}

struct ProfileStats {
  std::vector<int> row_sums;  // sum_j bias_qq[i][j]
  int max_bias_qq = 0;
  int max_bias_qf = 0;
  int total_qq = 0;           // sum over unordered pairs
  double concentration = 0.0; // Gini coefficient of row_sums
};

inline ProfileStats bias_summary(const AccessProfile& p) {
  ProfileStats st;
  const std::size_t n = static_cast<std::size_t>(p.n_alg);
  st.row_sums.assign(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      st.row_sums[i] += p.bias_qq[i][j];
      st.max_bias_qq = std::max(st.max_bias_qq, p.bias_qq[i][j]);
      if (j > i) st.total_qq += p.bias_qq[i][j];
    }
    st.max_bias_qf = std::max(st.max_bias_qf, p.bias_qf[i]);
  }
  const double total = std::accumulate(st.row_sums.begin(), st.row_sums.end(), 0.0);
  if (n > 0 && total > 0.0) {
    double diff = 0.0;
    for (int a : st.row_sums) {
      for (int b : st.row_sums) diff += std::abs(a - b);
    }
    st.concentration = diff / (2.0 * static_cast<double>(n) * total);
  }
  return st;
}

inline nlohmann::json to_json(const AccessProfile& p) {
  nlohmann::json j;
  j["n_alg"] = p.n_alg;
  j["window"] = p.window;
  j["bias_qf"] = p.bias_qf;
  if (p.n_alg <= 64) {
    j["format"] = "dense";
    j["bias_qq"] = p.bias_qq;
  } else {
    j["format"] = "sparse";
    auto& trip = j["bias_qq"] = nlohmann::json::array();
    for (int i = 0; i < p.n_alg; ++i) {
      for (int k = i + 1; k < p.n_alg; ++k) {
        const int b = p.bias_qq[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)];
        if (b != 0) trip.push_back({i, k, b});
      }
    }
  }
  return j;
}

inline AccessProfile profile_from_json(const nlohmann::json& j) {
  AccessProfile p;
  try {
    p.n_alg = j.at("n_alg").get<int>();
    p.window = j.value("window", Time{0});
    p.bias_qf = j.at("bias_qf").get<std::vector<int>>();
    const std::size_t n = static_cast<std::size_t>(p.n_alg);
    p.bias_qq.assign(n, std::vector<int>(n, 0));
    if (j.value("format", std::string("dense")) == "dense") {
      p.bias_qq = j.at("bias_qq").get<std::vector<std::vector<int>>>();
    } else {
      for (const auto& t : j.at("bias_qq")) {
        const auto a = t.at(0).get<std::size_t>();
        const auto b = t.at(1).get<std::size_t>();
        p.bias_qq.at(a).at(b) = p.bias_qq.at(b).at(a) = t.at(2).get<int>();
      }
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed profile JSON: ") + e.what());
  }
  if (p.bias_qq.size() != static_cast<std::size_t>(p.n_alg) ||
      p.bias_qf.size() != static_cast<std::size_t>(p.n_alg)) {
    throw InputError("profile dimensions do not match n_alg");
  }
  return p;
}

}  // namespace nbqc
