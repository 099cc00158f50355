#pragma once

#include "nbqc/network.hpp"
#include "nbqc/simulator.hpp"

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

namespace nbqc {

// ---------------------------------------------------------------------------
// Run configuration
// ---------------------------------------------------------------------------

struct RunConfig {
  NetworkParams params;
  MagicMode magic = MagicMode::Deterministic;
  std::uint64_t seed = 1;

  [[nodiscard]] SimConfig sim() const {
    SimConfig c;
    c.seed = seed;
    c.magic = magic;
    return c;
  }
};

inline nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j = to_json(c.params);
  j["magic_mode"] = to_string(c.magic);
  j["seed"] = c.seed;
  return j;
}

/// Missing keys keep their defaults; unknown keys are rejected so typos
/// do not silently fall back.
inline RunConfig config_from_json(const nlohmann::json& j) {
  static const char* known[] = {"d",     "t_bell", "t_local",        "t_magic",    "p_magic",
                                "s",     "t",      "n_int_eq_n_ext", "magic_mode", "seed"};
  if (!j.is_object()) throw InputError("config must be a JSON object");
  for (const auto& [k, v] : j.items()) {
    if (std::find_if(std::begin(known), std::end(known), [&](const char* x) { return k == x; }) == std::end(known)) {
      throw InputError("unknown config key '" + k + "'");
    }
  }
  RunConfig c;
  try {
    auto& p = c.params;
    p.d = j.value("d", p.d);
    p.s = j.value("s", p.s);
    p.t = j.value("t", p.t);
    p.n_int_eq_n_ext = j.value("n_int_eq_n_ext", p.n_int_eq_n_ext);
    p.lat.t_bell = j.value("t_bell", p.lat.t_bell);
    p.lat.t_local = j.value("t_local", p.lat.t_local);
    p.lat.t_magic = j.value("t_magic", p.lat.t_magic);
    p.lat.p_magic = j.value("p_magic", p.lat.p_magic);
    if (j.contains("magic_mode")) c.magic = magic_mode_from_string(j.at("magic_mode").get<std::string>());
    c.seed = j.value("seed", c.seed);
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed config: ") + e.what());
  }
  if (!c.params.n_int_eq_n_ext) throw InputError("n_int_eq_n_ext=false is not supported");
  c.params.validate();
  return c;
}

inline NetworkParams params_from_json(const nlohmann::json& j) {
  nlohmann::json k = j;
  k.erase("magic_mode");
  k.erase("seed");
  return config_from_json(k).params;
}

inline nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("'" + path + "' is not valid JSON: " + e.what());
  }
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

/// 64-bit FNV-1a.
inline std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

inline std::string config_hash(const RunConfig& c) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(to_json(c).dump())));
  return buf;
}

/// One-line provenance header carried by every artifact.
inline std::string header_line(const RunConfig& c) {
  return std::string("nbqc ") + kVersion + " params=" + to_json(c).dump();
}

// ---------------------------------------------------------------------------
// Manifest round trip
// ---------------------------------------------------------------------------

inline nlohmann::json to_json(const std::map<OpSide, std::vector<int>>& forced) {
  auto arr = nlohmann::json::array();
  for (const auto& [k, v] : forced) arr.push_back({k.first, k.second, v});
  return arr;
}

inline std::map<OpSide, std::vector<int>> forced_from_json(const nlohmann::json& j) {
  std::map<OpSide, std::vector<int>> out;
  for (const auto& e : j) out[{e.at(0).get<std::size_t>(), e.at(1).get<int>()}] = e.at(2).get<std::vector<int>>();
  return out;
}

/// A rebuilt network plus the middle-switch assignment stored with it.
struct LoadedNetwork {
  NbqcNetwork net;
  std::map<OpSide, std::vector<int>> forced;
};

inline LoadedNetwork network_from_manifest(const nlohmann::json& j) {
  LoadedNetwork out;
  try {
    const NetworkParams params = params_from_json(j.at("params"));
    const std::string mode = j.at("mode").get<std::string>();
    if (mode == "agnostic") {
      out.net = build_circuit_agnostic(j.at("n_alg").get<int>(), params);
    } else if (mode == "specific") {
      const LinkConfig links = links_from_json(j.at("links"));
      const auto plans = plans_from_manifest(j);
      out.net = build_circuit_specific(links, params, &plans);
    } else {
      throw InputError("unknown network mode '" + mode + "'");
    }
    if (j.contains("forced")) out.forced = forced_from_json(j.at("forced"));
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed manifest: ") + e.what());
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

inline constexpr const char* kCsvColumns = "scheme,nodes,time_units,d,budget,clos_opt,config_hash";

struct CsvRow {
  std::string scheme;
  std::int64_t nodes = 0;
  Time time = 0;
  int d = 3;
  std::int64_t budget = -1;  // -1 = unlimited
  bool clos_opt = true;
  std::string hash;

  friend bool operator<(const CsvRow& a, const CsvRow& b) {
    return std::tie(a.scheme, a.d, a.budget, a.nodes, a.time, a.clos_opt) <
           std::tie(b.scheme, b.d, b.budget, b.nodes, b.time, b.clos_opt);
  }
};

/// Writes rows sorted, after a commented provenance header.
inline void write_csv(std::ostream& os, std::vector<CsvRow> rows, const RunConfig& cfg) {
  std::sort(rows.begin(), rows.end());
  os << "# " << header_line(cfg) << "\n" << kCsvColumns << "\n";
  for (const auto& r : rows) {
    os << r.scheme << ',' << r.nodes << ',' << r.time << ',' << r.d << ',';
    if (r.budget < 0) {
      os << "inf";
    } else {
      os << r.budget;
    }
    os << ',' << (r.clos_opt ? 1 : 0) << ',' << r.hash << "\n";
  }
}

// ---------------------------------------------------------------------------
// SVG
// ---------------------------------------------------------------------------

struct SvgSeries {
  std::string name;
  std::string color = "#1f77b4";
  bool line = true;
  bool dashed = false;
  std::vector<std::pair<double, double>> points;  // (nodes, time)
};

/// Log-log scatter of node count against execution time.
inline void write_svg(std::ostream& os, const std::vector<SvgSeries>& series, const std::string& title) {
  const double W = 640, H = 480, L = 70, R = 170, T = 40, B = 50;
  double x0 = std::numeric_limits<double>::max(), x1 = 0, y0 = x0, y1 = 0;
  for (const auto& s : series) {
    for (auto [x, y] : s.points) {
      if (x <= 0 || y <= 0) continue;
      x0 = std::min(x0, x), x1 = std::max(x1, x), y0 = std::min(y0, y), y1 = std::max(y1, y);
    }
  }
  if (x1 == 0) x0 = y0 = 1, x1 = y1 = 10;
  const double lx0 = std::floor(std::log10(x0)), lx1 = std::max(lx0 + 1, std::ceil(std::log10(x1)));
  const double ly0 = std::floor(std::log10(y0)), ly1 = std::max(ly0 + 1, std::ceil(std::log10(y1)));
  auto px = [&](double x) { return L + (std::log10(x) - lx0) / (lx1 - lx0) * (W - L - R); };
  auto py = [&](double y) { return H - B - (std::log10(y) - ly0) / (ly1 - ly0) * (H - T - B); };

  os << std::fixed << std::setprecision(1);
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << W << "\" height=\"" << H << "\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  os << "<text x=\"" << W / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" << title << "</text>\n";
  os << "<rect x=\"" << L << "\" y=\"" << T << "\" width=\"" << W - L - R << "\" height=\"" << H - T - B
     << "\" fill=\"none\" stroke=\"black\"/>\n";
  for (double e = lx0; e <= lx1; ++e) {
    os << "<text x=\"" << px(std::pow(10, e)) << "\" y=\"" << H - B + 16 << "\" text-anchor=\"middle\" font-size=\"11\">1e"
       << static_cast<int>(e) << "</text>\n";
  }
  for (double e = ly0; e <= ly1; ++e) {
    os << "<text x=\"" << L - 6 << "\" y=\"" << py(std::pow(10, e)) + 4 << "\" text-anchor=\"end\" font-size=\"11\">1e"
       << static_cast<int>(e) << "</text>\n";
  }
  os << "<text x=\"" << (L + W - R) / 2 << "\" y=\"" << H - 12 << "\" text-anchor=\"middle\" font-size=\"12\">nodes</text>\n";
  os << "<text x=\"16\" y=\"" << (T + H - B) / 2 << "\" transform=\"rotate(-90 16 " << (T + H - B) / 2
     << ")\" text-anchor=\"middle\" font-size=\"12\">time units</text>\n";

  double ly = T + 10;
  for (const auto& s : series) {
    if (s.line && s.points.size() > 1) {
      os << "<polyline fill=\"none\" stroke=\"" << s.color << "\"" << (s.dashed ? " stroke-dasharray=\"4 3\"" : "")
         << " points=\"";
      for (auto [x, y] : s.points) os << px(x) << ',' << py(y) << ' ';
      os << "\"/>\n";
    }
    for (auto [x, y] : s.points) {
      if (x <= 0 || y <= 0) continue;
      os << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << s.color << "\"/>\n";
    }
    os << "<circle cx=\"" << W - R + 14 << "\" cy=\"" << ly << "\" r=\"4\" fill=\"" << s.color << "\"/>";
    os << "<text x=\"" << W - R + 24 << "\" y=\"" << ly + 4 << "\" font-size=\"11\">" << s.name << "</text>\n";
    ly += 18;
  }
  os << "</svg>\n";
}

}  // namespace nbqc
