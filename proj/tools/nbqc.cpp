// nbqc: resource compiler and simulator for non-blocking distributed FTQC.

#include "nbqc/baselines.hpp"
#include "nbqc/io.hpp"
#include "nbqc/optimizer.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <limits>
#include <mutex>
#include <thread>

using namespace nbqc;

namespace {

constexpr int kOk = 0;
constexpr int kDomain = 1;
constexpr int kInput = 2;

RunConfig load_config(const std::string& path) {
  if (path.empty()) return {};
  return config_from_json(read_json_file(path));
}

LogicalCircuit load_circuit(const std::string& path, const RunConfig& cfg) {
  return lower(parse_qasm(read_text_file(path)), cfg.params.lat);
}

/// Writes to `path`, or stdout for "" and "-".
template <class F>
void emit(const std::string& path, F&& write) {
  if (path.empty() || path == "-") {
    write(std::cout);
    return;
  }
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path + "'");
  write(out);
}

unsigned worker_count(std::size_t jobs) {
  unsigned n = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("NBQC_THREADS")) {
    const int cap = std::atoi(env);
    if (cap >= 1) n = std::min(n, static_cast<unsigned>(cap));
  }
  return static_cast<unsigned>(std::min<std::size_t>(n, std::max<std::size_t>(jobs, 1)));
}

/// Runs job(i) for i in [0, n) on a small pool.
template <class F>
void parallel_for(std::size_t n, F&& job) {
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  const unsigned w = worker_count(n);
  for (unsigned k = 0; k < w; ++k) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) job(i);
    });
  }
  for (auto& t : pool) t.join();
}

void print_breakdown(std::ostream& os, const NbqcNetwork& net) {
  os << "qubit " << net.qubit_nodes() << "\nring " << net.ring_nodes() << "\nswitching " << net.switching_nodes()
     << "\nfactory " << net.factory_nodes() << "\ntotal " << net.total_nodes() << "\n";
}

std::vector<CsvRow> baseline_rows(const LogicalCircuit& c, const RunConfig& cfg, const std::string& hash) {
  std::vector<CsvRow> rows;
  const int d = cfg.params.d;
  const CbEstimate cb = cb_dftqc(c, cfg.params.lat);
  rows.push_back({"cb_optimistic", cb.nodes_optimistic, cb.time, d, -1, false, hash});
  rows.push_back({"cb_pessimistic", cb.nodes_pessimistic, cb.time, d, -1, false, hash});
  for (MbKind k : {MbKind::Brickwork, MbKind::Clique}) {
    for (bool ring : {false, true}) {
      const BaselineEstimate e = mb_dftqc(k, ring, c, cfg.params.lat);
      rows.push_back({e.scheme, e.nodes, e.time, d, -1, false, hash});
    }
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Subcommands
// ---------------------------------------------------------------------------

struct Common {
  std::string config;
  std::string out;
};

int cmd_profile(const std::string& qasm, const Common& o) {
  const RunConfig cfg = load_config(o.config);
  const LogicalCircuit c = load_circuit(qasm, cfg);
  const IdealTimeline tl = asap_schedule(c, cfg.params.lat);
  nlohmann::json j = to_json(compute_bias(tl, cfg.params.lat.t_bell));
  j["header"] = header_line(cfg);
  j["depth"] = tl.depth;
  j["magic_demand"] = magic_demand(c);
  emit(o.out, [&](std::ostream& os) { os << j.dump(2) << "\n"; });
  return kOk;
}

int cmd_build(const std::string& input, const std::string& mode, const std::string& dot, const std::string& reduce,
              const Common& o) {
  const RunConfig cfg = load_config(o.config);
  const nlohmann::json in = read_json_file(input);
  nlohmann::json man;
  NbqcNetwork net;
  if (mode == "agnostic") {
    if (!in.contains("n_alg")) throw InputError("input has no n_alg");
    net = build_circuit_agnostic(in.at("n_alg").get<int>(), cfg.params);
    man = manifest(net);
  } else {
    // A profile carries bias_qq; a link config carries m_qq.
    LinkConfig links = in.contains("bias_qq") ? links_from_profile(profile_from_json(in)) : links_from_json(in);
    if (in.contains("magic_demand")) links.magic_demand = in.at("magic_demand").get<std::vector<int>>();
    links.validate();
    net = build_circuit_specific(links, cfg.params);
    if (!reduce.empty()) {
      const LogicalCircuit c = load_circuit(reduce, cfg);
      ClosReduction red = clos_optimize(net, c, cfg.sim());
      net = std::move(red.net);
      man = manifest(net);
      man["forced"] = to_json(red.forced);
      man["clos_reduction"] = {{"applied", red.applied},
                               {"nodes_before", red.nodes_before},
                               {"nodes_after", red.nodes_after},
                               {"time", red.time_after},
                               {"clashes", red.clashes}};
    } else {
      man = manifest(net);
    }
  }
  man["header"] = header_line(cfg);
  emit(o.out, [&](std::ostream& os) { os << man.dump(2) << "\n"; });
  if (!dot.empty()) emit(dot, [&](std::ostream& os) { net.graph.write_dot(os); });
  print_breakdown(o.out.empty() || o.out == "-" ? std::cerr : std::cout, net);
  return kOk;
}

int cmd_simulate(const std::string& man_path, const std::string& qasm, const std::string& trace, const Common& o) {
  RunConfig cfg = load_config(o.config);
  const LoadedNetwork ln = network_from_manifest(read_json_file(man_path));
  // The manifest fixes the network; the config supplies seed and magic mode.
  cfg.params = ln.net.params;
  const LogicalCircuit c = load_circuit(qasm, cfg);
  if (c.n_alg > ln.net.n_alg()) throw InputError("circuit has more qubits than the network");
  SimConfig sc = cfg.sim();
  sc.forced = ln.forced;
  sc.record_trace = !trace.empty();
  const SimReport r = simulate(ln.net, c, sc);
  nlohmann::json j = to_json(r);
  j["header"] = header_line(cfg);
  emit(o.out, [&](std::ostream& os) { os << j.dump(2) << "\n"; });
  if (!trace.empty()) {
    emit(trace, [&](std::ostream& os) {
      os << "# " << header_line(cfg) << "\n";
      write_trace(os, r);
    });
  }
  return kOk;
}

struct TradeoffJob {
  std::int64_t budget = -1;
  bool clos_opt = true;
  std::optional<OptimizeResult> result;
  std::string error;
};

int cmd_tradeoff(const std::string& qasm, std::vector<std::string> budgets, const std::string& svg,
                 const std::string& json_out, bool no_clos_series, int cap, const Common& o) {
  const RunConfig cfg = load_config(o.config);
  const LogicalCircuit c = load_circuit(qasm, cfg);
  const std::string hash = config_hash(cfg);
  if (budgets.empty()) budgets.push_back("inf");

  std::vector<TradeoffJob> jobs;
  for (const auto& b : budgets) {
    std::int64_t v = -1;
    if (b != "inf") {
      try {
        v = std::stoll(b);
      } catch (const std::exception&) {
        throw InputError("budget '" + b + "' is not an integer or inf");
      }
      if (v < 0) throw InputError("budget must be non-negative");
    }
    jobs.push_back({v, true, {}, {}});
    if (!no_clos_series) jobs.push_back({v, false, {}, {}});
  }
  parallel_for(jobs.size(), [&](std::size_t i) {
    auto& j = jobs[i];
    OptimizeOptions opt;
    opt.clos_opt = j.clos_opt;
    opt.iteration_cap = cap;
    opt.sim = cfg.sim();
    try {
      j.result = optimize_loop(c, cfg.params, j.budget < 0 ? std::numeric_limits<std::int64_t>::max() : j.budget, opt);
    } catch (const BudgetTooSmall& e) {
      j.error = e.what();
    }
  });

  std::vector<CsvRow> rows = baseline_rows(c, cfg, hash);
  nlohmann::json frontiers = nlohmann::json::array();
  std::vector<SvgSeries> series(2);
  series[0] = {"NBQC", "#1f77b4", true, false, {}};
  series[1] = {"NBQC (no Clos opt)", "#1f77b4", true, true, {}};
  for (const auto& j : jobs) {
    if (!j.result) {
      std::cerr << "budget " << j.budget << ": " << j.error << "\n";
      continue;
    }
    nlohmann::json pts = nlohmann::json::array();
    for (const auto& p : j.result->frontier) {
      rows.push_back({j.clos_opt ? "nbqc" : "nbqc_no_clos_opt", p.nodes, p.time, cfg.params.d, j.budget, j.clos_opt,
                      hash});
      series[j.clos_opt ? 0 : 1].points.emplace_back(static_cast<double>(p.nodes), static_cast<double>(p.time));
      pts.push_back({{"nodes", p.nodes},
                     {"nodes_unreduced", p.nodes_unreduced},
                     {"time", p.time},
                     {"iteration", p.iteration},
                     {"links", to_json(p.links)}});
    }
    frontiers.push_back({{"budget", j.budget},
                         {"clos_opt", j.clos_opt},
                         {"stop_reason", j.result->stop_reason},
                         {"points", std::move(pts)}});
  }
  emit(o.out, [&](std::ostream& os) { write_csv(os, rows, cfg); });
  if (!json_out.empty()) {
    emit(json_out, [&](std::ostream& os) {
      os << nlohmann::json{{"header", header_line(cfg)}, {"config_hash", hash}, {"frontiers", frontiers}}.dump(2)
         << "\n";
    });
  }
  if (!svg.empty()) {
    for (auto& s : series) {
      std::sort(s.points.begin(), s.points.end());
      s.points.erase(std::unique(s.points.begin(), s.points.end()), s.points.end());
    }
    const char* colors[] = {"#d62728", "#ff7f0e", "#2ca02c", "#9467bd", "#8c564b", "#e377c2"};
    std::size_t k = 0;
    for (const auto& r : rows) {
      if (r.scheme.rfind("nbqc", 0) == 0) continue;
      series.push_back({r.scheme, colors[k++ % 6], false, false, {{double(r.nodes), double(r.time)}}});
    }
    emit(svg, [&](std::ostream& os) { write_svg(os, series, "execution time vs node count"); });
  }
  bool any = false;
  for (const auto& j : jobs) any = any || j.result.has_value();
  return any ? kOk : kDomain;
}

int cmd_channels(const std::string& qasm, const std::vector<int>& ds, const Common& o) {
  const RunConfig base = load_config(o.config);
  for (int d : ds) {
    if (d < 3) throw InvalidDegree(d);
  }
  const LogicalCircuit c = load_circuit(qasm, base);
  std::vector<std::vector<CsvRow>> out(ds.size());
  parallel_for(ds.size(), [&](std::size_t i) {
    RunConfig cfg = base;
    cfg.params.d = ds[i];
    const std::string hash = config_hash(cfg);
    const BottleneckFree bf = bottleneck_free_links(c, cfg.params, cfg.sim());
    const ClosReduction red = clos_optimize(bf.net, c, cfg.sim());
    out[i].push_back({"nbqc", red.nodes_after, red.time_after, ds[i], -1, true, hash});
    out[i].push_back({"nbqc", red.nodes_before, bf.report.total_time, ds[i], -1, false, hash});
  });
  std::vector<CsvRow> rows;
  for (auto& v : out) rows.insert(rows.end(), v.begin(), v.end());
  emit(o.out, [&](std::ostream& os) { write_csv(os, rows, base); });
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nbqc: resource compiler and simulator for non-blocking distributed FTQC"};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);
  Common common;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", common.config, "JSON config (d, t_bell, t_local, t_magic, p_magic, s, t, ...)")
        ->check(CLI::ExistingFile);
    sub->add_option("-o,--out", common.out, "output file (default stdout)");
  };

  std::string qasm, input, mode = "specific", dot, reduce, man, trace, svg, json_out;
  std::vector<std::string> budgets;
  std::vector<int> ds{3, 4, 5, 6};
  bool no_clos = false;
  int cap = 500;

  auto* profile = app.add_subcommand("profile", "compute the access-frequency profile of a circuit");
  profile->add_option("qasm", qasm, "OpenQASM 2 circuit (Clifford+T)")->required();
  add_common(profile);

  auto* build = app.add_subcommand("build", "build a network and write its manifest");
  build->add_option("input", input, "profile or link-config JSON (agnostic mode reads n_alg only)")->required();
  build->add_option("-m,--mode", mode, "agnostic or specific")->check(CLI::IsMember({"agnostic", "specific"}));
  build->add_option("--dot", dot, "write the node graph as DOT");
  build->add_option("--reduce", reduce, "QASM circuit for Clos reduction (specific mode)");
  add_common(build);

  auto* sim = app.add_subcommand("simulate", "simulate a circuit on a network manifest");
  sim->add_option("manifest", man, "manifest JSON from build")->required();
  sim->add_option("qasm", qasm, "OpenQASM 2 circuit")->required();
  sim->add_option("--trace", trace, "write the event trace");
  add_common(sim);

  auto* trade = app.add_subcommand("tradeoff", "node-count vs time frontier under node budgets");
  trade->add_option("qasm", qasm, "OpenQASM 2 circuit")->required();
  trade->add_option("-b,--budget", budgets, "node budgets (integer or inf)")->delimiter(',');
  trade->add_option("--svg", svg, "write a log-log SVG plot");
  trade->add_option("--json", json_out, "write frontiers with full link configs");
  trade->add_flag("--no-clos-series", no_clos, "skip the series without Clos optimization");
  trade->add_option("--iteration-cap", cap, "optimizer iteration cap")->check(CLI::PositiveNumber);
  add_common(trade);

  auto* chan = app.add_subcommand("channels", "sweep the channel count d");
  chan->add_option("qasm", qasm, "OpenQASM 2 circuit")->required();
  chan->add_option("--d", ds, "channel counts")->delimiter(',');
  add_common(chan);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kInput;
  }

  try {
    if (*profile) return cmd_profile(qasm, common);
    if (*build) return cmd_build(input, mode, dot, reduce, common);
    if (*sim) return cmd_simulate(man, qasm, trace, common);
    if (*trade) return cmd_tradeoff(qasm, budgets, svg, json_out, no_clos, cap, common);
    if (*chan) return cmd_channels(qasm, ds, common);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kDomain;
  }
  return kOk;
}
