#include "nbqc/bench.hpp"
#include "nbqc/io.hpp"
#include "nbqc/optimizer.hpp"

#include <gtest/gtest.h>

#include <regex>
#include <sstream>

using namespace nbqc;

TEST(Config, DefaultsWhenEmpty) {
  const auto c = config_from_json(nlohmann::json::object());
  EXPECT_EQ(c.params.d, 3);
  EXPECT_EQ(c.params.lat.t_bell, 1000);
  EXPECT_EQ(c.params.lat.t_local, 1);
  EXPECT_EQ(c.magic, MagicMode::Deterministic);
  EXPECT_EQ(c.seed, 1u);
}

TEST(Config, ReadsEveryKey) {
  const auto c = config_from_json(nlohmann::json::parse(
      R"({"d": 5, "t_bell": 200, "t_local": 2, "t_magic": 3, "p_magic": 0.5, "s": 3, "t": 5, "magic_mode": "stochastic", "seed": 9})"));
  EXPECT_EQ(c.params.d, 5);
  EXPECT_EQ(c.params.lat.t_bell, 200);
  EXPECT_EQ(c.params.lat.t_local, 2);
  EXPECT_EQ(c.params.lat.t_magic, 3);
  EXPECT_DOUBLE_EQ(c.params.lat.p_magic, 0.5);
  EXPECT_EQ(c.params.s, 3);
  EXPECT_EQ(c.params.t, 5);
  EXPECT_EQ(c.magic, MagicMode::Stochastic);
  EXPECT_EQ(c.seed, 9u);
  EXPECT_EQ(config_from_json(to_json(c)).seed, 9u);
  EXPECT_EQ(to_json(config_from_json(to_json(c))), to_json(c));
}

TEST(Config, RejectsBadInput) {
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"t_bel": 10})")), InputError);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"d": "three"})")), InputError);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"n_int_eq_n_ext": false})")), InputError);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"magic_mode": "lucky"})")), InputError);
  EXPECT_THROW(config_from_json(nlohmann::json::parse(R"({"p_magic": 0})")), InputError);
  EXPECT_THROW(config_from_json(nlohmann::json::array()), InputError);
  EXPECT_THROW(read_json_file("/nonexistent/cfg.json"), InputError);
}

TEST(Hash, StableAndSensitive) {
  RunConfig a;
  RunConfig b;
  EXPECT_EQ(config_hash(a), config_hash(b));
  EXPECT_EQ(config_hash(a).size(), 16u);
  EXPECT_TRUE(std::regex_match(config_hash(a), std::regex("[0-9a-f]{16}")));
  b.seed = 2;
  EXPECT_NE(config_hash(a), config_hash(b));
  // published FNV-1a test vectors
  EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a("foobar"), 0x85944171f73967e8ULL);
}

TEST(Header, CarriesParams) {
  RunConfig c;
  c.params.lat.t_bell = 77;
  const auto h = header_line(c);
  EXPECT_EQ(h.rfind("nbqc ", 0), 0u);
  const auto j = nlohmann::json::parse(h.substr(h.find("params=") + 7));
  EXPECT_EQ(j["t_bell"], 77);
}

TEST(Csv, SortedWithHeader) {
  RunConfig cfg;
  std::vector<CsvRow> rows{{"nbqc", 500, 90, 3, -1, true, "h"},
                           {"cb_optimistic", 4, 3000, 3, -1, false, "h"},
                           {"nbqc", 100, 200, 3, 1000, true, "h"},
                           {"nbqc", 50, 400, 3, 1000, true, "h"}};
  std::ostringstream a;
  write_csv(a, rows, cfg);
  std::reverse(rows.begin(), rows.end());
  std::ostringstream b;
  write_csv(b, rows, cfg);
  EXPECT_EQ(a.str(), b.str());

  std::istringstream is(a.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "# " + header_line(cfg));
  std::getline(is, line);
  EXPECT_EQ(line, kCsvColumns);
  std::vector<std::string> body;
  while (std::getline(is, line)) body.push_back(line);
  ASSERT_EQ(body.size(), 4u);
  EXPECT_EQ(body[0], "cb_optimistic,4,3000,3,inf,0,h");
  EXPECT_EQ(body[1], "nbqc,500,90,3,inf,1,h");
  EXPECT_EQ(body[2], "nbqc,50,400,3,1000,1,h");
  EXPECT_EQ(body[3], "nbqc,100,200,3,1000,1,h");
}

TEST(Svg, WellFormed) {
  std::vector<SvgSeries> s(2);
  s[0].name = "nbqc";
  s[0].points = {{100, 5000}, {1000, 2000}, {30000, 1200}};
  s[1].name = "cb";
  s[1].line = false;
  s[1].points = {{28, 9000}};
  std::ostringstream os;
  write_svg(os, s, "tradeoff");
  const std::string svg = os.str();
  EXPECT_EQ(svg.rfind("<svg", 0), 0u);
  EXPECT_NE(svg.find("</svg>"), std::string::npos);
  // every element is self-closed or closed, and no coordinate is NaN
  const std::regex open("<(text|svg)[ >]"), close("</(text|svg)>");
  const auto n_open = std::distance(std::sregex_iterator(svg.begin(), svg.end(), open), std::sregex_iterator());
  const auto n_close = std::distance(std::sregex_iterator(svg.begin(), svg.end(), close), std::sregex_iterator());
  EXPECT_EQ(n_open, n_close);
  EXPECT_EQ(svg.find("nan"), std::string::npos);
  EXPECT_EQ(svg.find("inf"), std::string::npos);
  EXPECT_NE(svg.find(">nbqc<"), std::string::npos);
  EXPECT_NE(svg.find("polyline"), std::string::npos);
}

TEST(Svg, EmptySeriesStillRenders) {
  std::ostringstream os;
  write_svg(os, {}, "empty");
  EXPECT_EQ(os.str().find("nan"), std::string::npos);
  EXPECT_NE(os.str().find("</svg>"), std::string::npos);
}

TEST(Manifest, ForcedChoicesRoundTrip) {
  std::map<OpSide, std::vector<int>> f{{{0, 0}, {1}}, {{3, 1}, {2, 0}}, {{7, 0}, {}}};
  EXPECT_EQ(forced_from_json(nlohmann::json::parse(to_json(f).dump())), f);
}

TEST(Manifest, ReducedNetworkReplays) {
  NetworkParams p;
  p.lat.t_bell = 200;
  const auto c = bench::biased_pattern(6, 40, true);
  const auto bf = bottleneck_free_links(c, p);
  const auto red = clos_optimize(bf.net, c);
  ASSERT_TRUE(red.applied);
  auto j = manifest(red.net);
  j["forced"] = to_json(red.forced);
  const auto back = network_from_manifest(nlohmann::json::parse(j.dump()));
  EXPECT_EQ(back.net.total_nodes(), red.nodes_after);
  SimConfig cfg;
  cfg.forced = back.forced;
  EXPECT_EQ(simulate(back.net, c, cfg).start, red.report.start);
}

TEST(Manifest, Malformed) {
  EXPECT_THROW(network_from_manifest(nlohmann::json::object()), InputError);
  EXPECT_THROW(network_from_manifest(nlohmann::json{{"mode", "ring"}, {"params", to_json(NetworkParams{})}}), InputError);
}
