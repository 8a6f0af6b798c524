#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "primesim/cli.hpp"
#include "primesim/config.hpp"
#include "primesim/runner.hpp"
#include "primesim/trade_io.hpp"

using namespace primesim;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "primesim-test-app" / name;
  fs::remove_all(dir);
  fs::create_directories(dir.parent_path());
  return dir;
}

struct CliResult {
  int code;
  std::string out, err;
};

CliResult run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

Summary parse_kv(const std::string& text) {
  Summary s;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    const auto eq = line.find('=');
    if (eq != std::string::npos) s[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return s;
}

}  // namespace

TEST_CASE("config JSON round trip", "[app][config]") {
  for (const auto& cfg : {santa_fe_preset(), prime_preset()}) {
    const auto j = to_json(cfg);
    CHECK(to_json(parse_config(j)) == j);
  }
  auto cfg = prime_preset();
  cfg.oracle.kind = OracleSpec::Kind::RandomWalk;
  cfg.oracle.walk.sigma = 2.5;
  cfg.zi_market.params.mode = MarketMode::Darp;
  cfg.zi_market.params.darp.p = 0.7;
  const auto path = scratch("roundtrip") / "c.json";
  fs::create_directories(path.parent_path());
  save_config(cfg, path);
  CHECK(to_json(load_config(path)) == to_json(cfg));
}

TEST_CASE("config rejects unknown keys and bad values", "[app][config]") {
  auto j = to_json(santa_fe_preset());
  auto bad = j;
  bad["sesion_seconds"] = 10;
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
  bad = j;
  bad["agents"]["zi_limit"]["colour"] = "red";
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
  bad = j;
  bad["agents"]["zi_limit"]["p_cancel"] = 2.0;
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
  bad = j;
  bad["session_seconds"] = "long";
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
  bad = j;
  bad["agents"]["zi_market"]["mode"] = "prime";  // fundamental agents need an oracle
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
}

TEST_CASE("presets are available by name", "[app][config]") {
  CHECK(preset("santa-fe"));
  CHECK(preset("prime"));
  CHECK_FALSE(preset("nasdaq"));
  CHECK(prime_preset().census() == PrimeCensus{1000, 30, 10, 10});
}

TEST_CASE("shipped preset files match the built-in presets", "[app][config]") {
  const fs::path dir = PRIMESIM_PRESET_DIR;
  CHECK(to_json(load_config(dir / "santa-fe.json")) == to_json(santa_fe_preset()));
  CHECK(to_json(load_config(dir / "prime.json")) == to_json(prime_preset()));
}

TEST_CASE("trade dump loading", "[app][io]") {
  const auto dir = scratch("load");
  fs::create_directories(dir);
  std::ofstream(dir / "good.csv") << "ts,price,qty,aggressor\n20,101,2,B\n10,100,1,S\n";
  const auto d = load_trades(dir / "good.csv");
  REQUIRE(d.trades.size() == 2);
  CHECK(d.trades[0].ts == 10);
  CHECK(d.trades[0].aggressor == Side::Ask);
  CHECK(d.malformed == 0);

  std::ostringstream many;
  many << "ts,price,qty,aggressor,taker_agent\n";
  for (int i = 0; i < 300; ++i) many << i << ",100,1," << (i % 2 ? 'B' : 'S') << ",3\n";
  many << "oops,100,1,B,3\n";
  std::ofstream(dir / "mostly.csv") << many.str();
  const auto m = load_trades(dir / "mostly.csv");
  CHECK(m.trades.size() == 300);
  CHECK(m.malformed == 1);
  CHECK(m.trades[1].taker_agent == AgentId{3});

  std::ofstream(dir / "bad.csv") << "ts,price,qty,aggressor\n1,100,1,X\n2,100,1,B\n";
  CHECK_THROWS_AS(load_trades(dir / "bad.csv"), DataError);
  std::ofstream(dir / "nohdr.csv") << "a,b\n1,2\n";
  CHECK_THROWS_AS(load_trades(dir / "nohdr.csv"), DataError);
  CHECK_THROWS_AS(load_trades(dir / "absent.csv"), DataError);
}

TEST_CASE("trade and quote CSV round trip", "[app][io]") {
  auto cfg = santa_fe_preset();
  cfg.session_seconds = 120;
  const auto out = simulate(cfg);
  const auto dir = scratch("csv");
  fs::create_directories(dir);
  write_trades_csv(out.tape, dir / "t.csv");
  write_l1_csv(out.l1, dir / "q.csv");
  const auto t = load_trades(dir / "t.csv").trades;
  REQUIRE(t.size() == out.tape.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(t[i].ts == out.tape[i].ts);
    CHECK(t[i].price == out.tape[i].price);
    CHECK(t[i].qty == out.tape[i].qty);
    CHECK(t[i].aggressor == out.tape[i].aggressor);
    CHECK(t[i].taker_agent == out.tape[i].taker_agent);
  }
  const auto q = load_l1(dir / "q.csv");
  REQUIRE(q.size() == out.l1.size());
  for (std::size_t i = 0; i < q.size(); ++i) CHECK(q[i].same_quotes(out.l1[i]));
}

TEST_CASE("durations", "[app][cli]") {
  CHECK(cli::parse_duration("5s") == 5 * kNanosPerSecond);
  CHECK(cli::parse_duration("1h") == 3600 * kNanosPerSecond);
  CHECK(cli::parse_duration("250ms") == 250'000'000);
  CHECK(cli::parse_duration("30m") == 1800 * kNanosPerSecond);
  CHECK(cli::parse_duration("100us") == 100'000);
  CHECK(cli::parse_duration("7ns") == 7);
  CHECK(cli::parse_duration("2") == 2 * kNanosPerSecond);
  CHECK_FALSE(cli::parse_duration("fast"));
  CHECK_FALSE(cli::parse_duration("-3s"));
}

TEST_CASE("command line exit codes", "[app][cli]") {
  CHECK(run_cli({}).code == cli::kUsage);
  CHECK(run_cli({"--help"}).code == cli::kOk);
  CHECK(run_cli({"frobnicate"}).code == cli::kUsage);
  CHECK(run_cli({"simulate", "no-such-preset-or-file.json"}).code == cli::kConfig);
  CHECK(run_cli({"analyze", "impact", "/nonexistent/trades.csv", "/nonexistent/l1.csv"}).code == cli::kData);
  CHECK(run_cli({"analyze", "impact", "/nonexistent", "--window", "0s"}).code != cli::kOk);

  const auto dir = scratch("badcfg");
  fs::create_directories(dir);
  std::ofstream(dir / "c.json") << R"({"seed": 1, "bogus": true})";
  const auto r = run_cli({"simulate", (dir / "c.json").string()});
  CHECK(r.code == cli::kConfig);
  CHECK_FALSE(r.err.empty());
}

TEST_CASE("a failed run leaves no partial output", "[app][cli]") {
  const auto out = scratch("partial");
  auto cfg = prime_preset();
  cfg.oracle.kind = OracleSpec::Kind::FromFile;
  cfg.oracle.path = (out.parent_path() / "missing-oracle.csv").string();
  cfg.output_dir = out.string();
  CHECK_THROWS(run_simulation(cfg));
  CHECK_FALSE(fs::exists(out));
  for (const auto& e : fs::directory_iterator(out.parent_path())) {
    CHECK(e.path().filename().string().find("partial") == std::string::npos);
  }
}

TEST_CASE("simulate, analyze and replay end to end", "[app][cli]") {
  const auto root = scratch("e2e");
  const auto cfg_path = root.parent_path() / "e2e.json";
  auto cfg = santa_fe_preset();
  cfg.session_seconds = 1800;
  cfg.output_dir = root.string();
  save_config(cfg, cfg_path);

  auto r = run_cli({"simulate", cfg_path.string()});
  REQUIRE(r.code == cli::kOk);
  for (const char* f : {"trades.csv", "l1.csv", "summary.txt", "config.json"}) CHECK(fs::exists(root / f));

  r = run_cli({"analyze", "impact", root.string(), "--window", "1s", "--horizon", "10m"});
  REQUIRE(r.code == cli::kOk);
  const auto impact = parse_kv(r.out);
  CHECK(impact.contains("delta"));
  CHECK(fs::exists(root / "analysis" / "buckets.csv"));

  r = run_cli({"analyze", "decay", root.string(), "--window", "1s", "--horizon", "10m", "--lags", "20"});
  REQUIRE(r.code == cli::kOk);
  CHECK(fs::exists(root / "analysis" / "kernel.csv"));

  r = run_cli({"analyze", "acf", root.string(), "--lags", "50"});
  REQUIRE(r.code == cli::kOk);
  CHECK(parse_kv(r.out).contains("acf_1"));

  r = run_cli({"replay", root.string()});
  CHECK(r.code == cli::kOk);

  // Tampering with the tape must be detected.
  { std::ofstream(root / "trades.csv", std::ios::app) << "1,1,1,B,1\n"; }
  r = run_cli({"replay", root.string(), "--out", (root.parent_path() / "e2e.replay2").string()});
  CHECK(r.code == cli::kData);
}

TEST_CASE("seed fan-out writes one directory per seed", "[app][cli]") {
  const auto root = scratch("fan");
  const auto cfg_path = root.parent_path() / "fan.json";
  auto cfg = santa_fe_preset();
  cfg.session_seconds = 60;
  save_config(cfg, cfg_path);
  const auto r = run_cli({"simulate", cfg_path.string(), "--out", root.string(), "--seeds", "3"});
  REQUIRE(r.code == cli::kOk);
  for (int s = 1; s <= 3; ++s) CHECK(fs::exists(root / ("seed-" + std::to_string(s)) / "trades.csv"));
  CHECK(load_trades(root / "seed-1" / "trades.csv").trades != load_trades(root / "seed-2" / "trades.csv").trades);
}

TEST_CASE("one hour of santa-fe never crosses the book", "[app][smoke]") {
  auto cfg = santa_fe_preset();
  cfg.session_seconds = 3600;
  const auto out = simulate(cfg);
  for (const auto& q : out.l1) {
    if (q.two_sided()) REQUIRE(*q.best_bid < *q.best_ask);
  }
  CHECK(out.stats.session_end == seconds(3600));
  CHECK(out.counters.traded_qty > 0);
}

TEST_CASE("installed binary reports usage", "[app][cli]") {
  const std::string cmd = std::string(PRIMESIM_CLI_PATH) + " --help > /dev/null";
  CHECK(std::system(cmd.c_str()) == 0);
}
