#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json.hpp>

#include "primesim/agents.hpp"
#include "primesim/oracle.hpp"

namespace primesim {

struct OracleSpec {
  enum class Kind { None, Constant, RandomWalk, FromFile };
  Kind kind = Kind::None;
  Price price = 1000;  // constant
  RandomWalkSpec walk{};
  std::string path;  // from_file; relative paths resolve against the config file
};

struct BookSeedSpec {
  Price start_price = 1000;
  Price half_width = 50;
  Qty slope = 1;
};

template <class Params>
struct AgentGroup {
  int count = 0;
  Params params{};
};

// Everything a run depends on. A run is a pure function of this record.
struct RunConfig {
  std::uint64_t seed = 1;
  double session_seconds = 3600.0;
  std::string output_dir = "runs/out";
  std::optional<BookSeedSpec> book_seed;
  OracleSpec oracle{};
  Price observation_noise = 0;
  AgentGroup<ZiLimitParams> zi_limit{};
  AgentGroup<ZiMarketParams> zi_market{};
  AgentGroup<TechnicalParams> trend{0, TechnicalParams{TechnicalKind::TrendFollow}};
  AgentGroup<TechnicalParams> mean_revert{0, TechnicalParams{TechnicalKind::MeanRevert}};

  SimTime session_length() const { return seconds(session_seconds); }
  PrimeCensus census() const { return {zi_limit.count, zi_market.count, trend.count, mean_revert.count}; }
};

// Throws ConfigError on unknown keys, wrong types or invalid values.
RunConfig parse_config(const nlohmann::json& j);
nlohmann::json to_json(const RunConfig& config);

RunConfig load_config(const std::filesystem::path& path);
void save_config(const RunConfig& config, const std::filesystem::path& path);

// Semantic checks shared by parse_config and the runner.
void validate(const RunConfig& config);

// Shipped presets. "santa-fe": fixed-band ZI limit agents and fair-coin market
// agents on an empty book. "prime": the 1000/30/10/10 census around a
// linearly seeded book tracking a constant oracle.
RunConfig santa_fe_preset();
RunConfig prime_preset();
std::optional<RunConfig> preset(const std::string& name);

}  // namespace primesim
