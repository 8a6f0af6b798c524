#pragma once

#include <filesystem>
#include <memory>
#include <vector>

#include "primesim/config.hpp"
#include "primesim/simulation.hpp"
#include "primesim/trade_io.hpp"

namespace primesim {

// Builds the exchange, oracle and agent population described by `config`.
// Agents are registered in a fixed order (ZI limit, ZI market, trend, mean
// reversion) so agent ids and random streams are stable.
std::unique_ptr<Simulation> build_simulation(const RunConfig& config);

std::shared_ptr<const PriceSeries> build_oracle(const RunConfig& config);

struct SimulationOutput {
  std::vector<Trade> tape;
  std::vector<L1Snapshot> l1;
  std::vector<MarketSubmission> market_orders;
  RunStats stats;
  ExchangeCounters counters;
  L1Snapshot final_quotes;
  std::shared_ptr<const PriceSeries> oracle;  // null without an oracle
};

// Runs the whole session in memory.
SimulationOutput simulate(const RunConfig& config);

Summary make_summary(const RunConfig& config, const SimulationOutput& out);

// Runs the session and writes trades.csv, l1.csv, summary.txt, config.json and,
// when an oracle is configured, oracle.csv into config.output_dir. Files are staged in a sibling directory and renamed
// into place, so a failed run leaves no partial output.
std::filesystem::path run_simulation(const RunConfig& config);

}  // namespace primesim
