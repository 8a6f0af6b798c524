#include "primesim/runner.hpp"

#include <unistd.h>

#include <system_error>

#include "primesim/agents.hpp"

namespace primesim {

std::shared_ptr<const PriceSeries> build_oracle(const RunConfig& config) {
  switch (config.oracle.kind) {
    case OracleSpec::Kind::None:
      return nullptr;
    case OracleSpec::Kind::Constant:
      return std::make_shared<const PriceSeries>(constant_series(config.oracle.price));
    case OracleSpec::Kind::RandomWalk:
      return std::make_shared<const PriceSeries>(random_walk_series(config.oracle.walk));
    case OracleSpec::Kind::FromFile:
      return std::make_shared<const PriceSeries>(read_series_csv(config.oracle.path));
  }
  return nullptr;
}

std::unique_ptr<Simulation> build_simulation(const RunConfig& config) {
  validate(config);
  auto sim = std::make_unique<Simulation>(config.seed);
  if (auto oracle = build_oracle(config)) sim->set_oracle(std::move(oracle), ObservationNoise{config.observation_noise});
  if (config.book_seed) {
    sim->exchange().seed_linear_book(config.book_seed->start_price, config.book_seed->half_width,
                                     config.book_seed->slope, 0);
  }
  for (int i = 0; i < config.zi_limit.count; ++i) sim->add_agent(std::make_unique<ZiLimitAgent>(config.zi_limit.params));
  for (int i = 0; i < config.zi_market.count; ++i) {
    sim->add_agent(std::make_unique<ZiMarketAgent>(config.zi_market.params));
  }
  for (int i = 0; i < config.trend.count; ++i) sim->add_agent(std::make_unique<TechnicalAgent>(config.trend.params));
  for (int i = 0; i < config.mean_revert.count; ++i) {
    sim->add_agent(std::make_unique<TechnicalAgent>(config.mean_revert.params));
  }
  sim->schedule(config.session_length(), AgentId{0}, EventKind::SessionEnd);
  return sim;
}

SimulationOutput simulate(const RunConfig& config) {
  auto sim = build_simulation(config);
  SimulationOutput out;
  out.stats = sim->run_until(config.session_length());
  out.tape = sim->exchange().tape();
  out.l1 = sim->exchange().l1_log();
  out.market_orders = sim->exchange().market_submissions();
  out.counters = sim->exchange().counters();
  out.final_quotes = sim->exchange().book().l1(config.session_length());
  out.oracle = sim->oracle_series();
  return out;
}

Summary make_summary(const RunConfig& config, const SimulationOutput& out) {
  auto opt = [](const std::optional<Price>& p) { return p ? std::to_string(*p) : std::string(); };
  return Summary{
      {"seed", std::to_string(config.seed)},
      {"session_ns", std::to_string(config.session_length())},
      {"events", std::to_string(out.stats.events)},
      {"wakeups", std::to_string(out.stats.wakeups)},
      {"trades", std::to_string(out.tape.size())},
      {"limit_orders", std::to_string(out.counters.limit_orders)},
      {"market_orders", std::to_string(out.counters.market_orders)},
      {"cancels", std::to_string(out.counters.cancels)},
      {"no_liquidity", std::to_string(out.counters.no_liquidity)},
      {"first_event_ns", std::to_string(out.stats.first_event)},
      {"last_event_ns", std::to_string(out.stats.last_event)},
      {"final_best_bid", opt(out.final_quotes.best_bid)},
      {"final_best_ask", opt(out.final_quotes.best_ask)},
      {"census", std::to_string(config.zi_limit.count) + "/" + std::to_string(config.zi_market.count) + "/" +
                     std::to_string(config.trend.count) + "/" + std::to_string(config.mean_revert.count)},
  };
}

std::filesystem::path run_simulation(const RunConfig& config) {
  namespace fs = std::filesystem;
  validate(config);
  const fs::path target = fs::path(config.output_dir);
  fs::path staging = target;
  staging += ".tmp-" + std::to_string(::getpid());
  fs::remove_all(staging);
  fs::create_directories(staging);
  try {
    const SimulationOutput out = simulate(config);
    write_trades_csv(out.tape, staging / "trades.csv");
    write_l1_csv(out.l1, staging / "l1.csv");
    write_summary(make_summary(config, out), staging / "summary.txt");
    save_config(config, staging / "config.json");
    if (out.oracle) write_series_csv(*out.oracle, staging / "oracle.csv");
    fs::remove_all(target);
    if (target.has_parent_path()) fs::create_directories(target.parent_path());
    fs::rename(staging, target);
  } catch (...) {
    std::error_code ec;
    fs::remove_all(staging, ec);
    throw;
  }
  return target;
}

}  // namespace primesim
