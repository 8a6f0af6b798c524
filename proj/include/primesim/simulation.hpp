#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string_view>
#include <vector>

#include "primesim/event_queue.hpp"
#include "primesim/oracle.hpp"
#include "primesim/order_book.hpp"
#include "primesim/rng.hpp"

namespace primesim {

struct MidPoint {
  SimTime ts = 0;
  Price mid2x = 0;
};

// One accepted market order, whether or not it found liquidity.
struct MarketSubmission {
  SimTime ts = 0;
  AgentId agent{};
  Side side = Side::Bid;
  Qty qty = 0;
  Qty filled = 0;
};

struct ExchangeCounters {
  std::uint64_t limit_orders = 0;
  std::uint64_t market_orders = 0;
  std::uint64_t cancels = 0;
  std::uint64_t cancel_misses = 0;
  std::uint64_t no_liquidity = 0;
  Qty submitted_qty = 0;
  Qty traded_qty = 0;
  Qty cancelled_qty = 0;
  Qty market_unfilled_qty = 0;
  Qty self_cross_discarded_qty = 0;
};

// The book plus everything the exchange publishes: trade tape, L1 changes,
// and the two-sided mid history that technical agents read.
class Exchange {
 public:
  struct Placed {
    OrderId id{};
    SubmitResult result;
  };

  const OrderBook& book() const { return book_; }

  Placed place_limit(AgentId agent, Side side, Price price, Qty qty, SimTime ts);
  MarketResult place_market(AgentId agent, Side side, Qty qty, SimTime ts);
  std::optional<LimitOrder> cancel(OrderId id, SimTime ts);
  void seed_linear_book(Price start, Price half_width, Qty slope, SimTime ts = 0);

  const std::vector<Trade>& tape() const { return tape_; }
  const std::vector<L1Snapshot>& l1_log() const { return l1_log_; }
  const std::vector<MidPoint>& mids() const { return mids_; }
  // Every market order in arrival order; the tape alone misses those that found no liquidity.
  const std::vector<MarketSubmission>& market_submissions() const { return market_log_; }
  const ExchangeCounters& counters() const { return counters_; }

  // Last two-sided mid (times two) published at or before t.
  std::optional<Price> mid2x_at(SimTime t) const;

 private:
  void publish(SimTime ts);

  OrderBook book_;
  std::uint64_t next_id_ = 1;
  std::vector<Trade> tape_;
  std::vector<L1Snapshot> l1_log_;
  std::vector<MidPoint> mids_;
  std::vector<MarketSubmission> market_log_;
  ExchangeCounters counters_;
};

struct AgentContext {
  AgentId id{};
  SimTime now = 0;
  Exchange& exchange;
  Rng& rng;
  const PriceSeries* oracle = nullptr;
  ObservationNoise noise{};
};

class Agent {
 public:
  virtual ~Agent() = default;
  virtual void wakeup(AgentContext& ctx) = 0;
  // Delay until the next wakeup; agents reschedule themselves after each one.
  virtual SimTime next_delay(Rng& rng) = 0;
  virtual std::string_view kind() const = 0;
};

// Exponential inter-arrival for a Poisson process of the given rate (per second),
// in whole nanoseconds and never less than 1.
SimTime next_poisson_wakeup(double rate_per_second, Rng& rng);

struct RunStats {
  std::uint64_t events = 0;
  std::uint64_t wakeups = 0;
  std::uint64_t trades = 0;
  SimTime first_event = 0;
  SimTime last_event = 0;
  SimTime session_end = 0;
};

// Single-threaded discrete-event loop. A run is a pure function of the
// registered agents, the oracle and the master seed.
class Simulation {
 public:
  using EventHook = std::function<void(const Event&, const Simulation&)>;

  explicit Simulation(std::uint64_t master_seed) : master_seed_(master_seed) {}

  // Agent ids are assigned 1, 2, ... in registration order; the first wakeup is
  // drawn from the agent's own stream.
  AgentId add_agent(std::unique_ptr<Agent> agent);

  void set_oracle(std::shared_ptr<const PriceSeries> series, ObservationNoise noise);
  const PriceSeries* oracle() const { return oracle_.get(); }
  const std::shared_ptr<const PriceSeries>& oracle_series() const { return oracle_; }

  void schedule(SimTime time, AgentId agent, EventKind kind = EventKind::Wakeup);

  // Dispatches every event with time <= end, stopping early at a SessionEnd.
  RunStats run_until(SimTime end);

  void set_event_hook(EventHook hook) { hook_ = std::move(hook); }

  SimTime now() const { return queue_.now(); }
  Exchange& exchange() { return exchange_; }
  const Exchange& exchange() const { return exchange_; }
  const RunStats& stats() const { return stats_; }
  std::size_t agent_count() const { return agents_.size(); }
  const Agent& agent(AgentId id) const { return *agents_.at(to_int(id) - 1).agent; }

 private:
  struct Slot {
    std::unique_ptr<Agent> agent;
    Rng rng;
  };

  std::uint64_t master_seed_;
  EventQueue queue_;
  Exchange exchange_;
  std::vector<Slot> agents_;
  std::shared_ptr<const PriceSeries> oracle_;
  ObservationNoise noise_{};
  EventHook hook_;
  RunStats stats_;
  bool ended_ = false;
};

}  // namespace primesim
