#include "primesim/simulation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace primesim {

Exchange::Placed Exchange::place_limit(AgentId agent, Side side, Price price, Qty qty, SimTime ts) {
  const OrderId id{next_id_};
  Placed placed{id, book_.submit_limit(LimitOrder{id, agent, side, price, qty, ts})};
  ++next_id_;
  ++counters_.limit_orders;
  counters_.submitted_qty += qty;
  counters_.self_cross_discarded_qty += placed.result.self_cross_discarded;
  for (const auto& t : placed.result.trades) counters_.traded_qty += t.qty;
  tape_.insert(tape_.end(), placed.result.trades.begin(), placed.result.trades.end());
  publish(ts);
  return placed;
}

MarketResult Exchange::place_market(AgentId agent, Side side, Qty qty, SimTime ts) {
  MarketResult result = book_.submit_market(agent, side, qty, ts);
  ++counters_.market_orders;
  counters_.submitted_qty += qty;
  counters_.market_unfilled_qty += result.unfilled;
  if (result.no_liquidity) ++counters_.no_liquidity;
  for (const auto& t : result.trades) counters_.traded_qty += t.qty;
  market_log_.push_back({ts, agent, side, qty, qty - result.unfilled});
  tape_.insert(tape_.end(), result.trades.begin(), result.trades.end());
  publish(ts);
  return result;
}

std::optional<LimitOrder> Exchange::cancel(OrderId id, SimTime ts) {
  auto removed = book_.cancel(id);
  if (removed) {
    ++counters_.cancels;
    counters_.cancelled_qty += removed->qty;
    publish(ts);
  } else {
    ++counters_.cancel_misses;
  }
  return removed;
}

void Exchange::seed_linear_book(Price start, Price half_width, Qty slope, SimTime ts) {
  const OrderId next = book_.seed_linear_book(start, half_width, slope, OrderId{next_id_}, ts);
  counters_.submitted_qty += 2 * slope * half_width * (half_width + 1) / 2;
  next_id_ = to_int(next);
  publish(ts);
}

void Exchange::publish(SimTime ts) {
  L1Snapshot snap = book_.l1(ts);
  if (!l1_log_.empty() && l1_log_.back().same_quotes(snap)) return;
  if (l1_log_.empty() && !snap.best_bid && !snap.best_ask) return;
  l1_log_.push_back(snap);
  if (auto m = snap.mid2x()) {
    if (!mids_.empty() && mids_.back().ts == ts) {
      mids_.back().mid2x = *m;
    } else {
      mids_.push_back({ts, *m});
    }
  }
}

std::optional<Price> Exchange::mid2x_at(SimTime t) const {
  auto it = std::upper_bound(mids_.begin(), mids_.end(), t,
                             [](SimTime value, const MidPoint& m) { return value < m.ts; });
  if (it == mids_.begin()) return std::nullopt;
  return std::prev(it)->mid2x;
}

SimTime next_poisson_wakeup(double rate_per_second, Rng& rng) {
  if (!(rate_per_second > 0)) throw std::invalid_argument("next_poisson_wakeup: rate must be positive");
  const double ns = rng.exponential(rate_per_second) * 1e9;
  return std::max<SimTime>(1, std::llround(ns));
}

AgentId Simulation::add_agent(std::unique_ptr<Agent> agent) {
  const AgentId id{static_cast<std::uint32_t>(agents_.size() + 1)};
  agents_.push_back(Slot{std::move(agent), Rng(stream_seed(master_seed_, to_int(id)))});
  Slot& slot = agents_.back();
  schedule(queue_.now() + slot.agent->next_delay(slot.rng), id);
  return id;
}

void Simulation::set_oracle(std::shared_ptr<const PriceSeries> series, ObservationNoise noise) {
  if (noise.half_width < 0) throw std::invalid_argument("observation noise must be >= 0");
  oracle_ = std::move(series);
  noise_ = noise;
}

void Simulation::schedule(SimTime time, AgentId agent, EventKind kind) { queue_.schedule(time, agent, kind); }

RunStats Simulation::run_until(SimTime end) {
  while (!ended_ && !queue_.empty() && queue_.top().time <= end) {
    const Event ev = queue_.pop();
    if (stats_.events == 0) stats_.first_event = ev.time;
    ++stats_.events;
    stats_.last_event = ev.time;
    if (ev.kind == EventKind::SessionEnd) {
      ended_ = true;
      if (hook_) hook_(ev, *this);
      break;
    }
    Slot& slot = agents_.at(to_int(ev.agent) - 1);
    AgentContext ctx{ev.agent, ev.time, exchange_, slot.rng, oracle_.get(), noise_};
    slot.agent->wakeup(ctx);
    ++stats_.wakeups;
    queue_.schedule(ev.time + slot.agent->next_delay(slot.rng), ev.agent);
    if (hook_) hook_(ev, *this);
  }
  stats_.session_end = std::max(stats_.session_end, end);
  stats_.trades = exchange_.tape().size();
  return stats_;
}

}  // namespace primesim
