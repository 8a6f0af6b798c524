#include "primesim/order_book.hpp"

#include <stdexcept>

namespace primesim {

template <class Levels>
bool OrderBook::crossable(const Levels& levels, Price limit) {
  if (levels.empty()) return false;
  const Price best = levels.begin()->first;
  return levels.key_comp()(best, limit) || best == limit;
}

template <class Levels>
Qty OrderBook::match_against(Levels& levels, AgentId taker, Side aggressor, Qty qty,
                             std::optional<Price> limit, SimTime ts, std::vector<Trade>& out) {
  auto level_it = levels.begin();
  while (qty > 0 && level_it != levels.end()) {
    const Price px = level_it->first;
    if (limit && !(levels.key_comp()(px, *limit) || px == *limit)) break;
    Level& level = level_it->second;
    for (auto it = level.queue.begin(); qty > 0 && it != level.queue.end();) {
      if (it->agent == taker) {
        ++it;
        continue;
      }
      const Qty fill = std::min(qty, it->qty);
      out.push_back(Trade{ts, px, fill, aggressor, it->id, taker});
      qty -= fill;
      it->qty -= fill;
      level.total -= fill;
      if (it->qty == 0) {
        index_.erase(it->id);
        it = level.queue.erase(it);
      } else {
        ++it;
      }
    }
    if (level.queue.empty()) {
      level_it = levels.erase(level_it);
    } else {
      ++level_it;
    }
  }
  return qty;
}

SubmitResult OrderBook::submit_limit(const LimitOrder& order) {
  if (order.qty <= 0) throw std::invalid_argument("submit_limit: qty must be positive");
  if (order.price < 1) throw std::invalid_argument("submit_limit: price must be >= 1 tick");
  if (index_.contains(order.id)) throw std::invalid_argument("submit_limit: duplicate order id");

  SubmitResult result;
  Qty remaining = order.qty;
  bool still_crosses = false;
  if (order.side == Side::Bid) {
    remaining = match_against(asks_, order.agent, Side::Bid, remaining, order.price, order.ts, result.trades);
    still_crosses = crossable(asks_, order.price);
  } else {
    remaining = match_against(bids_, order.agent, Side::Ask, remaining, order.price, order.ts, result.trades);
    still_crosses = crossable(bids_, order.price);
  }
  if (remaining == 0) return result;
  if (still_crosses) {
    result.self_cross_discarded = remaining;
    return result;
  }

  LimitOrder resting = order;
  resting.qty = remaining;
  auto rest_in = [&](auto& levels) {
    Level& level = levels[order.price];
    level.queue.push_back(resting);
    level.total += remaining;
    index_.emplace(order.id, Locator{order.side, order.price, std::prev(level.queue.end())});
  };
  if (order.side == Side::Bid) {
    rest_in(bids_);
  } else {
    rest_in(asks_);
  }
  result.rested = remaining;
  return result;
}

MarketResult OrderBook::submit_market(AgentId agent, Side side, Qty qty, SimTime ts) {
  if (qty <= 0) throw std::invalid_argument("submit_market: qty must be positive");
  MarketResult result;
  if (side == Side::Bid) {
    result.no_liquidity = asks_.empty();
    result.unfilled = match_against(asks_, agent, Side::Bid, qty, std::nullopt, ts, result.trades);
  } else {
    result.no_liquidity = bids_.empty();
    result.unfilled = match_against(bids_, agent, Side::Ask, qty, std::nullopt, ts, result.trades);
  }
  return result;
}

std::optional<LimitOrder> OrderBook::cancel(OrderId id) {
  auto found = index_.find(id);
  if (found == index_.end()) return std::nullopt;
  const Locator loc = found->second;
  LimitOrder removed = *loc.it;
  auto drop = [&](auto& levels) {
    auto level_it = levels.find(loc.price);
    level_it->second.total -= removed.qty;
    level_it->second.queue.erase(loc.it);
    if (level_it->second.queue.empty()) levels.erase(level_it);
  };
  if (loc.side == Side::Bid) {
    drop(bids_);
  } else {
    drop(asks_);
  }
  index_.erase(found);
  return removed;
}

L1Snapshot OrderBook::l1(SimTime ts) const {
  L1Snapshot snap;
  snap.ts = ts;
  if (!bids_.empty()) snap.best_bid = bids_.begin()->first;
  if (!asks_.empty()) snap.best_ask = asks_.begin()->first;
  return snap;
}

OrderId OrderBook::seed_linear_book(Price start, Price half_width, Qty slope, OrderId first_id, SimTime ts) {
  if (!empty()) throw std::logic_error("seed_linear_book: book is not empty");
  if (half_width < 1 || slope < 1) throw std::invalid_argument("seed_linear_book: half_width and slope must be >= 1");
  if (start - half_width < 1) throw std::invalid_argument("seed_linear_book: bid levels would fall below 1 tick");
  std::uint64_t id = to_int(first_id);
  for (Price d = 1; d <= half_width; ++d) {
    submit_limit(LimitOrder{OrderId{id++}, kSeederAgent, Side::Bid, start - d, slope * d, ts});
    submit_limit(LimitOrder{OrderId{id++}, kSeederAgent, Side::Ask, start + d, slope * d, ts});
  }
  return OrderId{id};
}

const LimitOrder* OrderBook::find(OrderId id) const {
  auto found = index_.find(id);
  return found == index_.end() ? nullptr : &*found->second.it;
}

Qty OrderBook::depth(Side side) const {
  Qty total = 0;
  auto add = [&](const auto& levels) {
    for (const auto& [px, level] : levels) total += level.total;
  };
  if (side == Side::Bid) {
    add(bids_);
  } else {
    add(asks_);
  }
  return total;
}

Qty OrderBook::qty_at(Side side, Price price) const {
  if (side == Side::Bid) {
    auto it = bids_.find(price);
    return it == bids_.end() ? 0 : it->second.total;
  }
  auto it = asks_.find(price);
  return it == asks_.end() ? 0 : it->second.total;
}

std::vector<PriceLevelView> OrderBook::levels(Side side) const {
  std::vector<PriceLevelView> out;
  auto collect = [&](const auto& levels) {
    for (const auto& [px, level] : levels) out.push_back({px, level.total, level.queue.size()});
  };
  if (side == Side::Bid) {
    collect(bids_);
  } else {
    collect(asks_);
  }
  return out;
}

std::vector<LimitOrder> OrderBook::orders(Side side) const {
  std::vector<LimitOrder> out;
  auto collect = [&](const auto& levels) {
    for (const auto& [px, level] : levels) out.insert(out.end(), level.queue.begin(), level.queue.end());
  };
  if (side == Side::Bid) {
    collect(bids_);
  } else {
    collect(asks_);
  }
  return out;
}

}  // namespace primesim
