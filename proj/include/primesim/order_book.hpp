#pragma once

#include <cstddef>
#include <functional>
#include <list>
#include <map>
#include <optional>
#include <unordered_map>
#include <vector>

#include "primesim/types.hpp"

namespace primesim {

struct LimitOrder {
  OrderId id{};
  AgentId agent{};
  Side side = Side::Bid;
  Price price = 0;
  Qty qty = 0;
  SimTime ts = 0;

  friend bool operator==(const LimitOrder&, const LimitOrder&) = default;
};

struct Trade {
  SimTime ts = 0;
  Price price = 0;
  Qty qty = 0;
  Side aggressor = Side::Bid;
  OrderId maker_order{};
  AgentId taker_agent{};

  friend bool operator==(const Trade&, const Trade&) = default;
};

struct L1Snapshot {
  SimTime ts = 0;
  std::optional<Price> best_bid;
  std::optional<Price> best_ask;

  bool two_sided() const { return best_bid && best_ask; }
  // Twice the mid-price, so the mid stays integral.
  std::optional<Price> mid2x() const {
    if (!two_sided()) return std::nullopt;
    return *best_bid + *best_ask;
  }
  std::optional<Price> spread() const {
    if (!two_sided()) return std::nullopt;
    return *best_ask - *best_bid;
  }
  bool same_quotes(const L1Snapshot& o) const {
    return best_bid == o.best_bid && best_ask == o.best_ask;
  }
};

struct SubmitResult {
  std::vector<Trade> trades;
  Qty rested = 0;
  // Remainder dropped because resting it would cross the submitter's own orders.
  Qty self_cross_discarded = 0;
};

struct MarketResult {
  std::vector<Trade> trades;
  Qty unfilled = 0;
  bool no_liquidity = false;
};

struct PriceLevelView {
  Price price = 0;
  Qty qty = 0;
  std::size_t orders = 0;
};

// Price-time priority continuous double auction for a single instrument.
//
// Invariants after every public call: the book is never crossed, each price
// level is FIFO, and every resting order is reachable by id. An incoming
// order never trades against resting orders of its own agent; if the only
// liquidity it could still reach is its own, the remainder is dropped.
class OrderBook {
 public:
  // Throws std::invalid_argument on duplicate id, qty <= 0 or price < 1.
  SubmitResult submit_limit(const LimitOrder& order);

  // Unfilled remainder is discarded. Throws std::invalid_argument if qty <= 0.
  MarketResult submit_market(AgentId agent, Side side, Qty qty, SimTime ts);

  std::optional<LimitOrder> cancel(OrderId id);

  L1Snapshot l1(SimTime ts) const;

  // Rests slope*d units at start-d (bid) and start+d (ask) for d = 1..half_width,
  // owned by kSeederAgent, with consecutive ids from first_id. Returns the next
  // free id. Throws std::logic_error on a non-empty book.
  OrderId seed_linear_book(Price start, Price half_width, Qty slope, OrderId first_id, SimTime ts = 0);

  bool contains(OrderId id) const { return index_.contains(id); }
  const LimitOrder* find(OrderId id) const;
  bool empty() const { return index_.empty(); }
  std::size_t order_count() const { return index_.size(); }
  Qty depth(Side side) const;
  Qty qty_at(Side side, Price price) const;

  // Best-first levels of one side.
  std::vector<PriceLevelView> levels(Side side) const;
  // Resting orders of one side in priority order.
  std::vector<LimitOrder> orders(Side side) const;

 private:
  struct Level {
    std::list<LimitOrder> queue;
    Qty total = 0;
  };
  using BidLevels = std::map<Price, Level, std::greater<>>;
  using AskLevels = std::map<Price, Level, std::less<>>;
  struct Locator {
    Side side;
    Price price;
    std::list<LimitOrder>::iterator it;
  };

  template <class Levels>
  Qty match_against(Levels& levels, AgentId taker, Side aggressor, Qty qty,
                    std::optional<Price> limit, SimTime ts, std::vector<Trade>& out);

  template <class Levels>
  static bool crossable(const Levels& levels, Price limit);

  BidLevels bids_;
  AskLevels asks_;
  std::unordered_map<OrderId, Locator> index_;
};

}  // namespace primesim
