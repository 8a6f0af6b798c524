#pragma once

#include <cstdint>
#include <deque>
#include <optional>
#include <span>
#include <string_view>
#include <variant>
#include <vector>

#include "primesim/oracle.hpp"
#include "primesim/order_book.hpp"
#include "primesim/rng.hpp"
#include "primesim/simulation.hpp"

namespace primesim {

// ---------------------------------------------------------------------------
// Parameters

enum class LimitMode : std::uint8_t { SantaFe, Prime };
enum class MarketMode : std::uint8_t { SantaFe, Darp, Prime };
enum class TechnicalKind : std::uint8_t { TrendFollow, MeanRevert };

struct ZiLimitParams {
  double rate = 1.0;  // wakeups per second
  double p_cancel = 0.5;
  LimitMode mode = LimitMode::SantaFe;
  Price band_low = 1;     // Santa-Fe valuation band
  Price band_high = 100;
  Price half_width = 50;  // Prime valuation offset range around the mid
  Qty size = 1;
};

struct DarpParams {
  double p = 0.9;      // copy probability
  double gamma = 1.5;  // parent-lag weights are l^((gamma-3)/2)
  int n = 50;          // history length
  // Copy with probability 1-p, as the branch is literally written in the
  // original pseudocode. Off by default.
  bool literal_pseudocode = false;
};

struct ZiMarketParams {
  double rate = 1.0;
  Qty size = 1;
  MarketMode mode = MarketMode::SantaFe;
  DarpParams darp{};
};

struct TechnicalParams {
  TechnicalKind kind = TechnicalKind::TrendFollow;
  double lookback_seconds = 30.0;
  Price threshold = 0;  // ticks
  double rate = 1.0;
  Qty size = 1;
};

struct PrimeCensus {
  int zi_limit = 1000;
  int zi_market = 30;
  int trend = 10;
  int mean_revert = 10;

  friend bool operator==(const PrimeCensus&, const PrimeCensus&) = default;
};

void validate(const ZiLimitParams& p);
void validate(const ZiMarketParams& p);
void validate(const DarpParams& p);
void validate(const TechnicalParams& p);

// ---------------------------------------------------------------------------
// Decisions. Each policy is a pure function of what the agent can see plus
// its own random stream; the agent classes below apply the result.

struct Skip {
  friend bool operator==(const Skip&, const Skip&) = default;
};
struct CancelOrder {
  OrderId id{};
  friend bool operator==(const CancelOrder&, const CancelOrder&) = default;
};
struct PlaceLimit {
  Side side = Side::Bid;
  Price price = 0;
  Qty qty = 0;
  friend bool operator==(const PlaceLimit&, const PlaceLimit&) = default;
};
struct PlaceMarket {
  Side side = Side::Bid;
  Qty qty = 0;
  friend bool operator==(const PlaceMarket&, const PlaceMarket&) = default;
};
using Action = std::variant<Skip, CancelOrder, PlaceLimit, PlaceMarket>;

// With probability p_cancel cancel the oldest of `own_resting` (oldest first);
// otherwise draw a valuation V and bid at V if V < mid, else offer at V.
// Santa-Fe valuations are U{band_low..band_high}; with a one-sided or empty
// book the band centre stands in for the mid. Prime valuations are the
// rounded mid plus U{-W..W}\{0} and need a two-sided book.
Action zi_limit_decide(const ZiLimitParams& params, const L1Snapshot& quotes,
                       std::span<const OrderId> own_resting, Rng& rng);

// Fair-coin market order.
Action zi_market_decide(const ZiMarketParams& params, Rng& rng);

// Discrete autoregressive sign process over a binary history m_1..m_n,
// m_1 being the most recent sign.
class DarpProcess {
 public:
  // History starts as n fair binary draws from `rng`.
  DarpProcess(const DarpParams& params, Rng& rng);
  // Explicit initial history, most recent first.
  DarpProcess(const DarpParams& params, std::vector<std::uint8_t> history);

  // Draws the parent lag, copies or flips it, pushes the result to the front
  // and returns it (1 = buy, 0 = sell).
  std::uint8_t next(Rng& rng);

  // Parent lag l in 1..n drawn with weight l^((gamma-3)/2).
  int draw_parent(Rng& rng) const;

  // m_l for l in 1..n.
  std::uint8_t history(int lag) const;
  std::vector<std::uint8_t> history() const;
  const DarpParams& params() const { return params_; }
  const std::vector<double>& cumulative_weights() const { return cumulative_; }

 private:
  void build_weights();

  DarpParams params_;
  std::vector<std::uint8_t> ring_;
  std::size_t head_ = 0;
  std::vector<double> cumulative_;
};

Action darp_market_decide(DarpProcess& process, Qty size, Rng& rng);

// Fundamental market order: compare a noisy oracle observation F with the
// mid; buy when F > mid, sell when F < mid, fair coin on a tie or without a mid.
Action prime_market_decide(const ZiMarketParams& params, std::optional<Price> mid2x,
                           const PriceSeries& oracle, SimTime now, ObservationNoise noise, Rng& rng);

// Delta = mid(now) - mid(now - lookback). Trend followers buy when Delta > threshold
// and sell when Delta < -threshold; mean reverters do the opposite. Missing
// history or a move inside the dead zone skips.
Action technical_decide(const TechnicalParams& params, std::optional<Price> mid2x_now,
                        std::optional<Price> mid2x_past);

// ---------------------------------------------------------------------------
// Agents

class ZiLimitAgent final : public Agent {
 public:
  explicit ZiLimitAgent(ZiLimitParams params);
  void wakeup(AgentContext& ctx) override;
  SimTime next_delay(Rng& rng) override { return next_poisson_wakeup(params_.rate, rng); }
  std::string_view kind() const override { return "zi_limit"; }
  const std::deque<OrderId>& own_orders() const { return own_; }

 private:
  ZiLimitParams params_;
  std::deque<OrderId> own_;
};

class ZiMarketAgent final : public Agent {
 public:
  explicit ZiMarketAgent(ZiMarketParams params);
  void wakeup(AgentContext& ctx) override;
  SimTime next_delay(Rng& rng) override { return next_poisson_wakeup(params_.rate, rng); }
  std::string_view kind() const override;

 private:
  ZiMarketParams params_;
  std::optional<DarpProcess> darp_;
};

class TechnicalAgent final : public Agent {
 public:
  explicit TechnicalAgent(TechnicalParams params);
  void wakeup(AgentContext& ctx) override;
  SimTime next_delay(Rng& rng) override { return next_poisson_wakeup(params_.rate, rng); }
  std::string_view kind() const override;

 private:
  TechnicalParams params_;
};

// Applies an action on behalf of `ctx.id`. Returns the new order id for
// resting limit placements.
std::optional<OrderId> apply_action(const Action& action, AgentContext& ctx);

}  // namespace primesim
