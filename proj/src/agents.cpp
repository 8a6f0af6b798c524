#include "primesim/agents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace primesim {

void validate(const ZiLimitParams& p) {
  if (!(p.rate > 0)) throw ConfigError("zi_limit: rate must be positive");
  if (!(p.p_cancel >= 0 && p.p_cancel <= 1)) throw ConfigError("zi_limit: p_cancel must lie in [0,1]");
  if (p.band_low < 1 || p.band_low >= p.band_high) throw ConfigError("zi_limit: need 1 <= band_low < band_high");
  if (p.half_width < 1) throw ConfigError("zi_limit: half_width must be >= 1");
  if (p.size < 1) throw ConfigError("zi_limit: size must be >= 1");
}

void validate(const DarpParams& p) {
  if (!(p.p >= 0 && p.p <= 1)) throw ConfigError("darp: p must lie in [0,1]");
  if (!std::isfinite(p.gamma)) throw ConfigError("darp: gamma must be finite");
  if (p.n < 1) throw ConfigError("darp: n must be >= 1");
}

void validate(const ZiMarketParams& p) {
  if (!(p.rate > 0)) throw ConfigError("zi_market: rate must be positive");
  if (p.size < 1) throw ConfigError("zi_market: size must be >= 1");
  if (p.mode == MarketMode::Darp) validate(p.darp);
}

void validate(const TechnicalParams& p) {
  if (!(p.rate > 0)) throw ConfigError("technical: rate must be positive");
  if (!(p.lookback_seconds > 0)) throw ConfigError("technical: lookback must be positive");
  if (p.threshold < 0) throw ConfigError("technical: threshold must be >= 0");
  if (p.size < 1) throw ConfigError("technical: size must be >= 1");
}

Action zi_limit_decide(const ZiLimitParams& params, const L1Snapshot& quotes,
                       std::span<const OrderId> own_resting, Rng& rng) {
  if (rng.uniform01() < params.p_cancel) {
    if (own_resting.empty()) return Skip{};
    return CancelOrder{own_resting.front()};
  }
  Price value = 0;
  Price ref2x = 0;
  if (params.mode == LimitMode::SantaFe) {
    value = rng.uniform_int(params.band_low, params.band_high);
    ref2x = quotes.mid2x().value_or(params.band_low + params.band_high);
  } else {
    const auto mid2x = quotes.mid2x();
    if (!mid2x) return Skip{};
    ref2x = *mid2x;
    // Draw from {-W..W} without zero.
    Price offset = rng.uniform_int(-params.half_width, params.half_width - 1);
    if (offset >= 0) ++offset;
    // Half-integer mids round to even so the valuation window has no drift.
    Price centre = ref2x / 2;
    if (ref2x % 2 != 0 && centre % 2 != 0) ++centre;
    value = centre + offset;
    if (value < 1) return Skip{};
  }
  const Side side = 2 * value < ref2x ? Side::Bid : Side::Ask;
  return PlaceLimit{side, value, params.size};
}

Action zi_market_decide(const ZiMarketParams& params, Rng& rng) {
  return PlaceMarket{rng.uniform01() <= 0.5 ? Side::Bid : Side::Ask, params.size};
}

DarpProcess::DarpProcess(const DarpParams& params, Rng& rng) : params_(params) {
  validate(params_);
  ring_.resize(static_cast<std::size_t>(params_.n));
  for (auto& m : ring_) m = rng.bernoulli(0.5) ? 1 : 0;
  build_weights();
}

DarpProcess::DarpProcess(const DarpParams& params, std::vector<std::uint8_t> history)
    : params_(params), ring_(std::move(history)) {
  validate(params_);
  if (ring_.size() != static_cast<std::size_t>(params_.n)) throw std::invalid_argument("DarpProcess: history length != n");
  for (auto m : ring_) {
    if (m > 1) throw std::invalid_argument("DarpProcess: history must be binary");
  }
  build_weights();
}

void DarpProcess::build_weights() {
  cumulative_.resize(ring_.size());
  const double exponent = (params_.gamma - 3.0) / 2.0;
  double total = 0.0;
  for (std::size_t l = 1; l <= ring_.size(); ++l) {
    total += std::pow(static_cast<double>(l), exponent);
    cumulative_[l - 1] = total;
  }
  for (auto& c : cumulative_) c /= total;
  cumulative_.back() = 1.0;
}

int DarpProcess::draw_parent(Rng& rng) const {
  const double u = rng.uniform01();
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return static_cast<int>(it - cumulative_.begin()) + 1;
}

std::uint8_t DarpProcess::history(int lag) const {
  const std::size_t n = ring_.size();
  return ring_[(head_ + static_cast<std::size_t>(lag - 1)) % n];
}

std::vector<std::uint8_t> DarpProcess::history() const {
  std::vector<std::uint8_t> out(ring_.size());
  for (std::size_t i = 0; i < ring_.size(); ++i) out[i] = history(static_cast<int>(i) + 1);
  return out;
}

std::uint8_t DarpProcess::next(Rng& rng) {
  const std::uint8_t parent = history(draw_parent(rng));
  const double r = rng.uniform01();
  const bool copy = params_.literal_pseudocode ? (params_.p <= r) : (r < params_.p);
  const std::uint8_t m = copy ? parent : static_cast<std::uint8_t>(1 - parent);
  // Drop m_n and insert m_t as the new m_1.
  const std::size_t n = ring_.size();
  head_ = (head_ + n - 1) % n;
  ring_[head_] = m;
  return m;
}

Action darp_market_decide(DarpProcess& process, Qty size, Rng& rng) {
  return PlaceMarket{process.next(rng) == 1 ? Side::Bid : Side::Ask, size};
}

Action prime_market_decide(const ZiMarketParams& params, std::optional<Price> mid2x,
                           const PriceSeries& oracle, SimTime now, ObservationNoise noise, Rng& rng) {
  const Price fundamental = observe(oracle, now, noise, rng);
  Side side;
  if (!mid2x || 2 * fundamental == *mid2x) {
    side = rng.uniform01() <= 0.5 ? Side::Bid : Side::Ask;
  } else {
    side = 2 * fundamental > *mid2x ? Side::Bid : Side::Ask;
  }
  return PlaceMarket{side, params.size};
}

Action technical_decide(const TechnicalParams& params, std::optional<Price> mid2x_now,
                        std::optional<Price> mid2x_past) {
  if (!mid2x_now || !mid2x_past) return Skip{};
  const Price delta2x = *mid2x_now - *mid2x_past;
  const Price band2x = 2 * params.threshold;
  int direction = 0;
  if (delta2x > band2x) direction = +1;
  if (delta2x < -band2x) direction = -1;
  if (direction == 0) return Skip{};
  if (params.kind == TechnicalKind::MeanRevert) direction = -direction;
  return PlaceMarket{direction > 0 ? Side::Bid : Side::Ask, params.size};
}

std::optional<OrderId> apply_action(const Action& action, AgentContext& ctx) {
  if (const auto* cancel = std::get_if<CancelOrder>(&action)) {
    ctx.exchange.cancel(cancel->id, ctx.now);
  } else if (const auto* limit = std::get_if<PlaceLimit>(&action)) {
    auto placed = ctx.exchange.place_limit(ctx.id, limit->side, limit->price, limit->qty, ctx.now);
    if (placed.result.rested > 0) return placed.id;
  } else if (const auto* market = std::get_if<PlaceMarket>(&action)) {
    ctx.exchange.place_market(ctx.id, market->side, market->qty, ctx.now);
  }
  return std::nullopt;
}

ZiLimitAgent::ZiLimitAgent(ZiLimitParams params) : params_(params) { validate(params_); }

void ZiLimitAgent::wakeup(AgentContext& ctx) {
  const OrderBook& book = ctx.exchange.book();
  while (!own_.empty() && !book.contains(own_.front())) own_.pop_front();
  const std::vector<OrderId> resting(own_.begin(), own_.end());
  const Action action = zi_limit_decide(params_, book.l1(ctx.now), resting, ctx.rng);
  if (const auto* cancel = std::get_if<CancelOrder>(&action)) {
    own_.erase(std::find(own_.begin(), own_.end(), cancel->id));
  }
  if (auto id = apply_action(action, ctx)) own_.push_back(*id);
}

ZiMarketAgent::ZiMarketAgent(ZiMarketParams params) : params_(params) { validate(params_); }

std::string_view ZiMarketAgent::kind() const {
  switch (params_.mode) {
    case MarketMode::SantaFe: return "zi_market";
    case MarketMode::Darp: return "darp_market";
    case MarketMode::Prime: return "prime_market";
  }
  return "zi_market";
}

void ZiMarketAgent::wakeup(AgentContext& ctx) {
  Action action;
  switch (params_.mode) {
    case MarketMode::SantaFe:
      action = zi_market_decide(params_, ctx.rng);
      break;
    case MarketMode::Darp:
      if (!darp_) darp_.emplace(params_.darp, ctx.rng);
      action = darp_market_decide(*darp_, params_.size, ctx.rng);
      break;
    case MarketMode::Prime:
      if (ctx.oracle == nullptr) throw std::logic_error("prime market agent requires an oracle");
      action = prime_market_decide(params_, ctx.exchange.book().l1(ctx.now).mid2x(), *ctx.oracle, ctx.now,
                                   ctx.noise, ctx.rng);
      break;
  }
  apply_action(action, ctx);
}

TechnicalAgent::TechnicalAgent(TechnicalParams params) : params_(params) { validate(params_); }

std::string_view TechnicalAgent::kind() const {
  return params_.kind == TechnicalKind::TrendFollow ? "trend" : "mean_revert";
}

void TechnicalAgent::wakeup(AgentContext& ctx) {
  const SimTime past = ctx.now - seconds(params_.lookback_seconds);
  std::optional<Price> mid_past;
  if (past >= 0) mid_past = ctx.exchange.mid2x_at(past);
  const auto mid_now = ctx.exchange.book().l1(ctx.now).mid2x();
  apply_action(technical_decide(params_, mid_now, mid_past), ctx);
}

}  // namespace primesim
