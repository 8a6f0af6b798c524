#include <algorithm>
#include <limits>
#include <stdexcept>

#include "primesim/impact_stats.hpp"

namespace primesim::impact {

namespace {

SimTime floor_to(SimTime t, SimTime w) {
  SimTime q = t / w;
  if (t % w != 0 && t < 0) --q;
  return q * w;
}

}  // namespace

std::vector<Window> resample(std::span<const Trade> trades, std::span<const L1Snapshot> quotes,
                             const ResampleOptions& options) {
  const SimTime w = options.window;
  if (w <= 0) throw std::invalid_argument("resample: window length must be positive");
  if (trades.empty() && quotes.empty()) return {};
  if (!std::is_sorted(trades.begin(), trades.end(), [](const Trade& a, const Trade& b) { return a.ts < b.ts; }) ||
      !std::is_sorted(quotes.begin(), quotes.end(),
                      [](const L1Snapshot& a, const L1Snapshot& b) { return a.ts < b.ts; })) {
    throw DataError("resample: trades and quotes must be time-sorted");
  }

  SimTime first = std::numeric_limits<SimTime>::max();
  SimTime last = std::numeric_limits<SimTime>::min();
  if (!trades.empty()) {
    first = std::min(first, trades.front().ts);
    last = std::max(last, trades.back().ts);
  }
  if (!quotes.empty()) {
    first = std::min(first, quotes.front().ts);
    last = std::max(last, quotes.back().ts);
  }
  const SimTime start = options.start.value_or(floor_to(first, w));
  const SimTime end = options.end.value_or(start + ((last - start) / w) * w);
  if (end - start < w) return {};
  const std::int64_t count = (end - start) / w;

  std::vector<Window> out;
  out.reserve(static_cast<std::size_t>(count));
  std::size_t qi = 0, ti = 0;
  std::optional<Price> mid;
  auto advance_quotes = [&](SimTime before) {
    for (; qi < quotes.size() && quotes[qi].ts < before; ++qi) {
      if (auto m = quotes[qi].mid2x()) mid = *m;
    }
  };
  while (ti < trades.size() && trades[ti].ts < start) ++ti;

  for (std::int64_t i = 0; i < count; ++i) {
    const SimTime a = start + i * w;
    const SimTime b = a + w;
    advance_quotes(a);
    const std::optional<Price> open = mid;
    Window win;
    win.index = i;
    win.start = a;
    for (; ti < trades.size() && trades[ti].ts < b; ++ti) {
      const Qty q = trades[ti].qty;
      win.net += trades[ti].aggressor == Side::Bid ? q : -q;
      win.gross += q;
    }
    advance_quotes(b);
    if (!open) continue;
    win.open_mid2x = *open;
    win.close_mid2x = *mid;
    out.push_back(win);
  }
  return out;
}

}  // namespace primesim::impact
