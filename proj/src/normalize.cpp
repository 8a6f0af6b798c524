#include <cmath>
#include <stdexcept>

#include "primesim/impact_stats.hpp"

namespace primesim::impact {

std::vector<double> rolling_volatility(std::span<const Window> windows, std::size_t horizon, Backend backend) {
  if (horizon < 2) throw std::invalid_argument("rolling_volatility: horizon must cover at least two windows");
  std::vector<double> dp(windows.size());
  for (std::size_t i = 0; i < windows.size(); ++i) dp[i] = windows[i].dp();
  return kernels::trailing_std(dp, horizon, backend);
}

std::vector<double> weighted_volume(std::span<const Window> windows, std::size_t horizon, Backend backend) {
  if (horizon < 1) throw std::invalid_argument("weighted_volume: horizon must cover at least one window");
  std::vector<double> gross(windows.size());
  for (std::size_t i = 0; i < windows.size(); ++i) gross[i] = static_cast<double>(windows[i].gross);
  return kernels::trailing_linear_weighted_mean(gross, horizon, backend);
}

Adjusted adjust(std::span<const Window> windows, std::span<const double> sigma, std::span<const double> volume) {
  if (sigma.size() != windows.size() || volume.size() != windows.size()) {
    throw std::invalid_argument("adjust: normalisers must match the window count");
  }
  Adjusted out;
  out.samples.reserve(windows.size());
  for (std::size_t t = 0; t < windows.size(); ++t) {
    const double s = sigma[t];
    const double v = volume[t];
    if (!std::isfinite(s) || !std::isfinite(v) || s <= 0.0 || v <= 0.0) {
      ++out.skipped;
      continue;
    }
    int prev = 0;
    if (t > 0 && windows[t - 1].index + 1 == windows[t].index) {
      const Qty n = windows[t - 1].net;
      prev = (n > 0) - (n < 0);
    }
    out.samples.push_back({windows[t].index, static_cast<double>(windows[t].net) / v, windows[t].dp() / s, prev});
  }
  return out;
}

}  // namespace primesim::impact
