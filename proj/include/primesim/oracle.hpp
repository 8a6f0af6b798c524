#pragma once

#include <cstdint>
#include <filesystem>
#include <vector>

#include "primesim/rng.hpp"
#include "primesim/types.hpp"

namespace primesim {

struct PricePoint {
  SimTime time = 0;
  Price price = 0;

  friend bool operator==(const PricePoint&, const PricePoint&) = default;
};

// Exogenous "true price": a right-continuous step function through sorted points.
// Immutable once built.
class PriceSeries {
 public:
  // Throws DataError unless times strictly increase from 0 and prices are >= 1.
  explicit PriceSeries(std::vector<PricePoint> points);

  Price price_at(SimTime t) const;
  const std::vector<PricePoint>& points() const { return points_; }

  friend bool operator==(const PriceSeries&, const PriceSeries&) = default;

 private:
  std::vector<PricePoint> points_;
};

// Symmetric integer observation band: observations are true + U{-half_width..half_width}.
struct ObservationNoise {
  Price half_width = 0;
};

Price true_price_at(const PriceSeries& series, SimTime t);

// Noisy query, clamped to at least one tick.
Price observe(const PriceSeries& series, SimTime t, ObservationNoise noise, Rng& rng);

struct RandomWalkSpec {
  Price start = 1000;
  double sigma = 1.0;  // ticks per step
  SimTime step = 5 * kNanosPerSecond;
  SimTime horizon = 3600 * kNanosPerSecond;
  std::uint64_t seed = 0;
};

PriceSeries constant_series(Price price);

// Steps by round(sigma * N(0,1)) every `step` up to `horizon`; clamped to >= 1.
PriceSeries random_walk_series(const RandomWalkSpec& spec);

// CSV with header `time_ns,price_ticks`.
PriceSeries read_series_csv(const std::filesystem::path& path);
void write_series_csv(const PriceSeries& series, const std::filesystem::path& path);

}  // namespace primesim
