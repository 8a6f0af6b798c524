#include "primesim/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>

#include "csv_util.hpp"

namespace primesim {

PriceSeries::PriceSeries(std::vector<PricePoint> points) : points_(std::move(points)) {
  if (points_.empty()) throw DataError("price series is empty");
  if (points_.front().time != 0) throw DataError("price series must start at time 0");
  for (std::size_t i = 0; i < points_.size(); ++i) {
    if (points_[i].price < 1) throw DataError("price series contains a non-positive price");
    if (i > 0 && points_[i].time <= points_[i - 1].time) throw DataError("price series times must strictly increase");
  }
}

Price PriceSeries::price_at(SimTime t) const {
  auto it = std::upper_bound(points_.begin(), points_.end(), t,
                             [](SimTime value, const PricePoint& p) { return value < p.time; });
  // t >= 0 always finds the first point.
  return std::prev(it)->price;
}

Price true_price_at(const PriceSeries& series, SimTime t) {
  if (t < 0) throw std::invalid_argument("true_price_at: negative time");
  return series.price_at(t);
}

Price observe(const PriceSeries& series, SimTime t, ObservationNoise noise, Rng& rng) {
  const Price truth = true_price_at(series, t);
  if (noise.half_width <= 0) return truth;
  return std::max<Price>(1, truth + rng.uniform_int(-noise.half_width, noise.half_width));
}

PriceSeries constant_series(Price price) { return PriceSeries({{0, price}}); }

PriceSeries random_walk_series(const RandomWalkSpec& spec) {
  if (spec.start < 1) throw std::invalid_argument("random walk: start price must be >= 1");
  if (spec.sigma < 0) throw std::invalid_argument("random walk: sigma must be >= 0");
  if (spec.step <= 0 || spec.horizon < 0) throw std::invalid_argument("random walk: bad step or horizon");
  Rng rng(stream_seed(spec.seed, 0x6f7261636c65ULL));
  std::vector<PricePoint> points{{0, spec.start}};
  Price price = spec.start;
  for (SimTime t = spec.step; t <= spec.horizon; t += spec.step) {
    const auto inc = static_cast<Price>(std::llround(spec.sigma * rng.normal()));
    price = std::max<Price>(1, price + inc);
    // Zero-increment steps are folded away so times stay strictly increasing between changes.
    if (price != points.back().price) points.push_back({t, price});
  }
  return PriceSeries(std::move(points));
}

PriceSeries read_series_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open price series file: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw DataError("price series file is empty: " + path.string());
  const auto header = csv::split(csv::trim(line));
  if (header.size() != 2 || csv::trim(header[0]) != "time_ns" || csv::trim(header[1]) != "price_ticks") {
    throw DataError("price series header must be `time_ns,price_ticks`");
  }
  std::vector<PricePoint> points;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (csv::trim(line).empty()) continue;
    const auto fields = csv::split(line);
    std::optional<SimTime> t;
    std::optional<Price> p;
    if (fields.size() == 2) {
      t = csv::parse_int<SimTime>(fields[0]);
      p = csv::parse_int<Price>(fields[1]);
    }
    if (!t || !p) throw DataError("malformed price series row at line " + std::to_string(line_no));
    points.push_back({*t, *p});
  }
  return PriceSeries(std::move(points));
}

void write_series_csv(const PriceSeries& series, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write price series file: " + path.string());
  out << "time_ns,price_ticks\n";
  for (const auto& p : series.points()) out << p.time << ',' << p.price << '\n';
}

}  // namespace primesim
