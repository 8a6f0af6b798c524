#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "primesim/impact_stats.hpp"

namespace primesim::impact {

namespace {

struct OriginFit {
  double k = 0.0;
  double sse = 0.0;
};

// Closed-form k of y = k*f for a fixed delta.
OriginFit fit_for_delta(std::span<const AdjustedSample> samples, double delta) {
  double fy = 0.0, ff = 0.0, yy = 0.0;
  for (const auto& s : samples) {
    const double f = signed_power(s.q, delta);
    fy += f * s.y;
    ff += f * f;
    yy += s.y * s.y;
  }
  const double k = fy / ff;
  return {k, std::max(0.0, yy - k * fy)};
}

std::vector<std::size_t> order_by_key(std::span<const double> keys) {
  std::vector<std::size_t> idx(keys.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::stable_sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return keys[a] < keys[b]; });
  return idx;
}

void finish_bucket(Bucket& b, double sum_y2) {
  if (b.count == 0) {
    b.mean_key = b.mean_q = b.mean_y = std::numeric_limits<double>::quiet_NaN();
    return;
  }
  const double n = static_cast<double>(b.count);
  b.mean_key /= n;
  b.mean_q /= n;
  const double sum_y = b.mean_y;
  b.mean_y = sum_y / n;
  if (b.count > 1) {
    const double var = std::max(0.0, (sum_y2 - sum_y * sum_y / n) / (n - 1.0));
    b.se_y = std::sqrt(var / n);
  }
}

}  // namespace

DeltaFit fit_delta(std::span<const AdjustedSample> samples, double lo, double hi) {
  if (samples.size() < 100) throw std::invalid_argument("fit_delta: need at least 100 samples");
  if (!(lo > 0 && lo < hi)) throw std::invalid_argument("fit_delta: bad delta range");
  if (std::all_of(samples.begin(), samples.end(), [](const AdjustedSample& s) { return s.q == 0.0; })) {
    throw NumericalError("fit_delta: all order sizes are zero");
  }

  // A coarse scan picks the basin; golden-section then narrows it.
  constexpr int kGrid = 56;
  const double step = (hi - lo) / kGrid;
  int best = 0;
  double best_sse = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= kGrid; ++i) {
    const double sse = fit_for_delta(samples, lo + i * step).sse;
    if (sse < best_sse) {
      best_sse = sse;
      best = i;
    }
  }
  double a = lo + std::max(0, best - 1) * step;
  double b = lo + std::min(kGrid, best + 1) * step;

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = fit_for_delta(samples, c).sse;
  double fd = fit_for_delta(samples, d).sse;
  while (b - a >= 1e-4) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = fit_for_delta(samples, c).sse;
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = fit_for_delta(samples, d).sse;
    }
  }
  const double delta = (a + b) / 2.0;
  const OriginFit fit = fit_for_delta(samples, delta);
  return {delta, fit.k, fit.sse};
}

BucketStats bucket_means(std::span<const AdjustedSample> samples, std::size_t n_buckets, std::optional<double> delta) {
  if (n_buckets == 0) throw std::invalid_argument("bucket_means: need at least one bucket");
  if (samples.size() < n_buckets) throw std::invalid_argument("bucket_means: fewer samples than buckets");
  std::vector<double> keys(samples.size());
  for (std::size_t i = 0; i < samples.size(); ++i) {
    keys[i] = delta ? signed_power(samples[i].q, *delta) : samples[i].q;
  }
  const auto order = order_by_key(keys);
  const std::size_t n = samples.size();
  BucketStats out;
  out.buckets.resize(n_buckets);
  for (std::size_t b = 0; b < n_buckets; ++b) {
    const std::size_t from = b * n / n_buckets;
    const std::size_t to = (b + 1) * n / n_buckets;
    Bucket& bucket = out.buckets[b];
    double sum_y2 = 0.0;
    bucket.key_lo = keys[order[from]];
    bucket.key_hi = keys[order[to - 1]];
    for (std::size_t r = from; r < to; ++r) {
      const auto& s = samples[order[r]];
      bucket.mean_key += keys[order[r]];
      bucket.mean_q += s.q;
      bucket.mean_y += s.y;
      sum_y2 += s.y * s.y;
    }
    bucket.count = to - from;
    finish_bucket(bucket, sum_y2);
  }
  return out;
}

SplitBuckets split_by_previous_sign(std::span<const AdjustedSample> samples, std::size_t n_buckets,
                                    std::optional<double> delta) {
  std::vector<AdjustedSample> signed_samples;
  for (const auto& s : samples) {
    if (s.prev_sign != 0) signed_samples.push_back(s);
  }
  const bool any_buy = std::any_of(signed_samples.begin(), signed_samples.end(),
                                   [](const AdjustedSample& s) { return s.prev_sign > 0; });
  const bool any_sell = std::any_of(signed_samples.begin(), signed_samples.end(),
                                    [](const AdjustedSample& s) { return s.prev_sign < 0; });
  if (!any_buy || !any_sell) throw std::invalid_argument("split_by_previous_sign: a previous-sign group is empty");
  if (n_buckets == 0 || signed_samples.size() < n_buckets) {
    throw std::invalid_argument("split_by_previous_sign: fewer samples than buckets");
  }

  std::vector<double> keys(signed_samples.size());
  for (std::size_t i = 0; i < signed_samples.size(); ++i) {
    keys[i] = delta ? signed_power(signed_samples[i].q, *delta) : signed_samples[i].q;
  }
  const auto order = order_by_key(keys);
  const std::size_t n = signed_samples.size();
  SplitBuckets out;
  out.prev_buy.buckets.resize(n_buckets);
  out.prev_sell.buckets.resize(n_buckets);
  for (std::size_t b = 0; b < n_buckets; ++b) {
    const std::size_t from = b * n / n_buckets;
    const std::size_t to = (b + 1) * n / n_buckets;
    double y2_buy = 0.0, y2_sell = 0.0;
    for (Bucket* bucket : {&out.prev_buy.buckets[b], &out.prev_sell.buckets[b]}) {
      bucket->key_lo = keys[order[from]];
      bucket->key_hi = keys[order[to - 1]];
    }
    for (std::size_t r = from; r < to; ++r) {
      const auto& s = signed_samples[order[r]];
      Bucket& bucket = s.prev_sign > 0 ? out.prev_buy.buckets[b] : out.prev_sell.buckets[b];
      (s.prev_sign > 0 ? y2_buy : y2_sell) += s.y * s.y;
      bucket.mean_key += keys[order[r]];
      bucket.mean_q += s.q;
      bucket.mean_y += s.y;
      ++bucket.count;
    }
    finish_bucket(out.prev_buy.buckets[b], y2_buy);
    finish_bucket(out.prev_sell.buckets[b], y2_sell);
  }
  return out;
}

PowerLawFit fit_power_law(std::span<const double> values) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] > 0.0 && std::isfinite(values[i])) {
      lx.push_back(std::log(static_cast<double>(i + 1)));
      ly.push_back(std::log(values[i]));
    }
  }
  if (lx.size() < 5) throw NumericalError("fit_power_law: fewer than five positive values");
  const double n = static_cast<double>(lx.size());
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / n;
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  const double ss_res = std::max(0.0, syy - slope * sxy);
  PowerLawFit fit;
  fit.alpha = -slope;
  fit.c = std::exp(intercept);
  fit.r2 = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  fit.points = lx.size();
  return fit;
}

}  // namespace primesim::impact
