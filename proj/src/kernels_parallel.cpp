#include <omp.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "primesim/kernels.hpp"

namespace primesim::kernels {

namespace detail {
double mean_of(std::span<const double> x);
double lag_sum(std::span<const double> x, double mean, std::size_t lag);
double std_from_sums(double s1, double s2, std::size_t n);
void check_gram_rows(std::span<const double> x, std::span<const double> y, std::size_t max_lag,
                     std::span<const std::size_t> rows);
}  // namespace detail

namespace parallel {

std::vector<double> acf(std::span<const double> x, std::size_t max_lag) {
  if (x.size() <= max_lag) throw std::invalid_argument("acf: series shorter than max_lag");
  const double mean = detail::mean_of(x);
  const double c0 = detail::lag_sum(x, mean, 0);
  if (!(c0 > 0.0)) return {};
  std::vector<double> out(max_lag);
  const auto lags = static_cast<std::int64_t>(max_lag);
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t lag = 1; lag <= lags; ++lag) {
    out[static_cast<std::size_t>(lag - 1)] = detail::lag_sum(x, mean, static_cast<std::size_t>(lag)) / c0;
  }
  return out;
}

LaggedGram lagged_gram(std::span<const double> x, std::span<const double> y, std::size_t max_lag,
                       std::span<const std::size_t> rows) {
  detail::check_gram_rows(x, y, max_lag, rows);
  const std::size_t p = max_lag + 1;
  LaggedGram out{std::vector<double>(p * p, 0.0), std::vector<double>(p, 0.0)};
  const auto cols = static_cast<std::int64_t>(p);
  // One matrix row per task; every entry still accumulates over rows in order.
#pragma omp parallel for schedule(dynamic, 1)
  for (std::int64_t ii = 0; ii < cols; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    double* g = out.gram.data() + i * p;
    double r = 0.0;
    for (std::size_t t : rows) {
      const double xi = x[t - i];
      r += xi * y[t];
      for (std::size_t j = i; j < p; ++j) g[j] += xi * x[t - j];
    }
    out.rhs[i] = r;
  }
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < i; ++j) out.gram[i * p + j] = out.gram[j * p + i];
  }
  return out;
}

namespace {

// Splits [0, n) into one contiguous chunk per thread and calls f(begin, end).
template <class F>
void for_chunks(std::size_t n, F f) {
#pragma omp parallel
  {
    const auto threads = static_cast<std::size_t>(omp_get_num_threads());
    const auto id = static_cast<std::size_t>(omp_get_thread_num());
    const std::size_t begin = n * id / threads;
    const std::size_t end = n * (id + 1) / threads;
    if (begin < end) f(begin, end);
  }
}

}  // namespace

// Each chunk seeds its running sums from the slice before its first element,
// then slides exactly like the serial loop.
std::vector<double> trailing_std(std::span<const double> v, std::size_t horizon) {
  std::vector<double> out(v.size(), std::numeric_limits<double>::quiet_NaN());
  for_chunks(v.size(), [&](std::size_t begin, std::size_t end) {
    std::size_t n = std::min(horizon, begin);
    double s1 = 0.0, s2 = 0.0;
    for (std::size_t i = begin - n; i < begin; ++i) {
      s1 += v[i];
      s2 += v[i] * v[i];
    }
    for (std::size_t t = begin; t < end; ++t) {
      if (n >= 2) out[t] = detail::std_from_sums(s1, s2, n);
      s1 += v[t];
      s2 += v[t] * v[t];
      ++n;
      if (n > horizon) {
        const double old = v[t + 1 - n];
        s1 -= old;
        s2 -= old * old;
        --n;
      }
    }
  });
  return out;
}

std::vector<double> trailing_linear_weighted_mean(std::span<const double> v, std::size_t horizon) {
  std::vector<double> out(v.size(), std::numeric_limits<double>::quiet_NaN());
  for_chunks(v.size(), [&](std::size_t begin, std::size_t end) {
    std::size_t n = std::min(horizon, begin);
    double plain = 0.0, weighted = 0.0;
    for (std::size_t i = 1; i <= n; ++i) {
      weighted += static_cast<double>(i) * v[begin - n - 1 + i];
      plain += v[begin - n - 1 + i];
    }
    for (std::size_t t = begin; t < end; ++t) {
      if (n >= 1) {
        const double dn = static_cast<double>(n);
        out[t] = weighted / (dn * (dn + 1.0) / 2.0);
      }
      if (n < horizon) {
        ++n;
        weighted += static_cast<double>(n) * v[t];
        plain += v[t];
      } else {
        const double old = v[t - n];
        weighted = weighted - plain + static_cast<double>(n) * v[t];
        plain = plain - old + v[t];
      }
    }
  });
  return out;
}

}  // namespace parallel
}  // namespace primesim::kernels
