#include <cmath>
#include <limits>
#include <stdexcept>

#include "primesim/kernels.hpp"

namespace primesim::kernels {

namespace detail {

double mean_of(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v;
  return s / static_cast<double>(x.size());
}

double lag_sum(std::span<const double> x, double mean, std::size_t lag) {
  double s = 0.0;
  const std::size_t n = x.size();
  for (std::size_t t = 0; t + lag < n; ++t) s += (x[t] - mean) * (x[t + lag] - mean);
  return s;
}

double std_from_sums(double s1, double s2, std::size_t n) {
  const double dn = static_cast<double>(n);
  const double var = (s2 - s1 * s1 / dn) / (dn - 1.0);
  return var > 0.0 ? std::sqrt(var) : 0.0;
}

void check_gram_rows(std::span<const double> x, std::span<const double> y, std::size_t max_lag,
                     std::span<const std::size_t> rows) {
  if (x.size() != y.size()) throw std::invalid_argument("lagged_gram: x and y differ in length");
  for (std::size_t t : rows) {
    if (t < max_lag || t >= x.size()) throw std::invalid_argument("lagged_gram: row out of range");
  }
}

}  // namespace detail

namespace serial {

std::vector<double> acf(std::span<const double> x, std::size_t max_lag) {
  if (x.size() <= max_lag) throw std::invalid_argument("acf: series shorter than max_lag");
  const double mean = detail::mean_of(x);
  const double c0 = detail::lag_sum(x, mean, 0);
  if (!(c0 > 0.0)) return {};
  std::vector<double> out(max_lag);
  for (std::size_t lag = 1; lag <= max_lag; ++lag) out[lag - 1] = detail::lag_sum(x, mean, lag) / c0;
  return out;
}

LaggedGram lagged_gram(std::span<const double> x, std::span<const double> y, std::size_t max_lag,
                       std::span<const std::size_t> rows) {
  detail::check_gram_rows(x, y, max_lag, rows);
  const std::size_t p = max_lag + 1;
  LaggedGram out{std::vector<double>(p * p, 0.0), std::vector<double>(p, 0.0)};
  for (std::size_t t : rows) {
    for (std::size_t i = 0; i < p; ++i) {
      const double xi = x[t - i];
      out.rhs[i] += xi * y[t];
      for (std::size_t j = i; j < p; ++j) out.gram[i * p + j] += xi * x[t - j];
    }
  }
  for (std::size_t i = 0; i < p; ++i) {
    for (std::size_t j = 0; j < i; ++j) out.gram[i * p + j] = out.gram[j * p + i];
  }
  return out;
}

std::vector<double> trailing_std(std::span<const double> v, std::size_t horizon) {
  std::vector<double> out(v.size(), std::numeric_limits<double>::quiet_NaN());
  double s1 = 0.0, s2 = 0.0;
  std::size_t n = 0;
  for (std::size_t t = 0; t < v.size(); ++t) {
    if (n >= 2) out[t] = detail::std_from_sums(s1, s2, n);
    // Slide the window forward to cover v[t-n'+1 .. t] for the next step.
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
  return out;
}

std::vector<double> trailing_linear_weighted_mean(std::span<const double> v, std::size_t horizon) {
  std::vector<double> out(v.size(), std::numeric_limits<double>::quiet_NaN());
  // plain = sum of the slice, weighted = sum of i * slice[i] with i = 1..n.
  double plain = 0.0, weighted = 0.0;
  std::size_t n = 0;
  for (std::size_t t = 0; t < v.size(); ++t) {
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
  return out;
}

}  // namespace serial
}  // namespace primesim::kernels
