#pragma once

#include <cstddef>
#include <span>
#include <vector>

// Data-parallel inner loops of the analysis pipeline. Every kernel has a
// serial reference and an OpenMP version with the same contract. acf and
// lagged_gram sum in the same order per output element in both versions and
// agree bit for bit. The trailing-window kernels slide running sums; the
// parallel versions give each thread a contiguous chunk whose sums are seeded
// from the slice before it. They agree exactly whenever the sums are exact,
// which holds for integer and half-integer inputs.
namespace primesim::kernels {

enum class Backend { Serial, Parallel };

// Normal equations of y_t on (x_t, x_{t-1}, ..., x_{t-K}) over the given rows.
// gram is (K+1)x(K+1) row-major, rhs has K+1 entries. Rows must be >= K.
struct LaggedGram {
  std::vector<double> gram;
  std::vector<double> rhs;
};

namespace serial {
// Mean-removed, biased (divide by N) autocorrelation at lags 1..max_lag.
// Empty when the series has zero variance.
std::vector<double> acf(std::span<const double> x, std::size_t max_lag);
LaggedGram lagged_gram(std::span<const double> x, std::span<const double> y, std::size_t max_lag,
                       std::span<const std::size_t> rows);
// out[t] = sample std of v[t-n .. t-1], n = min(horizon, t); NaN when n < 2.
std::vector<double> trailing_std(std::span<const double> v, std::size_t horizon);
// out[t] = sum_i i*v[t-n-1+i] / sum_i i over the same trailing slice; NaN when n < 1.
std::vector<double> trailing_linear_weighted_mean(std::span<const double> v, std::size_t horizon);
}  // namespace serial

namespace parallel {
std::vector<double> acf(std::span<const double> x, std::size_t max_lag);
LaggedGram lagged_gram(std::span<const double> x, std::span<const double> y, std::size_t max_lag,
                       std::span<const std::size_t> rows);
std::vector<double> trailing_std(std::span<const double> v, std::size_t horizon);
std::vector<double> trailing_linear_weighted_mean(std::span<const double> v, std::size_t horizon);
}  // namespace parallel

inline std::vector<double> acf(std::span<const double> x, std::size_t max_lag, Backend b = Backend::Parallel) {
  return b == Backend::Serial ? serial::acf(x, max_lag) : parallel::acf(x, max_lag);
}
inline LaggedGram lagged_gram(std::span<const double> x, std::span<const double> y, std::size_t max_lag,
                              std::span<const std::size_t> rows, Backend b = Backend::Parallel) {
  return b == Backend::Serial ? serial::lagged_gram(x, y, max_lag, rows) : parallel::lagged_gram(x, y, max_lag, rows);
}
inline std::vector<double> trailing_std(std::span<const double> v, std::size_t horizon, Backend b = Backend::Parallel) {
  return b == Backend::Serial ? serial::trailing_std(v, horizon) : parallel::trailing_std(v, horizon);
}
inline std::vector<double> trailing_linear_weighted_mean(std::span<const double> v, std::size_t horizon,
                                                         Backend b = Backend::Parallel) {
  return b == Backend::Serial ? serial::trailing_linear_weighted_mean(v, horizon)
                              : parallel::trailing_linear_weighted_mean(v, horizon);
}

}  // namespace primesim::kernels
