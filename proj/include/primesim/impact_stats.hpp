#pragma once

#include <cmath>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "primesim/agents.hpp"
#include "primesim/kernels.hpp"
#include "primesim/order_book.hpp"
#include "primesim/types.hpp"

// Market-impact measurement pipeline. Everything here is a pure function of
// its inputs, so the same code runs on exchange dumps and simulator logs.
namespace primesim::impact {

using kernels::Backend;

// ---------------------------------------------------------------------------
// Resampling

struct Window {
  std::int64_t index = 0;  // position on the window grid from the session start
  SimTime start = 0;
  Price open_mid2x = 0;
  Price close_mid2x = 0;
  Qty net = 0;    // buys - sells, by aggressor
  Qty gross = 0;  // buys + sells

  double dp() const { return static_cast<double>(close_mid2x - open_mid2x) / 2.0; }
  friend bool operator==(const Window&, const Window&) = default;
};

struct ResampleOptions {
  SimTime window = 5 * kNanosPerSecond;
  // Session bounds; by default the grid starts at the first record (floored to
  // the window length) and ends after the last full window before the last record.
  std::optional<SimTime> start;
  std::optional<SimTime> end;
};

// Windows are [start + i*w, start + (i+1)*w). The open mid is the last
// two-sided quote strictly before the window, the close mid the last one
// strictly before its end; mids carry forward through quiet windows and
// across one-sided quotes. Windows with no two-sided quote before them are
// dropped, so the result is contiguous.
std::vector<Window> resample(std::span<const Trade> trades, std::span<const L1Snapshot> quotes,
                             const ResampleOptions& options = {});

// ---------------------------------------------------------------------------
// Normalisation

// Sample standard deviation of dp over the trailing `horizon` windows,
// excluding the current one. NaN where fewer than two windows precede.
std::vector<double> rolling_volatility(std::span<const Window> windows, std::size_t horizon,
                                       Backend backend = Backend::Parallel);

// Linearly weighted mean of gross volume over the trailing `horizon` windows,
// most recent weighted highest, excluding the current one. NaN where no window precedes.
std::vector<double> weighted_volume(std::span<const Window> windows, std::size_t horizon,
                                    Backend backend = Backend::Parallel);

struct AdjustedSample {
  std::int64_t window = 0;
  double q = 0.0;     // net / V_T
  double y = 0.0;     // dp / sigma_T
  int prev_sign = 0;  // sign of the previous window's net volume

  friend bool operator==(const AdjustedSample&, const AdjustedSample&) = default;
};

struct Adjusted {
  std::vector<AdjustedSample> samples;
  std::size_t skipped = 0;
};

// Windows with a missing, zero or non-finite normaliser are skipped and counted.
Adjusted adjust(std::span<const Window> windows, std::span<const double> sigma, std::span<const double> volume);

// ---------------------------------------------------------------------------
// Square-root law

inline double signed_power(double q, double delta) {
  if (q == 0.0) return 0.0;
  return q > 0 ? std::pow(q, delta) : -std::pow(-q, delta);
}

struct DeltaFit {
  double delta = 0.0;
  double k = 0.0;
  double sse = 0.0;
};

// Least squares of y = k * sgn(q)|q|^delta. k is solved in closed form for each
// delta; delta by golden-section search on [lo, hi] down to a 1e-4 bracket.
// Needs at least 100 samples; all-zero q is a NumericalError.
DeltaFit fit_delta(std::span<const AdjustedSample> samples, double lo = 0.1, double hi = 1.5);

struct Bucket {
  double key_lo = 0.0;  // range of the sort key inside the bucket
  double key_hi = 0.0;
  double mean_key = 0.0;
  double mean_q = 0.0;
  double mean_y = 0.0;
  double se_y = 0.0;  // standard error of mean_y (0 for a single sample)
  std::size_t count = 0;
};

struct BucketStats {
  std::vector<Bucket> buckets;
};

// Equal-count buckets by q, or by sgn(q)|q|^delta when delta is given. Ties are
// kept in sample order; bucket counts differ by at most one.
BucketStats bucket_means(std::span<const AdjustedSample> samples, std::size_t n_buckets = 20,
                         std::optional<double> delta = std::nullopt);

struct SplitBuckets {
  BucketStats prev_buy;
  BucketStats prev_sell;
};

// Buckets are formed over all samples with a non-zero prev_sign, then each
// group is averaged over the same partition. Either group empty is an error.
SplitBuckets split_by_previous_sign(std::span<const AdjustedSample> samples, std::size_t n_buckets = 20,
                                    std::optional<double> delta = std::nullopt);

// ---------------------------------------------------------------------------
// Impact decay

struct DecayKernel {
  std::vector<double> beta;        // beta_0 .. beta_K
  std::vector<double> cumulative;  // partial sums of beta
  std::vector<double> std_error;
  double condition = 0.0;  // 2-norm condition number of the normal matrix
  std::size_t rows = 0;
};

// Condition numbers above this are treated as a rank-deficient design.
inline constexpr double kMaxCondition = 1e12;

// OLS without intercept of y_t on sgn(q_{t-k})|q_{t-k}|^delta, k = 0..K, over
// every window whose K predecessors are all usable samples.
DecayKernel decay_regression(std::span<const AdjustedSample> samples, double delta, std::size_t max_lag = 100,
                             Backend backend = Backend::Parallel);

// ---------------------------------------------------------------------------
// Order signs

// One sign per market order: consecutive fills sharing timestamp, taker and
// side are folded into one order.
std::vector<int> order_signs(std::span<const Trade> tape);

// Biased, mean-removed ACF at lags 1..max_lag. Needs >= 10*max_lag signs and
// a non-constant stream.
std::vector<double> order_sign_acf(std::span<const int> signs, std::size_t max_lag = 100,
                                   Backend backend = Backend::Parallel);

struct PowerLawFit {
  double c = 0.0;
  double alpha = 0.0;
  double r2 = 0.0;
  std::size_t points = 0;
};

// values[i] belongs to lag i+1. Fits log v = log C - alpha log lag over the
// strictly positive entries; fewer than five is a NumericalError.
PowerLawFit fit_power_law(std::span<const double> values);

// ---------------------------------------------------------------------------
// DAR(p) calibration

std::vector<int> generate_darp_signs(const DarpParams& params, std::size_t length, std::uint64_t seed);

struct DarpTuneOptions {
  double p_lo = 0.5, p_hi = 1.0;
  double gamma_lo = 0.2, gamma_hi = 2.8;
  int n = 50;
  std::size_t length = 100'000;  // signs simulated per candidate
  std::size_t max_lag = 100;
  std::size_t budget = 200;
  std::uint64_t seed = 0;
  Backend backend = Backend::Parallel;
};

struct DarpCandidate {
  DarpParams params;
  std::optional<PowerLawFit> fit;
  double score = 0.0;
};

struct DarpTuneResult {
  DarpParams best;
  PowerLawFit achieved;
  double score = 0.0;
  std::size_t fittable = 0;
  std::vector<DarpCandidate> candidates;
};

// Random search over (p, gamma). Score is (alpha - alpha*)^2 + (log C - log C*)^2;
// candidates whose ACF is not power-law fittable are ignored.
DarpTuneResult tune_darp(const PowerLawFit& target, const DarpTuneOptions& options);

}  // namespace primesim::impact
