#include <omp.h>

#include <cmath>
#include <limits>
#include <stdexcept>

#include "primesim/impact_stats.hpp"

namespace primesim::impact {

std::vector<int> order_signs(std::span<const Trade> tape) {
  std::vector<int> out;
  out.reserve(tape.size());
  for (std::size_t i = 0; i < tape.size(); ++i) {
    const Trade& t = tape[i];
    if (i > 0) {
      const Trade& prev = tape[i - 1];
      if (prev.ts == t.ts && prev.taker_agent == t.taker_agent && prev.aggressor == t.aggressor) continue;
    }
    out.push_back(sign_of(t.aggressor));
  }
  return out;
}

std::vector<double> order_sign_acf(std::span<const int> signs, std::size_t max_lag, Backend backend) {
  if (max_lag == 0) throw std::invalid_argument("order_sign_acf: max_lag must be >= 1");
  if (signs.size() < 10 * max_lag) throw std::invalid_argument("order_sign_acf: need at least 10*max_lag signs");
  for (int s : signs) {
    if (s != 1 && s != -1) throw std::invalid_argument("order_sign_acf: signs must be +1 or -1");
  }
  const std::vector<double> x(signs.begin(), signs.end());
  auto acf = kernels::acf(x, max_lag, backend);
  if (acf.empty()) throw NumericalError("order_sign_acf: constant sign stream has no autocorrelation");
  return acf;
}

std::vector<int> generate_darp_signs(const DarpParams& params, std::size_t length, std::uint64_t seed) {
  Rng rng(seed);
  DarpProcess process(params, rng);
  std::vector<int> out(length);
  for (auto& s : out) s = process.next(rng) == 1 ? +1 : -1;
  return out;
}

namespace {

void evaluate(DarpCandidate& cand, const PowerLawFit& target, const DarpTuneOptions& options, std::uint64_t seed) {
  const auto signs = generate_darp_signs(cand.params, options.length, seed);
  const std::vector<double> x(signs.begin(), signs.end());
  const auto acf = kernels::serial::acf(x, options.max_lag);
  if (acf.empty()) return;
  try {
    const PowerLawFit fit = fit_power_law(acf);
    const double da = fit.alpha - target.alpha;
    const double dc = std::log(fit.c) - std::log(target.c);
    cand.fit = fit;
    cand.score = da * da + dc * dc;
  } catch (const NumericalError&) {
  }
}

}  // namespace

DarpTuneResult tune_darp(const PowerLawFit& target, const DarpTuneOptions& options) {
  if (!(target.alpha > 0)) throw std::invalid_argument("tune_darp: target alpha must be positive");
  if (!(target.c > 0)) throw std::invalid_argument("tune_darp: target C must be positive");
  if (options.budget < 1) throw std::invalid_argument("tune_darp: budget must be >= 1");
  if (options.length < 10 * options.max_lag) throw std::invalid_argument("tune_darp: sign stream too short");
  if (!(options.p_lo <= options.p_hi) || !(options.gamma_lo <= options.gamma_hi)) {
    throw std::invalid_argument("tune_darp: empty search box");
  }

  // Candidates are drawn up front from one stream so the search order does not
  // depend on how evaluation is scheduled.
  Rng draw(stream_seed(options.seed, 0));
  std::vector<DarpCandidate> candidates(options.budget);
  for (auto& c : candidates) {
    c.params.p = options.p_lo + (options.p_hi - options.p_lo) * draw.uniform01();
    c.params.gamma = options.gamma_lo + (options.gamma_hi - options.gamma_lo) * draw.uniform01();
    c.params.n = options.n;
  }

  const auto count = static_cast<std::int64_t>(candidates.size());
  if (options.backend == Backend::Parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t i = 0; i < count; ++i) {
      evaluate(candidates[static_cast<std::size_t>(i)], target, options,
               stream_seed(options.seed, static_cast<std::uint64_t>(i) + 1));
    }
  } else {
    for (std::int64_t i = 0; i < count; ++i) {
      evaluate(candidates[static_cast<std::size_t>(i)], target, options,
               stream_seed(options.seed, static_cast<std::uint64_t>(i) + 1));
    }
  }

  DarpTuneResult result;
  const DarpCandidate* best = nullptr;
  for (const auto& c : candidates) {
    if (!c.fit) continue;
    ++result.fittable;
    if (best == nullptr || c.score < best->score) best = &c;
  }
  if (best == nullptr) throw NumericalError("tune_darp: no candidate produced a power-law fittable ACF");
  result.best = best->params;
  result.achieved = *best->fit;
  result.score = best->score;
  result.candidates = std::move(candidates);
  return result;
}

}  // namespace primesim::impact
