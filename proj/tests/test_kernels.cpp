#include <catch2/catch_amalgamated.hpp>

#include <omp.h>

#include <cmath>
#include <numeric>

#include "primesim/kernels.hpp"
#include "primesim/rng.hpp"

using namespace primesim;
namespace k = primesim::kernels;

namespace {

std::vector<double> half_integers(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = static_cast<double>(rng.uniform_int(-40, 40)) / 2.0;
  return v;
}

std::vector<double> gaussian(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> v(n);
  for (auto& x : v) x = rng.normal();
  return v;
}

// NaN-aware exact equality.
bool identical(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::isnan(a[i]) != std::isnan(b[i])) return false;
    if (!std::isnan(a[i]) && a[i] != b[i]) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("acf backends agree bit for bit", "[kernels]") {
  for (const std::size_t n : {1'000u, 50'000u}) {
    const auto x = gaussian(n, n);
    CHECK(k::serial::acf(x, 100) == k::parallel::acf(x, 100));
  }
  CHECK(k::serial::acf(std::vector<double>(100, 2.0), 5).empty());
  CHECK(k::parallel::acf(std::vector<double>(100, 2.0), 5).empty());
}

TEST_CASE("lagged gram backends agree bit for bit", "[kernels]") {
  const std::size_t n = 20'000, lag = 30;
  const auto x = gaussian(n, 1);
  const auto y = gaussian(n, 2);
  std::vector<std::size_t> rows;
  for (std::size_t t = lag; t < n; t += 1 + t % 3) rows.push_back(t);
  const auto s = k::serial::lagged_gram(x, y, lag, rows);
  const auto p = k::parallel::lagged_gram(x, y, lag, rows);
  CHECK(s.gram == p.gram);
  CHECK(s.rhs == p.rhs);
  // Spot-check one entry against a direct sum.
  double g01 = 0.0;
  for (auto t : rows) g01 += x[t] * x[t - 1];
  CHECK(s.gram[1] == Catch::Approx(g01).epsilon(1e-12));
  CHECK(s.gram[lag + 1] == s.gram[1]);
}

TEST_CASE("trailing kernels agree exactly on half-integer input", "[kernels]") {
  const auto v = half_integers(30'000, 3);
  for (const std::size_t h : {1u, 2u, 17u, 720u}) {
    CHECK(identical(k::serial::trailing_std(v, h), k::parallel::trailing_std(v, h)));
    CHECK(identical(k::serial::trailing_linear_weighted_mean(v, h), k::parallel::trailing_linear_weighted_mean(v, h)));
  }
}

TEST_CASE("trailing kernels agree closely on general input", "[kernels]") {
  const auto v = gaussian(20'000, 4);
  const auto s = k::serial::trailing_std(v, 300);
  const auto p = k::parallel::trailing_std(v, 300);
  const auto ws = k::serial::trailing_linear_weighted_mean(v, 300);
  const auto wp = k::parallel::trailing_linear_weighted_mean(v, 300);
  REQUIRE(s.size() == p.size());
  for (std::size_t i = 2; i < s.size(); ++i) {
    REQUIRE(s[i] == Catch::Approx(p[i]).epsilon(1e-9));
    REQUIRE(ws[i] == Catch::Approx(wp[i]).epsilon(1e-9).margin(1e-12));
  }
}

TEST_CASE("trailing std edge cases", "[kernels]") {
  const std::vector<double> v{1.0, 3.0, 5.0};
  const auto s = k::serial::trailing_std(v, 5);
  CHECK(std::isnan(s[0]));
  CHECK(std::isnan(s[1]));
  CHECK(s[2] == Catch::Approx(std::sqrt(2.0)));
  const auto w = k::serial::trailing_linear_weighted_mean(v, 5);
  CHECK(std::isnan(w[0]));
  CHECK(w[1] == 1.0);
  CHECK(w[2] == Catch::Approx((1.0 * 1 + 2.0 * 3) / 3.0));
}

TEST_CASE("chunked kernels agree for any thread count", "[kernels]") {
  const auto v = half_integers(10'007, 5);
  const auto x = gaussian(3000, 6);
  const auto y = gaussian(3000, 7);
  std::vector<std::size_t> rows(2980);
  std::iota(rows.begin(), rows.end(), 20);
  const int saved = omp_get_max_threads();
  for (const int threads : {1, 2, 3, 7, 16}) {
    omp_set_num_threads(threads);
    CHECK(identical(k::serial::trailing_std(v, 50), k::parallel::trailing_std(v, 50)));
    CHECK(identical(k::serial::trailing_linear_weighted_mean(v, 50), k::parallel::trailing_linear_weighted_mean(v, 50)));
    CHECK(k::serial::lagged_gram(x, y, 20, rows).gram == k::parallel::lagged_gram(x, y, 20, rows).gram);
  }
  omp_set_num_threads(saved);
}
