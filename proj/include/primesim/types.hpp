#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace primesim {

// Prices live on an integer tick grid (tick size 1). Quantities are whole units.
using Price = std::int64_t;
using Qty = std::int64_t;

// Nanoseconds since session start.
using SimTime = std::int64_t;

inline constexpr SimTime kNanosPerSecond = 1'000'000'000;

constexpr SimTime seconds(double s) { return static_cast<SimTime>(s * 1e9 + (s >= 0 ? 0.5 : -0.5)); }
constexpr double to_seconds(SimTime t) { return static_cast<double>(t) / 1e9; }

enum class Side : std::uint8_t { Bid, Ask };

constexpr Side opposite(Side s) { return s == Side::Bid ? Side::Ask : Side::Bid; }

// Aggressor sign convention: a buy (lifting the ask) is +1.
constexpr int sign_of(Side aggressor) { return aggressor == Side::Bid ? +1 : -1; }

constexpr char side_code(Side s) { return s == Side::Bid ? 'B' : 'S'; }

enum class OrderId : std::uint64_t {};
enum class AgentId : std::uint32_t {};

constexpr std::uint64_t to_int(OrderId id) { return static_cast<std::uint64_t>(id); }
constexpr std::uint32_t to_int(AgentId id) { return static_cast<std::uint32_t>(id); }

// Owner of the orders placed by seed_linear_book.
inline constexpr AgentId kSeederAgent{0};

// Error categories surfaced to the command line as distinct exit codes.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericalError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace primesim
