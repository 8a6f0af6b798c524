#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "primesim/order_book.hpp"

namespace primesim {

// Trade tape: `ts,price,qty,aggressor,taker_agent` (ns, ticks, units, B/S, int).
void write_trades_csv(std::span<const Trade> trades, const std::filesystem::path& path);

// L1 log: `ts,best_bid,best_ask`, absent sides left empty.
void write_l1_csv(std::span<const L1Snapshot> quotes, const std::filesystem::path& path);

struct TradeDump {
  std::filesystem::path path;
  std::vector<Trade> trades;  // stably sorted by ts
  std::size_t malformed = 0;
};

// Reads `ts,price,qty,aggressor` with an optional trailing taker_agent column.
// Malformed rows are skipped and counted; an unusable header or more than 1%
// malformed rows is a DataError.
TradeDump load_trades(const std::filesystem::path& path);

std::vector<L1Snapshot> load_l1(const std::filesystem::path& path);

// Flat `key=value` run summaries.
using Summary = std::map<std::string, std::string>;
void write_summary(const Summary& summary, const std::filesystem::path& path);
Summary read_summary(const std::filesystem::path& path);

}  // namespace primesim
