#include "primesim/trade_io.hpp"

#include <algorithm>
#include <fstream>

#include "csv_util.hpp"

namespace primesim {

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path.string());
  return in;
}

std::optional<Side> parse_aggressor(std::string_view s) {
  s = csv::trim(s);
  if (s == "B" || s == "b" || s == "buy" || s == "BUY") return Side::Bid;
  if (s == "S" || s == "s" || s == "sell" || s == "SELL") return Side::Ask;
  return std::nullopt;
}

void check_malformed(std::size_t bad, std::size_t total, const std::filesystem::path& path) {
  if (total > 0 && bad * 100 > total) {
    throw DataError(path.string() + ": " + std::to_string(bad) + " of " + std::to_string(total) +
                    " rows are malformed (limit 1%)");
  }
}

}  // namespace

void write_trades_csv(std::span<const Trade> trades, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "ts,price,qty,aggressor,taker_agent\n";
  for (const auto& t : trades) {
    out << t.ts << ',' << t.price << ',' << t.qty << ',' << side_code(t.aggressor) << ',' << to_int(t.taker_agent)
        << '\n';
  }
}

void write_l1_csv(std::span<const L1Snapshot> quotes, const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "ts,best_bid,best_ask\n";
  for (const auto& q : quotes) {
    out << q.ts << ',';
    if (q.best_bid) out << *q.best_bid;
    out << ',';
    if (q.best_ask) out << *q.best_ask;
    out << '\n';
  }
}

TradeDump load_trades(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": empty trade file");
  const auto header = csv::split(csv::trim(line));
  const bool base_ok = header.size() >= 4 && csv::trim(header[0]) == "ts" && csv::trim(header[1]) == "price" &&
                       csv::trim(header[2]) == "qty" && csv::trim(header[3]) == "aggressor";
  const bool has_taker = header.size() == 5 && csv::trim(header[4]) == "taker_agent";
  if (!base_ok || (header.size() != 4 && !has_taker)) {
    throw DataError(path.string() + ": trade header must be `ts,price,qty,aggressor[,taker_agent]`");
  }

  TradeDump dump;
  dump.path = path;
  std::size_t rows = 0;
  while (std::getline(in, line)) {
    if (csv::trim(line).empty()) continue;
    ++rows;
    const auto f = csv::split(line);
    if (f.size() != header.size()) {
      ++dump.malformed;
      continue;
    }
    const auto ts = csv::parse_int<SimTime>(f[0]);
    const auto price = csv::parse_int<Price>(f[1]);
    const auto qty = csv::parse_int<Qty>(f[2]);
    const auto side = parse_aggressor(f[3]);
    std::optional<std::uint32_t> taker = 0;
    if (has_taker) taker = csv::parse_int<std::uint32_t>(f[4]);
    if (!ts || !price || !qty || !side || !taker || *price < 1 || *qty < 1) {
      ++dump.malformed;
      continue;
    }
    dump.trades.push_back(Trade{*ts, *price, *qty, *side, OrderId{0}, AgentId{*taker}});
  }
  check_malformed(dump.malformed, rows, path);
  std::stable_sort(dump.trades.begin(), dump.trades.end(), [](const Trade& a, const Trade& b) { return a.ts < b.ts; });
  return dump;
}

std::vector<L1Snapshot> load_l1(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::string line;
  if (!std::getline(in, line)) throw DataError(path.string() + ": empty L1 file");
  const auto header = csv::split(csv::trim(line));
  if (header.size() != 3 || csv::trim(header[0]) != "ts" || csv::trim(header[1]) != "best_bid" ||
      csv::trim(header[2]) != "best_ask") {
    throw DataError(path.string() + ": L1 header must be `ts,best_bid,best_ask`");
  }
  std::vector<L1Snapshot> out;
  std::size_t rows = 0, bad = 0;
  while (std::getline(in, line)) {
    if (csv::trim(line).empty()) continue;
    ++rows;
    const auto f = csv::split(csv::trim(line));
    if (f.size() != 3) {
      ++bad;
      continue;
    }
    const auto ts = csv::parse_int<SimTime>(f[0]);
    L1Snapshot snap;
    bool ok = ts.has_value();
    for (int side = 1; side <= 2 && ok; ++side) {
      if (csv::trim(f[side]).empty()) continue;
      const auto px = csv::parse_int<Price>(f[side]);
      ok = px && *px >= 1;
      if (ok) (side == 1 ? snap.best_bid : snap.best_ask) = *px;
    }
    if (!ok) {
      ++bad;
      continue;
    }
    snap.ts = *ts;
    out.push_back(snap);
  }
  check_malformed(bad, rows, path);
  std::stable_sort(out.begin(), out.end(), [](const L1Snapshot& a, const L1Snapshot& b) { return a.ts < b.ts; });
  return out;
}

void write_summary(const Summary& summary, const std::filesystem::path& path) {
  auto out = open_out(path);
  for (const auto& [k, v] : summary) out << k << '=' << v << '\n';
}

Summary read_summary(const std::filesystem::path& path) {
  auto in = open_in(path);
  Summary s;
  std::string line;
  while (std::getline(in, line)) {
    const auto pos = line.find('=');
    if (pos == std::string::npos) continue;
    s[line.substr(0, pos)] = std::string(csv::trim(std::string_view(line).substr(pos + 1)));
  }
  return s;
}

}  // namespace primesim
