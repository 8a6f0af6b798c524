#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <numeric>

#include "primesim/config.hpp"
#include "primesim/event_queue.hpp"
#include "primesim/runner.hpp"
#include "primesim/simulation.hpp"

using namespace primesim;

namespace {

// Wakes at fixed intervals and records when.
class Metronome final : public Agent {
 public:
  Metronome(SimTime period, std::vector<SimTime>* log) : period_(period), log_(log) {}
  void wakeup(AgentContext& ctx) override { log_->push_back(ctx.now); }
  SimTime next_delay(Rng&) override { return period_; }
  std::string_view kind() const override { return "metronome"; }

 private:
  SimTime period_;
  std::vector<SimTime>* log_;
};

}  // namespace

TEST_CASE("event queue orders by time then insertion", "[sim_kernel]") {
  EventQueue q;
  q.schedule(10, AgentId{1});
  q.schedule(5, AgentId{2});
  q.schedule(10, AgentId{3});
  q.schedule(5, AgentId{4});
  std::vector<std::uint32_t> order;
  while (!q.empty()) order.push_back(to_int(q.pop().agent));
  CHECK(order == std::vector<std::uint32_t>{2, 4, 1, 3});
  CHECK(q.now() == 10);
}

TEST_CASE("event queue rejects the past", "[sim_kernel]") {
  EventQueue q;
  q.schedule(4, AgentId{1});
  q.schedule(5, AgentId{1});
  q.pop();
  CHECK(q.now() == 4);
  CHECK_THROWS_AS(q.schedule(3, AgentId{1}), std::invalid_argument);
  CHECK_NOTHROW(q.schedule(4, AgentId{1}));
}

TEST_CASE("random schedules dispatch like a stable sort", "[sim_kernel][oracle]") {
  Rng rng(5);
  EventQueue q;
  std::vector<Event> pushed;
  for (int i = 0; i < 100'000; ++i) {
    pushed.push_back(q.schedule(rng.uniform_int(0, 5000), AgentId{static_cast<std::uint32_t>(i)}));
  }
  std::stable_sort(pushed.begin(), pushed.end(), [](const Event& a, const Event& b) { return a.time < b.time; });
  std::vector<Event> popped;
  while (!q.empty()) popped.push_back(q.pop());
  CHECK(popped == pushed);
}

TEST_CASE("an empty simulation ends immediately", "[sim_kernel]") {
  Simulation sim(1);
  const auto stats = sim.run_until(seconds(60));
  CHECK(stats.events == 0);
  CHECK(stats.wakeups == 0);
}

TEST_CASE("fixed-interval agent wakes exactly ten times in ten periods", "[sim_kernel]") {
  const SimTime period = seconds(0.25);
  std::vector<SimTime> log;
  Simulation sim(1);
  sim.add_agent(std::make_unique<Metronome>(period, &log));
  const auto stats = sim.run_until(10 * period);
  REQUIRE(log.size() == 10);
  for (std::size_t i = 0; i < log.size(); ++i) CHECK(log[i] == static_cast<SimTime>(i + 1) * period);
  CHECK(stats.wakeups == 10);
}

TEST_CASE("poisson inter-arrival means", "[sim_kernel]") {
  for (const double rate : {1.0, 1000.0}) {
    Rng rng(rate == 1.0 ? 1 : 2);
    const int n = 1'000'000;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) sum += static_cast<double>(next_poisson_wakeup(rate, rng));
    const double mean_s = sum / n / 1e9;
    CHECK(mean_s == Catch::Approx(1.0 / rate).epsilon(0.01));
  }
  Rng rng(3);
  CHECK_THROWS_AS(next_poisson_wakeup(0.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(next_poisson_wakeup(-1.0, rng), std::invalid_argument);
}

TEST_CASE("agent streams are independent of registration of later agents", "[sim_kernel]") {
  CHECK(stream_seed(1, 1) != stream_seed(1, 2));
  CHECK(stream_seed(1, 1) != stream_seed(2, 1));
  CHECK(stream_seed(7, 3) == stream_seed(7, 3));
}

TEST_CASE("same configuration and seed reproduce the run", "[sim_kernel]") {
  auto cfg = santa_fe_preset();
  cfg.session_seconds = 600;
  const auto a = simulate(cfg);
  const auto b = simulate(cfg);
  REQUIRE(a.tape.size() > 100);
  CHECK(a.tape == b.tape);
  REQUIRE(a.l1.size() == b.l1.size());
  for (std::size_t i = 0; i < a.l1.size(); ++i) {
    CHECK(a.l1[i].ts == b.l1[i].ts);
    CHECK(a.l1[i].same_quotes(b.l1[i]));
  }
  cfg.seed = 2;
  CHECK(simulate(cfg).tape != a.tape);
}

TEST_CASE("exchange publishes only quote changes and keeps the book uncrossed", "[sim_kernel]") {
  auto cfg = santa_fe_preset();
  cfg.session_seconds = 600;
  const auto out = simulate(cfg);
  for (std::size_t i = 1; i < out.l1.size(); ++i) {
    CHECK(out.l1[i - 1].ts <= out.l1[i].ts);
    CHECK_FALSE(out.l1[i].same_quotes(out.l1[i - 1]));
    if (out.l1[i].two_sided()) CHECK(*out.l1[i].best_bid < *out.l1[i].best_ask);
  }
  for (std::size_t i = 1; i < out.tape.size(); ++i) CHECK(out.tape[i - 1].ts <= out.tape[i].ts);
  const auto traded = std::accumulate(out.tape.begin(), out.tape.end(), Qty{0},
                                      [](Qty acc, const Trade& t) { return acc + t.qty; });
  CHECK(traded == out.counters.traded_qty);
  // The submission log keeps orders that found no liquidity.
  REQUIRE(out.market_orders.size() == out.counters.market_orders);
  const auto starved = std::count_if(out.market_orders.begin(), out.market_orders.end(),
                                     [](const MarketSubmission& m) { return m.filled == 0; });
  CHECK(static_cast<std::uint64_t>(starved) >= out.counters.no_liquidity);
}
