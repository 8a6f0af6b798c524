#include "primesim/cli.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>

#include "primesim/config.hpp"
#include "primesim/impact_stats.hpp"
#include "primesim/runner.hpp"
#include "primesim/trade_io.hpp"

namespace primesim::cli {

namespace fs = std::filesystem;

std::optional<SimTime> parse_duration(const std::string& text) {
  std::size_t pos = 0;
  double value = 0.0;
  try {
    value = std::stod(text, &pos);
  } catch (const std::exception&) {
    return std::nullopt;
  }
  const std::string unit = text.substr(pos);
  double scale = 0.0;
  if (unit.empty() || unit == "s") {
    scale = 1e9;
  } else if (unit == "ns") {
    scale = 1.0;
  } else if (unit == "us") {
    scale = 1e3;
  } else if (unit == "ms") {
    scale = 1e6;
  } else if (unit == "m") {
    scale = 60e9;
  } else if (unit == "h") {
    scale = 3600e9;
  } else {
    return std::nullopt;
  }
  if (!(value > 0) || !std::isfinite(value)) return std::nullopt;
  return static_cast<SimTime>(std::llround(value * scale));
}

namespace {

struct AnalyzeOptions {
  std::string kind;
  std::string trades;
  std::string l1;
  std::optional<double> delta;
  std::string window = "5s";
  std::string horizon = "1h";
  std::size_t buckets = 20;
  std::size_t lags = 100;
  std::string out;
};

struct Inputs {
  std::vector<Trade> trades;
  std::vector<L1Snapshot> l1;
  std::optional<SimTime> session_end;
  fs::path default_out;
};

Inputs load_inputs(const AnalyzeOptions& o, bool need_l1) {
  Inputs in;
  fs::path trades = o.trades;
  fs::path l1 = o.l1;
  if (fs::is_directory(trades)) {
    const fs::path dir = trades;
    trades = dir / "trades.csv";
    if (l1.empty()) l1 = dir / "l1.csv";
    in.default_out = dir / "analysis";
    if (fs::exists(dir / "summary.txt")) {
      const Summary s = read_summary(dir / "summary.txt");
      if (auto it = s.find("session_ns"); it != s.end()) in.session_end = std::stoll(it->second);
    }
  } else {
    in.default_out = "analysis";
  }
  in.trades = load_trades(trades).trades;
  if (need_l1) {
    if (l1.empty()) throw std::runtime_error("analyze: an L1 file is required");
    in.l1 = load_l1(l1);
  }
  return in;
}

template <class Fn>
void write_csv(const fs::path& path, const std::string& header, Fn&& rows) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write " + path.string());
  out << std::setprecision(17) << header << '\n';
  rows(out);
}

void write_buckets(const fs::path& path, const impact::BucketStats& stats) {
  write_csv(path, "bucket,key_lo,key_hi,mean_key,mean_q,mean_y,se_y,count", [&](std::ostream& out) {
    for (std::size_t b = 0; b < stats.buckets.size(); ++b) {
      const auto& k = stats.buckets[b];
      out << b << ',' << k.key_lo << ',' << k.key_hi << ',' << k.mean_key << ',' << k.mean_q << ',' << k.mean_y << ','
          << k.se_y << ',' << k.count << '\n';
    }
  });
}

struct Pipeline {
  std::vector<impact::Window> windows;
  std::vector<double> sigma;
  std::vector<double> volume;
  impact::Adjusted adjusted;
};

Pipeline run_pipeline(const Inputs& in, const AnalyzeOptions& o) {
  const auto window = parse_duration(o.window);
  const auto horizon = parse_duration(o.horizon);
  if (!window || !horizon || *horizon < *window) throw ConfigError("analyze: bad --window or --horizon");
  impact::ResampleOptions ro;
  ro.window = *window;
  if (in.session_end) {
    ro.start = 0;
    ro.end = *in.session_end;
  }
  Pipeline p;
  p.windows = impact::resample(in.trades, in.l1, ro);
  const auto h = static_cast<std::size_t>(*horizon / *window);
  p.sigma = impact::rolling_volatility(p.windows, h);
  p.volume = impact::weighted_volume(p.windows, h);
  p.adjusted = impact::adjust(p.windows, p.sigma, p.volume);
  return p;
}

void write_pipeline(const fs::path& dir, const Pipeline& p) {
  write_csv(dir / "windows.csv", "index,start_ns,open_mid2x,close_mid2x,net,gross,dp,sigma_T,V_T", [&](std::ostream& out) {
    for (std::size_t i = 0; i < p.windows.size(); ++i) {
      const auto& w = p.windows[i];
      out << w.index << ',' << w.start << ',' << w.open_mid2x << ',' << w.close_mid2x << ',' << w.net << ',' << w.gross
          << ',' << w.dp() << ',' << p.sigma[i] << ',' << p.volume[i] << '\n';
    }
  });
  write_csv(dir / "samples.csv", "window,q,y,prev_sign", [&](std::ostream& out) {
    for (const auto& s : p.adjusted.samples) out << s.window << ',' << s.q << ',' << s.y << ',' << s.prev_sign << '\n';
  });
}

int analyze(const AnalyzeOptions& o, std::ostream& out) {
  const bool need_l1 = o.kind != "acf";
  const Inputs in = load_inputs(o, need_l1);
  const fs::path dir = o.out.empty() ? in.default_out : fs::path(o.out);
  fs::create_directories(dir);
  Summary summary{{"analysis", o.kind}, {"trades", std::to_string(in.trades.size())}};

  if (o.kind == "acf") {
    const auto signs = impact::order_signs(in.trades);
    const auto acf = impact::order_sign_acf(signs, o.lags);
    if (acf.empty()) throw DataError("analyze acf: order signs are constant");
    write_csv(dir / "acf.csv", "lag,acf", [&](std::ostream& s) {
      for (std::size_t i = 0; i < acf.size(); ++i) s << i + 1 << ',' << acf[i] << '\n';
    });
    summary["orders"] = std::to_string(signs.size());
    summary["acf_1"] = std::to_string(acf.front());
    // A decay with too few positive lags has no power-law fit; the ACF stands on its own.
    try {
      const auto fit = impact::fit_power_law(acf);
      write_csv(dir / "power_law_fit.csv", "c,alpha,r2,points",
                [&](std::ostream& s) { s << fit.c << ',' << fit.alpha << ',' << fit.r2 << ',' << fit.points << '\n'; });
      summary["alpha"] = std::to_string(fit.alpha);
      summary["c"] = std::to_string(fit.c);
      summary["r2"] = std::to_string(fit.r2);
    } catch (const NumericalError&) {
      summary["power_law_fit"] = "unavailable";
    }
  } else {
    const Pipeline p = run_pipeline(in, o);
    write_pipeline(dir, p);
    summary["windows"] = std::to_string(p.windows.size());
    summary["samples"] = std::to_string(p.adjusted.samples.size());
    summary["skipped"] = std::to_string(p.adjusted.skipped);
    const auto& samples = p.adjusted.samples;
    if (o.kind == "impact") {
      const auto fit = impact::fit_delta(samples);
      const double delta = o.delta.value_or(fit.delta);
      write_buckets(dir / "buckets.csv", impact::bucket_means(samples, o.buckets));
      write_buckets(dir / "buckets_delta.csv", impact::bucket_means(samples, o.buckets, delta));
      write_csv(dir / "delta_fit.csv", "delta,k,sse,samples", [&](std::ostream& s) {
        s << fit.delta << ',' << fit.k << ',' << fit.sse << ',' << samples.size() << '\n';
      });
      summary["delta"] = std::to_string(fit.delta);
      summary["k"] = std::to_string(fit.k);
    } else {
      const double delta = o.delta ? *o.delta : impact::fit_delta(samples).delta;
      const auto kernel = impact::decay_regression(samples, delta, o.lags);
      const auto split = impact::split_by_previous_sign(samples, o.buckets, delta);
      write_csv(dir / "kernel.csv", "lag,beta,cumulative,std_error", [&](std::ostream& s) {
        for (std::size_t k = 0; k < kernel.beta.size(); ++k) {
          s << k << ',' << kernel.beta[k] << ',' << kernel.cumulative[k] << ',' << kernel.std_error[k] << '\n';
        }
      });
      write_buckets(dir / "split_prev_buy.csv", split.prev_buy);
      write_buckets(dir / "split_prev_sell.csv", split.prev_sell);
      summary["delta"] = std::to_string(delta);
      summary["rows"] = std::to_string(kernel.rows);
      summary["condition"] = std::to_string(kernel.condition);
      summary["beta_0"] = std::to_string(kernel.beta.front());
    }
  }
  write_summary(summary, dir / ("summary_" + o.kind + ".txt"));
  for (const auto& [k, v] : summary) out << k << '=' << v << '\n';
  return kOk;
}

bool same_bytes(const fs::path& a, const fs::path& b) {
  std::ifstream fa(a, std::ios::binary), fb(b, std::ios::binary);
  if (!fa || !fb) return false;
  std::ostringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  return sa.str() == sb.str();
}

RunConfig resolve_config(const std::string& spec) {
  if (fs::exists(spec)) return load_config(spec);
  if (auto p = preset(spec)) return *p;
  throw ConfigError("no config file or preset named '" + spec + "'");
}

int simulate_cmd(const std::string& spec, std::optional<std::uint64_t> seed, const std::string& out_dir, int seeds,
                 std::ostream& out) {
  RunConfig base = resolve_config(spec);
  if (seed) base.seed = *seed;
  if (!out_dir.empty()) base.output_dir = out_dir;
  validate(base);
  if (seeds <= 1) {
    const fs::path dir = run_simulation(base);
    out << "run=" << dir.string() << "\nseed=" << base.seed << '\n';
    return kOk;
  }
  // Monte-Carlo fan-out: one independent instance per seed.
  std::vector<std::string> errors(static_cast<std::size_t>(seeds));
#pragma omp parallel for schedule(dynamic, 1)
  for (int i = 0; i < seeds; ++i) {
    RunConfig c = base;
    c.seed = base.seed + static_cast<std::uint64_t>(i);
    c.output_dir = (fs::path(base.output_dir) / ("seed-" + std::to_string(c.seed))).string();
    try {
      run_simulation(c);
    } catch (const std::exception& e) {
      errors[static_cast<std::size_t>(i)] = e.what();
    }
  }
  for (int i = 0; i < seeds; ++i) {
    if (!errors[static_cast<std::size_t>(i)].empty()) throw DataError(errors[static_cast<std::size_t>(i)]);
    out << "run=" << (fs::path(base.output_dir) / ("seed-" + std::to_string(base.seed + i))).string() << '\n';
  }
  return kOk;
}

int replay_cmd(const std::string& run_dir, const std::string& out_dir, std::ostream& out) {
  const fs::path dir = run_dir;
  if (!fs::exists(dir / "config.json")) throw DataError(dir.string() + " has no config.json to replay");
  RunConfig c = load_config(dir / "config.json");
  c.output_dir = out_dir.empty() ? dir.string() + ".replay" : out_dir;
  const fs::path replayed = run_simulation(c);
  const bool tape = same_bytes(dir / "trades.csv", replayed / "trades.csv");
  const bool l1 = same_bytes(dir / "l1.csv", replayed / "l1.csv");
  out << "replay=" << replayed.string() << "\ntrades_identical=" << (tape ? "true" : "false")
      << "\nl1_identical=" << (l1 ? "true" : "false") << '\n';
  return tape && l1 ? kOk : kData;
}

int tune_cmd(double alpha, double c, std::size_t budget, std::uint64_t seed, std::size_t length, int n,
             std::size_t max_lag, const std::string& out_dir, std::ostream& out) {
  impact::DarpTuneOptions opt;
  opt.budget = budget;
  opt.seed = seed;
  opt.length = length;
  opt.n = n;
  opt.max_lag = max_lag;
  const auto result = impact::tune_darp({c, alpha, 0.0, 0}, opt);
  Summary s{{"p", std::to_string(result.best.p)},
            {"gamma", std::to_string(result.best.gamma)},
            {"n", std::to_string(result.best.n)},
            {"achieved_alpha", std::to_string(result.achieved.alpha)},
            {"achieved_c", std::to_string(result.achieved.c)},
            {"achieved_r2", std::to_string(result.achieved.r2)},
            {"score", std::to_string(result.score)},
            {"fittable", std::to_string(result.fittable)},
            {"budget", std::to_string(budget)},
            {"seed", std::to_string(seed)}};
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_summary(s, fs::path(out_dir) / "tune_summary.txt");
    write_csv(fs::path(out_dir) / "candidates.csv", "p,gamma,alpha,c,r2,score", [&](std::ostream& os) {
      for (const auto& cand : result.candidates) {
        os << cand.params.p << ',' << cand.params.gamma << ',';
        if (cand.fit) {
          os << cand.fit->alpha << ',' << cand.fit->c << ',' << cand.fit->r2 << ',' << cand.score << '\n';
        } else {
          os << ",,,\n";
        }
      }
    });
  }
  for (const auto& [k, v] : s) out << k << '=' << v << '\n';
  return kOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Agent-based limit order book simulator and market-impact analysis", "primesim"};
  app.require_subcommand(1);

  std::string config_spec, sim_out;
  std::optional<std::uint64_t> sim_seed;
  int seeds = 1;
  auto* simulate = app.add_subcommand("simulate", "Run a simulation from a config file or preset name");
  simulate->add_option("config", config_spec, "Config file path, or preset (santa-fe, prime)")->required();
  simulate->add_option("--seed", sim_seed, "Override the master seed");
  simulate->add_option("--out", sim_out, "Override the output directory");
  simulate->add_option("--seeds", seeds, "Run N consecutive seeds in parallel into <out>/seed-<s>")
      ->check(CLI::PositiveNumber);

  AnalyzeOptions ao;
  auto* analyze_cmd = app.add_subcommand("analyze", "Measure impact, impact decay or order-sign autocorrelation");
  analyze_cmd->add_option("kind", ao.kind, "impact | decay | acf")
      ->required()
      ->check(CLI::IsMember({"impact", "decay", "acf"}));
  analyze_cmd->add_option("trades", ao.trades, "Trade CSV, or a simulation run directory")->required();
  analyze_cmd->add_option("l1", ao.l1, "L1 quote CSV");
  analyze_cmd->add_option("--delta", ao.delta, "Impact exponent (default: fitted)");
  analyze_cmd->add_option("--window", ao.window, "Resampling window");
  analyze_cmd->add_option("--horizon", ao.horizon, "Normalisation horizon");
  analyze_cmd->add_option("--buckets", ao.buckets, "Quantile buckets")->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--lags", ao.lags, "Maximum lag for decay/acf")->check(CLI::PositiveNumber);
  analyze_cmd->add_option("--out", ao.out, "Output directory");

  double target_alpha = 0.0, target_c = 0.0;
  std::size_t budget = 200, length = 100'000, max_lag = 100;
  std::uint64_t tune_seed = 0;
  int hist = 50;
  std::string tune_out;
  auto* tune = app.add_subcommand("tune-dar", "Calibrate DAR(p) parameters to a target order-sign power law");
  tune->add_option("--target-alpha", target_alpha, "Target decay exponent")->required();
  tune->add_option("--target-c", target_c, "Target amplitude")->required();
  tune->add_option("--budget", budget, "Candidates to evaluate")->check(CLI::PositiveNumber);
  tune->add_option("--seed", tune_seed, "Search seed");
  tune->add_option("--length", length, "Signs simulated per candidate");
  tune->add_option("--n", hist, "DAR history length")->check(CLI::PositiveNumber);
  tune->add_option("--max-lag", max_lag, "ACF lags used in the fit")->check(CLI::PositiveNumber);
  tune->add_option("--out", tune_out, "Directory for tune_summary.txt and candidates.csv");

  std::string replay_dir, replay_out;
  auto* replay = app.add_subcommand("replay", "Re-run a finished simulation and compare its outputs byte for byte");
  replay->add_option("run-dir", replay_dir, "Directory written by simulate")->required();
  replay->add_option("--out", replay_out, "Where to write the replay (default <run-dir>.replay)");

  std::vector<const char*> argv{"primesim"};
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*simulate) return simulate_cmd(config_spec, sim_seed, sim_out, seeds, out);
    if (*analyze_cmd) return analyze(ao, out);
    if (*tune) return tune_cmd(target_alpha, target_c, budget, tune_seed, length, hist, max_lag, tune_out, out);
    if (*replay) return replay_cmd(replay_dir, replay_out, out);
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const DataError& e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    err << "data error: " << e.what() << '\n';
    return kData;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}

}  // namespace primesim::cli
