#include "primesim/config.hpp"

#include <fstream>
#include <initializer_list>
#include <set>

namespace primesim {

using nlohmann::json;

namespace {

// Strict view over one JSON object: rejects keys outside the schema and
// converts type errors into ConfigError naming the offending path.
class Reader {
 public:
  Reader(const json& j, std::string path, std::initializer_list<const char*> allowed) : j_(j), path_(std::move(path)) {
    if (!j_.is_object()) throw ConfigError(path_ + ": expected an object");
    std::set<std::string> ok(allowed.begin(), allowed.end());
    for (const auto& [key, value] : j_.items()) {
      if (!ok.contains(key)) throw ConfigError(path_ + ": unknown key '" + key + "'");
    }
  }

  template <class T>
  void get(const char* key, T& out) const {
    if (!j_.contains(key)) return;
    try {
      out = j_.at(key).get<T>();
    } catch (const json::exception& e) {
      throw ConfigError(path_ + "." + key + ": " + e.what());
    }
  }

  bool has(const char* key) const { return j_.contains(key) && !j_.at(key).is_null(); }
  const json& at(const char* key) const { return j_.at(key); }
  std::string child(const char* key) const { return path_ + "." + key; }

 private:
  const json& j_;
  std::string path_;
};

LimitMode limit_mode(const std::string& s) {
  if (s == "santa_fe") return LimitMode::SantaFe;
  if (s == "prime") return LimitMode::Prime;
  throw ConfigError("agents.zi_limit.mode: expected santa_fe or prime, got '" + s + "'");
}

MarketMode market_mode(const std::string& s) {
  if (s == "santa_fe") return MarketMode::SantaFe;
  if (s == "darp") return MarketMode::Darp;
  if (s == "prime") return MarketMode::Prime;
  throw ConfigError("agents.zi_market.mode: expected santa_fe, darp or prime, got '" + s + "'");
}

const char* name(LimitMode m) { return m == LimitMode::SantaFe ? "santa_fe" : "prime"; }

const char* name(MarketMode m) {
  switch (m) {
    case MarketMode::SantaFe: return "santa_fe";
    case MarketMode::Darp: return "darp";
    case MarketMode::Prime: return "prime";
  }
  return "santa_fe";
}

void read_technical(const json& j, const std::string& path, AgentGroup<TechnicalParams>& group) {
  Reader r(j, path, {"count", "rate", "lookback_seconds", "threshold", "size"});
  r.get("count", group.count);
  r.get("rate", group.params.rate);
  r.get("lookback_seconds", group.params.lookback_seconds);
  r.get("threshold", group.params.threshold);
  r.get("size", group.params.size);
}

json write_technical(const AgentGroup<TechnicalParams>& g) {
  return {{"count", g.count},
          {"rate", g.params.rate},
          {"lookback_seconds", g.params.lookback_seconds},
          {"threshold", g.params.threshold},
          {"size", g.params.size}};
}

}  // namespace

RunConfig parse_config(const json& j) {
  RunConfig c;
  Reader top(j, "config",
             {"seed", "session_seconds", "output_dir", "book_seed", "oracle", "observation_noise", "agents"});
  top.get("seed", c.seed);
  top.get("session_seconds", c.session_seconds);
  top.get("output_dir", c.output_dir);
  top.get("observation_noise", c.observation_noise);

  if (top.has("book_seed")) {
    BookSeedSpec seed;
    Reader r(top.at("book_seed"), top.child("book_seed"), {"start_price", "half_width", "slope"});
    r.get("start_price", seed.start_price);
    r.get("half_width", seed.half_width);
    r.get("slope", seed.slope);
    c.book_seed = seed;
  }

  if (top.has("oracle")) {
    Reader r(top.at("oracle"), top.child("oracle"),
             {"kind", "price", "start", "sigma", "step_seconds", "horizon_seconds", "seed", "path"});
    std::string kind = "none";
    r.get("kind", kind);
    double step_seconds = to_seconds(c.oracle.walk.step);
    double horizon_seconds = -1.0;
    if (kind == "none") {
      c.oracle.kind = OracleSpec::Kind::None;
    } else if (kind == "constant") {
      c.oracle.kind = OracleSpec::Kind::Constant;
    } else if (kind == "random_walk") {
      c.oracle.kind = OracleSpec::Kind::RandomWalk;
    } else if (kind == "from_file") {
      c.oracle.kind = OracleSpec::Kind::FromFile;
    } else {
      throw ConfigError("config.oracle.kind: unknown oracle kind '" + kind + "'");
    }
    r.get("price", c.oracle.price);
    r.get("start", c.oracle.walk.start);
    r.get("sigma", c.oracle.walk.sigma);
    r.get("step_seconds", step_seconds);
    r.get("horizon_seconds", horizon_seconds);
    r.get("seed", c.oracle.walk.seed);
    r.get("path", c.oracle.path);
    c.oracle.walk.step = seconds(step_seconds);
    c.oracle.walk.horizon = seconds(horizon_seconds >= 0 ? horizon_seconds : c.session_seconds);
  } else {
    c.oracle.walk.horizon = seconds(c.session_seconds);
  }

  if (top.has("agents")) {
    Reader agents(top.at("agents"), top.child("agents"), {"zi_limit", "zi_market", "trend", "mean_revert"});
    if (agents.has("zi_limit")) {
      Reader r(agents.at("zi_limit"), agents.child("zi_limit"),
               {"count", "rate", "p_cancel", "mode", "band_low", "band_high", "half_width", "size"});
      std::string mode = name(c.zi_limit.params.mode);
      r.get("count", c.zi_limit.count);
      r.get("rate", c.zi_limit.params.rate);
      r.get("p_cancel", c.zi_limit.params.p_cancel);
      r.get("mode", mode);
      r.get("band_low", c.zi_limit.params.band_low);
      r.get("band_high", c.zi_limit.params.band_high);
      r.get("half_width", c.zi_limit.params.half_width);
      r.get("size", c.zi_limit.params.size);
      c.zi_limit.params.mode = limit_mode(mode);
    }
    if (agents.has("zi_market")) {
      Reader r(agents.at("zi_market"), agents.child("zi_market"), {"count", "rate", "size", "mode", "darp"});
      std::string mode = name(c.zi_market.params.mode);
      r.get("count", c.zi_market.count);
      r.get("rate", c.zi_market.params.rate);
      r.get("size", c.zi_market.params.size);
      r.get("mode", mode);
      c.zi_market.params.mode = market_mode(mode);
      if (r.has("darp")) {
        Reader d(r.at("darp"), r.child("darp"), {"p", "gamma", "n", "literal_pseudocode"});
        d.get("p", c.zi_market.params.darp.p);
        d.get("gamma", c.zi_market.params.darp.gamma);
        d.get("n", c.zi_market.params.darp.n);
        d.get("literal_pseudocode", c.zi_market.params.darp.literal_pseudocode);
      }
    }
    if (agents.has("trend")) read_technical(agents.at("trend"), agents.child("trend"), c.trend);
    if (agents.has("mean_revert")) read_technical(agents.at("mean_revert"), agents.child("mean_revert"), c.mean_revert);
  }
  c.trend.params.kind = TechnicalKind::TrendFollow;
  c.mean_revert.params.kind = TechnicalKind::MeanRevert;

  validate(c);
  return c;
}

json to_json(const RunConfig& c) {
  json j;
  j["seed"] = c.seed;
  j["session_seconds"] = c.session_seconds;
  j["output_dir"] = c.output_dir;
  j["observation_noise"] = c.observation_noise;
  if (c.book_seed) {
    j["book_seed"] = {{"start_price", c.book_seed->start_price},
                      {"half_width", c.book_seed->half_width},
                      {"slope", c.book_seed->slope}};
  } else {
    j["book_seed"] = nullptr;
  }
  json oracle;
  switch (c.oracle.kind) {
    case OracleSpec::Kind::None:
      oracle = {{"kind", "none"}};
      break;
    case OracleSpec::Kind::Constant:
      oracle = {{"kind", "constant"}, {"price", c.oracle.price}};
      break;
    case OracleSpec::Kind::RandomWalk:
      oracle = {{"kind", "random_walk"},
                {"start", c.oracle.walk.start},
                {"sigma", c.oracle.walk.sigma},
                {"step_seconds", to_seconds(c.oracle.walk.step)},
                {"horizon_seconds", to_seconds(c.oracle.walk.horizon)},
                {"seed", c.oracle.walk.seed}};
      break;
    case OracleSpec::Kind::FromFile:
      oracle = {{"kind", "from_file"}, {"path", c.oracle.path}};
      break;
  }
  j["oracle"] = oracle;
  const auto& zl = c.zi_limit;
  const auto& zm = c.zi_market;
  j["agents"] = {
      {"zi_limit",
       {{"count", zl.count},
        {"rate", zl.params.rate},
        {"p_cancel", zl.params.p_cancel},
        {"mode", name(zl.params.mode)},
        {"band_low", zl.params.band_low},
        {"band_high", zl.params.band_high},
        {"half_width", zl.params.half_width},
        {"size", zl.params.size}}},
      {"zi_market",
       {{"count", zm.count},
        {"rate", zm.params.rate},
        {"size", zm.params.size},
        {"mode", name(zm.params.mode)},
        {"darp",
         {{"p", zm.params.darp.p},
          {"gamma", zm.params.darp.gamma},
          {"n", zm.params.darp.n},
          {"literal_pseudocode", zm.params.darp.literal_pseudocode}}}}},
      {"trend", write_technical(c.trend)},
      {"mean_revert", write_technical(c.mean_revert)},
  };
  return j;
}

void validate(const RunConfig& c) {
  if (!(c.session_seconds > 0)) throw ConfigError("session_seconds must be positive");
  if (c.output_dir.empty()) throw ConfigError("output_dir must not be empty");
  if (c.observation_noise < 0) throw ConfigError("observation_noise must be >= 0");
  if (c.zi_limit.count < 0 || c.zi_market.count < 0 || c.trend.count < 0 || c.mean_revert.count < 0) {
    throw ConfigError("agent counts must be >= 0");
  }
  if (c.zi_limit.count > 0) validate(c.zi_limit.params);
  if (c.zi_market.count > 0) validate(c.zi_market.params);
  if (c.trend.count > 0) validate(c.trend.params);
  if (c.mean_revert.count > 0) validate(c.mean_revert.params);
  if (c.book_seed) {
    const auto& s = *c.book_seed;
    if (s.half_width < 1 || s.slope < 1 || s.start_price - s.half_width < 1) {
      throw ConfigError("book_seed: need half_width >= 1, slope >= 1 and start_price - half_width >= 1");
    }
  }
  switch (c.oracle.kind) {
    case OracleSpec::Kind::None:
      break;
    case OracleSpec::Kind::Constant:
      if (c.oracle.price < 1) throw ConfigError("oracle.price must be >= 1");
      break;
    case OracleSpec::Kind::RandomWalk:
      if (c.oracle.walk.start < 1 || c.oracle.walk.sigma < 0 || c.oracle.walk.step <= 0 || c.oracle.walk.horizon < 0) {
        throw ConfigError("oracle: invalid random walk parameters");
      }
      break;
    case OracleSpec::Kind::FromFile:
      if (c.oracle.path.empty()) throw ConfigError("oracle.path must be set for from_file");
      break;
  }
  const bool needs_oracle = c.zi_market.count > 0 && c.zi_market.params.mode == MarketMode::Prime;
  if (needs_oracle && c.oracle.kind == OracleSpec::Kind::None) {
    throw ConfigError("prime market agents require an oracle");
  }
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path.string());
  json j;
  try {
    j = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config file is not valid JSON: " + std::string(e.what()));
  }
  RunConfig c = parse_config(j);
  if (c.oracle.kind == OracleSpec::Kind::FromFile && std::filesystem::path(c.oracle.path).is_relative()) {
    c.oracle.path = (path.parent_path() / c.oracle.path).lexically_normal().string();
  }
  return c;
}

void save_config(const RunConfig& config, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write config file: " + path.string());
  out << to_json(config).dump(2) << '\n';
}

RunConfig santa_fe_preset() {
  RunConfig c;
  c.seed = 1;
  c.session_seconds = 7200.0;
  c.output_dir = "runs/santa-fe";
  c.zi_limit.count = 100;
  c.zi_limit.params = ZiLimitParams{};
  c.zi_limit.params.mode = LimitMode::SantaFe;
  c.zi_limit.params.rate = 1.0;
  c.zi_limit.params.p_cancel = 0.55;
  c.zi_market.count = 10;
  c.zi_market.params.mode = MarketMode::SantaFe;
  c.zi_market.params.rate = 0.5;
  c.zi_market.params.size = 5;
  return c;
}

RunConfig prime_preset() {
  RunConfig c;
  c.seed = 1;
  c.session_seconds = 3600.0;
  c.output_dir = "runs/prime";
  c.book_seed = BookSeedSpec{1000, 50, 1};
  c.oracle.kind = OracleSpec::Kind::Constant;
  c.oracle.price = 1000;
  c.oracle.walk.horizon = seconds(c.session_seconds);
  c.observation_noise = 20;
  c.zi_limit.count = 1000;
  c.zi_limit.params.mode = LimitMode::Prime;
  c.zi_limit.params.rate = 0.1;
  c.zi_limit.params.p_cancel = 0.6;
  c.zi_limit.params.half_width = 50;
  c.zi_market.count = 30;
  c.zi_market.params.mode = MarketMode::Prime;
  c.zi_market.params.rate = 0.2;
  c.trend = {10, TechnicalParams{TechnicalKind::TrendFollow, 0.5, 0, 0.2, 1}};
  c.mean_revert = {10, TechnicalParams{TechnicalKind::MeanRevert, 0.5, 0, 0.2, 1}};
  return c;
}

std::optional<RunConfig> preset(const std::string& name) {
  if (name == "santa-fe") return santa_fe_preset();
  if (name == "prime") return prime_preset();
  return std::nullopt;
}

}  // namespace primesim
