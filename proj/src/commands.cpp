#include "infoprice/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "infoprice/config.hpp"
#include "infoprice/csv.hpp"
#include "infoprice/dynamics.hpp"
#include "infoprice/error.hpp"
#include "infoprice/exchange.hpp"
#include "infoprice/filtering.hpp"
#include "infoprice/infotheory.hpp"
#include "infoprice/options.hpp"
#include "infoprice/strategies.hpp"

#ifndef INFOPRICE_VERSION
#define INFOPRICE_VERSION "0.0.0"
#endif

namespace infoprice {

namespace {

// Caption parameters: d in {0, 1}, P(D = 0) = 0.2, T = 5, sigma = 0.25,
// sigma' = 0.45, rho = 0.15.
Json preset_fig2() {
  return Json::parse(R"({
    "curve": {"flat_rate": 0.0},
    "factors": [{"date": 5.0, "sigma": 0.25,
                 "prior": {"type": "discrete", "outcomes": [0.0, 1.0],
                           "probabilities": [0.2, 0.8]}}],
    "informed": {"sigma": 0.45, "rho": 0.15},
    "price": {"times": [0.0, 1.0, 2.0, 3.0, 4.0]},
    "simulate": {"steps": 500, "paths": 100},
    "option": {"maturity": 1.0, "paths": 100000},
    "mutual_info": {"points": 50},
    "stat_arb": {"times": [0.25, 0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0, 2.25, 2.5,
                           2.75, 3.0, 3.25, 3.5, 3.75, 4.0, 4.25, 4.5, 4.75]},
    "market_sim": {"traders": [{"sigma": 0.25}, {"sigma": 0.45}], "spread": 0.01,
                   "steps": 500}
  })");
}

// Adds K = 0.7 and 2000 trials.
Json preset_fig3() {
  Json j = preset_fig2();
  j["stat_arb"]["threshold"] = 0.7;
  j["stat_arb"]["trials"] = 2000;
  j["option"]["strikes"] = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0};
  return j;
}

Json preset(const std::string& name) {
  if (name == "fig2") return preset_fig2();
  if (name == "fig3") return preset_fig3();
  std::string list;
  for (const auto& p : preset_names()) list += (list.empty() ? "" : ", ") + p;
  throw ConfigError("--preset", "unknown preset '" + name + "' (available: " + list + ")");
}

const Json& section(const Json& doc, const std::string& key) {
  const auto it = doc.find(key);
  if (it == doc.end() || !it->is_object()) throw ConfigError(key, "missing section");
  return *it;
}

struct SingleFactor {
  FactorPrior prior;
  InfoProcessSpec spec;
  DiscountCurve curve;
  AssetSpec asset;
};

SingleFactor single_factor(const Json& doc) {
  AssetSpec asset = parse_asset(doc);
  if (asset.factor_count() != 1) throw ConfigError("factors", "this command needs one factor");
  return {asset.factor_priors[0], asset.info_specs[0], parse_curve(doc), asset};
}

// Uniform steps on [0, T] with every payment date added.
TimeGrid grid_with_dates(const std::vector<double>& dates, std::size_t steps) {
  const double T = *std::max_element(dates.begin(), dates.end());
  const auto base = TimeGrid::uniform(T, steps);
  std::vector<double> pts(base.points().begin(), base.points().end());
  pts.insert(pts.end(), dates.begin(), dates.end());
  std::sort(pts.begin(), pts.end());
  std::vector<double> out;
  for (double t : pts) {
    if (!out.empty() && t - out.back() <= 1e-12 * T) {
      // Keep the exact payment date over a nearby uniform point.
      if (std::find(dates.begin(), dates.end(), t) != dates.end()) out.back() = t;
      continue;
    }
    out.push_back(t);
  }
  return TimeGrid(std::move(out));
}

std::vector<CsvFile> cmd_price(const Json& doc) {
  const AssetSpec asset = parse_asset(doc);
  const DiscountCurve curve = parse_curve(doc);
  const Json empty = Json::object();
  const Json& sec = doc.contains("price") ? section(doc, "price") : empty;
  const std::vector<double> times =
      sec.contains("times") ? config_numbers(sec["times"], "price.times") : std::vector<double>{0.0};
  std::vector<std::vector<double>> xis;
  if (sec.contains("xi")) {
    if (!sec["xi"].is_array()) throw ConfigError("price.xi", "expected an array of arrays");
    for (std::size_t i = 0; i < sec["xi"].size(); ++i) {
      const std::string p = "price.xi[" + std::to_string(i) + "]";
      xis.push_back(config_numbers(sec["xi"][i], p));
      if (xis.back().size() != asset.factor_count()) {
        throw ConfigError(p, "one value per factor needed");
      }
    }
  } else {
    xis.emplace_back(asset.factor_count(), 0.0);
  }

  std::ostringstream out;
  CsvWriter w(out);
  std::vector<std::string> head{"t"};
  for (std::size_t j = 0; j < asset.factor_count(); ++j) head.push_back("xi_" + std::to_string(j));
  head.push_back("price");
  w.header(head);
  for (double t : times) {
    for (const auto& xi : xis) {
      std::vector<double> row{t};
      row.insert(row.end(), xi.begin(), xi.end());
      try {
        row.push_back(price_multi_dividend(asset, curve, t, xi));
      } catch (const DomainError& e) {
        throw ConfigError("price.times", e.what());
      }
      w.row(row);
    }
  }
  return {{"price.csv", out.str()}};
}

std::vector<CsvFile> cmd_simulate(const Json& doc, std::uint64_t seed) {
  const AssetSpec asset = parse_asset(doc);
  const DiscountCurve curve = parse_curve(doc);
  const Json& sec = section(doc, "simulate");
  const std::size_t steps = config_count(sec, "steps", "simulate", 500);
  const std::size_t paths = config_count(sec, "paths", "simulate", 100);
  const TimeGrid grid = grid_with_dates(asset.cashflows.dates, steps);
  const std::vector<AssetSpec> assets{asset};
  const MarketSimulation sim = simulate_market(assets, curve, grid, paths, seed);

  std::vector<CsvFile> files;
  std::ostringstream prices;
  write_asset_csv(prices, sim, 0, asset.factor_count());
  files.push_back({"simulate_prices.csv", prices.str()});
  for (std::size_t j = 0; j < sim.xi.size(); ++j) {
    std::ostringstream xi;
    write_csv(xi, sim.xi[j]);
    files.push_back({"simulate_xi_" + std::to_string(j) + ".csv", xi.str()});
  }
  return files;
}

std::vector<CsvFile> cmd_option(const Json& doc, std::uint64_t seed) {
  const SingleFactor f = single_factor(doc);
  const Json& sec = section(doc, "option");
  if (!sec.contains("strikes")) throw ConfigError("option.strikes", "missing field");
  const std::vector<double> strikes = config_numbers(sec["strikes"], "option.strikes");
  const double t = config_number(sec, "maturity", "option", 1.0);
  const std::size_t paths = config_count(sec, "paths", "option", 100000);
  const AssetSpec asset = f.asset;
  const auto payoff = [asset](double x) {
    const double v[1] = {x};
    return asset.cashflows.evaluate(0, v);
  };

  // Binary closed form when the cash flow takes two distinct values.
  std::optional<BinaryCallParams> binary;
  if (f.prior.is_discrete() && f.prior.as_discrete().outcomes.size() == 2) {
    const auto& d = f.prior.as_discrete();
    const double a = payoff(d.outcomes[0]), b = payoff(d.outcomes[1]);
    if (a != b) {
      const double p_hi = a > b ? d.probabilities[0] : d.probabilities[1];
      binary = BinaryCallParams{p_hi,          std::min(a, b), std::max(a, b), f.spec.sigma, t,
                                f.spec.horizon, 0.0,            f.curve};
    }
  }

  std::ostringstream out;
  CsvWriter w(out);
  w.header({"strike", "maturity", "price", "delta", "stderr", "mc_price", "closed_form",
            "closed_form_diff", "flag"});
  for (std::size_t i = 0; i < strikes.size(); ++i) {
    const CallSpec call{strikes[i], t, f.prior, f.spec, f.curve, payoff};
    try {
      call.validate();
    } catch (const DomainError& e) {
      throw ConfigError("option.strikes[" + std::to_string(i) + "]", e.what());
    }
    const double price = call_price_semianalytic(call).price;
    const McEstimate mc = mc_option_price(call, paths, seed);
    double delta = NAN, closed = NAN, diff = NAN;
    bool flag = std::abs(mc.estimate - price) > 3.0 * mc.std_error;
    if (binary) {
      BinaryCallParams p = *binary;
      p.K = strikes[i];
      closed = binary_call_price(p).price;
      delta = binary_delta(p);
      diff = std::abs(closed - price);
      flag = flag || diff > 1e-10;
    }
    w.row({strikes[i], t, price, delta, mc.std_error, mc.estimate, closed, diff,
           flag ? 1.0 : 0.0});
  }
  return {{"option.csv", out.str()}};
}

struct Informed {
  InfoProcessSpec spec;
  double rho;
};

Informed informed(const Json& doc, double horizon) {
  const Json& sec = section(doc, "informed");
  const double sigma = config_number(sec, "sigma", "informed", NAN);
  const double rho = config_number(sec, "rho", "informed", 0.0);
  if (std::isnan(sigma)) throw ConfigError("informed.sigma", "missing field");
  if (!(rho >= -1.0 && rho <= 1.0)) throw ConfigError("informed.rho", "must lie in [-1, 1]");
  try {
    return {InfoProcessSpec(sigma, horizon), rho};
  } catch (const DomainError& e) {
    throw ConfigError("informed.sigma", e.what());
  }
}

std::vector<CsvFile> cmd_mutual_info(const Json& doc) {
  const SingleFactor f = single_factor(doc);
  if (!f.prior.is_discrete()) throw ConfigError("factors[0].prior", "needs a discrete prior");
  const Informed inf = informed(doc, f.spec.horizon);
  const std::size_t n = config_count(section(doc, "mutual_info"), "points", "mutual_info", 50);
  const double T = f.spec.horizon;

  std::ostringstream out;
  CsvWriter w(out);
  w.header({"t", "J", "J_informed", "delta_J"});
  for (std::size_t k = 0; k < n; ++k) {
    const double t = T * static_cast<double>(k) / static_cast<double>(n);
    const double j = mutual_information(f.prior, f.spec, t);
    const double jp = mutual_information_pair(f.prior, f.spec, inf.spec, inf.rho, t);
    w.row({t, j, jp, jp - j});
  }
  return {{"mutual_info.csv", out.str()}};
}

std::vector<CsvFile> cmd_stat_arb(const Json& doc, std::uint64_t seed) {
  const SingleFactor f = single_factor(doc);
  const Informed inf = informed(doc, f.spec.horizon);
  const Json& sec = section(doc, "stat_arb");
  if (!sec.contains("threshold")) throw ConfigError("stat_arb.threshold", "missing field");
  if (!sec.contains("times")) throw ConfigError("stat_arb.times", "missing field");
  const double K = config_number(sec["threshold"], "stat_arb.threshold");
  const std::vector<double> times = config_numbers(sec["times"], "stat_arb.times");
  const std::size_t trials = config_count(sec, "trials", "stat_arb", 2000);

  std::ostringstream out;
  CsvWriter w(out);
  w.header({"t", "mean_delta_v", "stderr", "mean_v", "mean_v_informed", "buy_rate",
            "buy_rate_informed"});
  for (std::size_t i = 0; i < times.size(); ++i) {
    const StatArbConfig c{f.prior, f.spec, inf.spec, inf.rho, times[i], K, f.curve, trials, seed};
    try {
      c.validate();
    } catch (const DomainError& e) {
      throw ConfigError("stat_arb.times[" + std::to_string(i) + "]", e.what());
    }
    const StatArbReport r = run_stat_arb(c);
    w.row({times[i], r.mean_excess, r.se_excess, r.mean_market, r.mean_informed,
           r.market_buy_rate, r.informed_buy_rate});
  }
  return {{"stat_arb.csv", out.str()}};
}

std::vector<CsvFile> cmd_market_sim(const Json& doc, std::uint64_t seed) {
  const SingleFactor f = single_factor(doc);
  const Json& sec = section(doc, "market_sim");
  if (!sec.contains("traders") || !sec["traders"].is_array()) {
    throw ConfigError("market_sim.traders", "expected an array");
  }
  std::vector<InfoProcessSpec> specs;
  for (std::size_t i = 0; i < sec["traders"].size(); ++i) {
    const std::string p = "market_sim.traders[" + std::to_string(i) + "]";
    const Json& t = sec["traders"][i];
    if (!t.is_object() || !t.contains("sigma")) throw ConfigError(p + ".sigma", "missing field");
    try {
      specs.emplace_back(config_number(t["sigma"], p + ".sigma"), f.spec.horizon);
    } catch (const DomainError& e) {
      throw ConfigError(p + ".sigma", e.what());
    }
  }
  if (specs.size() < 2) throw ConfigError("market_sim.traders", "at least two traders needed");
  SpreadConfig spread{};
  try {
    if (sec.contains("phi_minus") || sec.contains("phi_plus")) {
      spread = {config_number(sec, "phi_minus", "market_sim", NAN),
                config_number(sec, "phi_plus", "market_sim", NAN)};
      spread.validate();
    } else {
      spread = SpreadConfig::symmetric(config_number(sec, "spread", "market_sim", 0.01));
    }
  } catch (const DomainError& e) {
    throw ConfigError("market_sim.spread", e.what());
  }
  const std::size_t steps = config_count(sec, "steps", "market_sim", 500);
  std::vector<std::vector<double>> corr;
  if (sec.contains("correlation")) {
    const Json& c = sec["correlation"];
    if (!c.is_array()) throw ConfigError("market_sim.correlation", "expected a matrix");
    for (std::size_t i = 0; i < c.size(); ++i) {
      corr.push_back(config_numbers(c[i], "market_sim.correlation[" + std::to_string(i) + "]"));
    }
  }

  const MarketSimResult r = [&] {
    try {
      return run_market_sim(specs, f.prior, spread, TimeGrid::uniform(f.spec.horizon, steps),
                            seed, f.curve, corr);
    } catch (const DomainError& e) {
      throw ConfigError("market_sim", e.what());
    }
  }();
  std::ostringstream trades, vals;
  write_trade_log(trades, r);
  write_valuations(vals, r);
  return {{"trades.csv", trades.str()}, {"valuations.csv", vals.str()}};
}

}  // namespace

std::vector<std::string> command_names() {
  return {"price", "simulate", "option", "mutual-info", "stat-arb", "market-sim"};
}

std::vector<std::string> preset_names() { return {"fig2", "fig3"}; }

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::vector<CsvFile> run_command(const CommandOptions& o) {
  Json doc = preset(o.preset.value_or("fig3"));
  if (!o.config_text.empty()) {
    const Json user = parse_config_text(o.config_text, "--config");
    if (!user.is_object()) throw ConfigError("--config", "expected a JSON object");
    doc.merge_patch(user);
  }
  if (o.paths) {
    doc["option"]["paths"] = *o.paths;
    doc["simulate"]["paths"] = *o.paths;
  }
  if (o.trials) doc["stat_arb"]["trials"] = *o.trials;

  std::vector<CsvFile> files;
  if (o.command == "price") {
    files = cmd_price(doc);
  } else if (o.command == "simulate") {
    files = cmd_simulate(doc, o.seed);
  } else if (o.command == "option") {
    files = cmd_option(doc, o.seed);
  } else if (o.command == "mutual-info") {
    files = cmd_mutual_info(doc);
  } else if (o.command == "stat-arb") {
    files = cmd_stat_arb(doc, o.seed);
  } else if (o.command == "market-sim") {
    files = cmd_market_sim(doc, o.seed);
  } else {
    throw ConfigError("command", "unknown command '" + o.command + "'");
  }

  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a(doc.dump())));
  for (auto& f : files) {
    std::ostringstream trailer;
    CsvWriter(trailer).comment("seed=" + std::to_string(o.seed) + ",version=" INFOPRICE_VERSION
                               ",config_hash=" + hash);
    f.content += trailer.str();
  }
  return files;
}

}  // namespace infoprice
