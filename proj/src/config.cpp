#include "infoprice/config.hpp"

#include <cmath>
#include <cstdint>
#include <utility>

#include "infoprice/error.hpp"

namespace infoprice {

namespace {

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

const Json& member(const Json& node, const std::string& key, const std::string& path) {
  if (!node.is_object()) throw ConfigError(path, "expected an object");
  const auto it = node.find(key);
  if (it == node.end()) throw ConfigError(join(path, key), "missing field");
  return *it;
}

const Json& array(const Json& node, const std::string& path) {
  if (!node.is_array()) throw ConfigError(path, "expected an array");
  return node;
}

}  // namespace

Json parse_config_text(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ConfigError(origin, e.what());
  }
}

double config_number(const Json& node, const std::string& path) {
  if (!node.is_number()) throw ConfigError(path, "expected a number");
  const double v = node.get<double>();
  if (!std::isfinite(v)) throw ConfigError(path, "expected a finite number");
  return v;
}

double config_number(const Json& node, const std::string& key, const std::string& path,
                     double fallback) {
  if (!node.is_object()) throw ConfigError(path, "expected an object");
  const auto it = node.find(key);
  return it == node.end() ? fallback : config_number(*it, join(path, key));
}

std::size_t config_count(const Json& node, const std::string& key, const std::string& path,
                         std::size_t fallback) {
  if (!node.is_object()) throw ConfigError(path, "expected an object");
  const auto it = node.find(key);
  if (it == node.end()) return fallback;
  if (!it->is_number_integer() || it->get<std::int64_t>() <= 0) {
    throw ConfigError(join(path, key), "expected a positive integer");
  }
  return static_cast<std::size_t>(it->get<std::int64_t>());
}

std::vector<double> config_numbers(const Json& node, const std::string& path) {
  std::vector<double> out;
  for (std::size_t i = 0; i < array(node, path).size(); ++i) {
    out.push_back(config_number(node[i], index(path, i)));
  }
  return out;
}

FactorPrior parse_prior(const Json& node, const std::string& path) {
  const Json& type = member(node, "type", path);
  if (!type.is_string()) throw ConfigError(join(path, "type"), "expected a string");
  const std::string kind = type.get<std::string>();
  auto num = [&](const char* key) { return config_number(member(node, key, path), join(path, key)); };
  try {
    if (kind == "digital") return FactorPrior::digital(num("p"));
    if (kind == "discrete") {
      return FactorPrior::discrete(
          config_numbers(member(node, "outcomes", path), join(path, "outcomes")),
          config_numbers(member(node, "probabilities", path), join(path, "probabilities")));
    }
    if (kind == "gaussian") return FactorPrior::gaussian(num("mean"), num("sd"));
    if (kind == "lognormal") return FactorPrior::lognormal(num("mu"), num("s"));
    if (kind == "uniform") return FactorPrior::uniform(num("lo"), num("hi"));
  } catch (const DomainError& e) {
    throw ConfigError(path, e.what());
  }
  throw ConfigError(join(path, "type"),
                    "unknown prior '" + kind + "' (digital, discrete, gaussian, lognormal, uniform)");
}

DiscountCurve parse_curve(const Json& doc) {
  if (!doc.is_object() || !doc.contains("curve")) return DiscountCurve::flat(0.0);
  const Json& c = doc["curve"];
  try {
    if (c.is_object() && c.contains("flat_rate")) {
      return DiscountCurve::flat(config_number(c["flat_rate"], "curve.flat_rate"));
    }
    if (c.is_object() && c.contains("table")) {
      const Json& rows = array(c["table"], "curve.table");
      std::vector<std::pair<double, double>> points;
      for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto pair = config_numbers(rows[i], index("curve.table", i));
        if (pair.size() != 2) throw ConfigError(index("curve.table", i), "expected [t, P]");
        points.emplace_back(pair[0], pair[1]);
      }
      return DiscountCurve::table(std::move(points));
    }
  } catch (const DomainError& e) {
    throw ConfigError("curve", e.what());
  }
  throw ConfigError("curve", "expected {\"flat_rate\": r} or {\"table\": [[t, P], ...]}");
}

AssetSpec parse_asset(const Json& doc) {
  const Json& factors = array(member(doc, "factors", ""), "factors");
  if (factors.empty()) throw ConfigError("factors", "at least one factor needed");
  AssetSpec asset;
  for (std::size_t k = 0; k < factors.size(); ++k) {
    const std::string p = index("factors", k);
    const double date = config_number(member(factors[k], "date", p), join(p, "date"));
    const double sigma = config_number(member(factors[k], "sigma", p), join(p, "sigma"));
    asset.factor_priors.push_back(parse_prior(member(factors[k], "prior", p), join(p, "prior")));
    try {
      asset.info_specs.emplace_back(sigma, date);
    } catch (const DomainError& e) {
      throw ConfigError(p, e.what());
    }
    asset.cashflows.dates.push_back(date);
  }

  if (!doc.contains("cashflows")) {
    if (factors.size() != 1) throw ConfigError("cashflows", "required with more than one factor");
    asset.cashflows.flows.push_back([](std::span<const double> x) { return x[0]; });
  } else {
    const Json& flows = array(doc["cashflows"], "cashflows");
    if (flows.empty()) throw ConfigError("cashflows", "empty cash-flow list");
    if (flows.size() != factors.size()) {
      throw ConfigError("cashflows", "one cash flow per factor needed");
    }
    for (std::size_t k = 0; k < flows.size(); ++k) {
      const std::string p = index("cashflows", k);
      const Json& terms = array(member(flows[k], "terms", p), join(p, "terms"));
      std::vector<std::pair<double, std::vector<std::size_t>>> poly;
      for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string tp = index(join(p, "terms"), i);
        const double coef = config_number(member(terms[i], "coef", tp), join(tp, "coef"));
        std::vector<std::size_t> ids;
        if (terms[i].contains("factors")) {
          const Json& f = array(terms[i]["factors"], join(tp, "factors"));
          for (std::size_t j = 0; j < f.size(); ++j) {
            if (!f[j].is_number_integer() || f[j].get<std::int64_t>() < 0 ||
                f[j].get<std::size_t>() > k) {
              throw ConfigError(index(join(tp, "factors"), j),
                                "flow " + std::to_string(k) + " may only use factors 0.." +
                                    std::to_string(k));
            }
            ids.push_back(f[j].get<std::size_t>());
          }
        }
        poly.emplace_back(coef, std::move(ids));
      }
      asset.cashflows.flows.push_back([poly](std::span<const double> x) {
        double sum = 0.0;
        for (const auto& [coef, ids] : poly) {
          double term = coef;
          for (std::size_t j : ids) term *= x[j];
          sum += term;
        }
        return sum;
      });
    }
  }
  try {
    asset.validate();
  } catch (const DomainError& e) {
    throw ConfigError("factors", e.what());
  }
  return asset;
}

}  // namespace infoprice
