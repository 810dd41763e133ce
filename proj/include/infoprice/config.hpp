#pragma once

#include <string>
#include <vector>

#include "json.hpp"
#include "infoprice/market.hpp"
#include "infoprice/stochastic.hpp"

namespace infoprice {

/// Reading model definitions from a JSON document. Every failure raises
/// ConfigError naming the offending field, e.g. "factors[1].prior.p".
///
///   {
///     "curve": {"flat_rate": 0.0} | {"table": [[t, P_0t], ...]},
///     "factors": [{"date": T, "sigma": s, "prior": PRIOR}, ...],
///     "cashflows": [{"terms": [{"coef": c, "factors": [0, 1]}, ...]}, ...]
///   }
///
/// PRIOR is one of
///   {"type": "digital", "p": P(X = 1)}
///   {"type": "discrete", "outcomes": [...], "probabilities": [...]}
///   {"type": "gaussian", "mean": m, "sd": s}
///   {"type": "lognormal", "mu": m, "s": s}
///   {"type": "uniform", "lo": a, "hi": b}
///
/// Cash flow k is paid on the date of factor k and is the polynomial
/// sum coef * prod X_j over its terms; a term may only use factors 0..k.
/// Without "cashflows" a single factor pays D_T = X_T.

using Json = nlohmann::json;

/// Parses text into a document; syntax errors become ConfigError.
Json parse_config_text(const std::string& text, const std::string& origin);

double config_number(const Json& node, const std::string& path);
double config_number(const Json& node, const std::string& key, const std::string& path,
                     double fallback);
std::size_t config_count(const Json& node, const std::string& key, const std::string& path,
                         std::size_t fallback);
std::vector<double> config_numbers(const Json& node, const std::string& path);

FactorPrior parse_prior(const Json& node, const std::string& path);
DiscountCurve parse_curve(const Json& doc);
AssetSpec parse_asset(const Json& doc);

}  // namespace infoprice
