#include "infoprice/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "infoprice/csv.hpp"
#include "infoprice/error.hpp"

namespace infoprice {

namespace {

// Number of leading grid points strictly before the guard band of T.
std::size_t points_before_guard(const TimeGrid& grid, double T) {
  std::size_t n = 0;
  while (n < grid.size() && grid[n] < T * (1.0 - kHorizonGuard)) ++n;
  return n;
}

TimeGrid prefix(const TimeGrid& grid, std::size_t n) {
  const auto p = grid.points();
  return TimeGrid(std::vector<double>(p.begin(), p.begin() + static_cast<std::ptrdiff_t>(n)));
}

double posterior_mean(const FactorPrior& prior, const InfoProcessSpec& spec, double t, double xi) {
  return conditional_moments(posterior_single(prior, spec, t, xi)).mean;
}

}  // namespace

std::vector<double> innovation_from_path(std::span<const double> xi, const FactorPrior& prior,
                                         const InfoProcessSpec& spec, const TimeGrid& grid) {
  if (xi.size() != grid.size()) throw DomainError("innovation: one value per grid point needed");
  const double T = spec.horizon;
  const std::size_t n = points_before_guard(grid, T);
  std::vector<double> w(n);
  if (n == 0) return w;
  const double sT = spec.sigma * T;
  double integral = 0.0;
  double g_prev = (sT * posterior_mean(prior, spec, grid[0], xi[0]) - xi[0]) / (T - grid[0]);
  w[0] = xi[0];
  for (std::size_t k = 1; k < n; ++k) {
    const double g = (sT * posterior_mean(prior, spec, grid[k], xi[k]) - xi[k]) / (T - grid[k]);
    integral += 0.5 * (g_prev + g) * (grid[k] - grid[k - 1]);
    w[k] = xi[k] - integral;
    g_prev = g;
  }
  return w;
}

InnovationPath innovation_from_path(const PathBundle& xi, const FactorPrior& prior,
                                    const InfoProcessSpec& spec) {
  const TimeGrid& grid = xi.grid();
  const std::size_t n = points_before_guard(grid, spec.horizon);
  if (n < 2) throw HorizonError("innovation: fewer than two grid points before the horizon");
  PathBundle out(prefix(grid, n), xi.path_count(), xi.seed());
  for (std::size_t i = 0; i < xi.path_count(); ++i) {
    const auto w = innovation_from_path(xi.path(i), prior, spec, grid);
    for (std::size_t k = 0; k < n; ++k) out.at_index(k)[i] = w[k];
  }
  return {std::move(out), xi.seed()};
}

SdeCoefficients sde_coefficients_single(const FactorPrior& prior, const InfoProcessSpec& spec,
                                        const DiscountCurve& curve, double t, double xi) {
  check_before_horizon(t, spec.horizon);
  const double T = spec.horizon;
  const Moments m = conditional_moments(posterior_single(prior, spec, t, xi));
  const double P = curve.discount(t, T);
  return {curve.forward_rate(t) * P * m.mean, P * (spec.sigma * T / (T - t)) * m.variance};
}

VolCoefficients vol_coefficients_multi(const AssetSpec& asset, const DiscountCurve& curve,
                                       double t, std::span<const PosteriorState> posteriors) {
  const std::size_t m = asset.factor_count();
  if (posteriors.size() != m) throw DomainError("vol coefficients: one posterior per factor");
  VolCoefficients out{t, 0.0, std::vector<double>(m, 0.0)};
  const auto& dates = asset.cashflows.dates;
  for (std::size_t k = 0; k < dates.size(); ++k) {
    if (!(dates[k] > t)) continue;
    const double P = curve.discount(t, dates[k]);
    // Moments of (D_k, X_0..X_k) under the product posterior.
    double e_d = 0.0;
    std::vector<double> e_x(k + 1, 0.0), e_dx(k + 1, 0.0);
    enumerate_product(posteriors, k + 1, [&](std::span<const double> x, double w) {
      const double d = asset.cashflows.evaluate(k, x);
      e_d += w * d;
      for (std::size_t j = 0; j <= k; ++j) {
        e_x[j] += w * x[j];
        e_dx[j] += w * d * x[j];
      }
    });
    out.price += P * e_d;
    for (std::size_t j = 0; j <= k; ++j) {
      const double Tj = asset.info_specs[j].horizon;
      if (!(Tj > t) || (posteriors[j].is_discrete() && posteriors[j].outcomes().size() == 1)) {
        continue;
      }
      const double cov = e_dx[j] - e_d * e_x[j];
      out.loadings[j] += P * (asset.info_specs[j].sigma * Tj / (Tj - t)) * cov;
    }
  }
  return out;
}

double instantaneous_correlation(const VolCoefficients& a, const VolCoefficients& b) {
  const std::size_t n = std::max(a.loadings.size(), b.loadings.size());
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double x = j < a.loadings.size() ? a.loadings[j] : 0.0;
    const double y = j < b.loadings.size() ? b.loadings[j] : 0.0;
    ab += x * y;
    aa += x * x;
    bb += y * y;
  }
  if (aa == 0.0 || bb == 0.0) {
    throw DegenerateError("correlation undefined: an asset has zero volatility");
  }
  return std::clamp(ab / std::sqrt(aa * bb), -1.0, 1.0);
}

double gbm_price(double S0, double rate, double nu, double T, double t, double xi) {
  if (!(t >= 0.0 && t <= T)) throw DomainError("gbm_price requires 0 <= t <= T");
  return S0 * std::exp(rate * t + nu * xi - 0.5 * nu * nu * t);
}

MarketSimulation simulate_market(std::span<const AssetSpec> assets, const DiscountCurve& curve,
                                 const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed) {
  if (assets.empty()) throw DomainError("simulate_market: no assets");
  std::size_t lead = 0;
  for (std::size_t a = 0; a < assets.size(); ++a) {
    assets[a].validate();
    if (assets[a].factor_count() > assets[lead].factor_count()) lead = a;
  }
  const AssetSpec& ref = assets[lead];
  const std::size_t m = ref.factor_count();
  for (const auto& a : assets) {
    for (std::size_t j = 0; j < a.factor_count(); ++j) {
      if (a.info_specs[j].horizon != ref.info_specs[j].horizon ||
          a.info_specs[j].sigma != ref.info_specs[j].sigma) {
        throw DomainError("simulate_market: shared factor " + std::to_string(j) +
                          " has different information processes");
      }
    }
  }

  MarketSimulation sim{grid, {}, {}, {}, {}};
  sim.factor_draws.assign(m, std::vector<double>(n_paths));
  for (std::size_t i = 0; i < n_paths; ++i) {
    PathRng rng(seed, StreamFamily::factor, i);
    for (std::size_t j = 0; j < m; ++j) sim.factor_draws[j][i] = ref.factor_priors[j].sample(rng);
  }

  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t j = 0; j < m; ++j) {
    const auto& spec = ref.info_specs[j];
    const std::size_t kT = grid.index_of(spec.horizon);
    const TimeGrid sub = prefix(grid, kT + 1);
    const PathBundle local = sample_information_paths(spec, sim.factor_draws[j], sub, seed + j);
    PathBundle full(grid, n_paths, seed + j);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      const auto src = local.at_index(std::min(k, kT));
      std::copy(src.begin(), src.end(), full.at_index(k).begin());
    }
    const InnovationPath w = innovation_from_path(local, ref.factor_priors[j], spec);
    PathBundle wfull(grid, n_paths, seed + j);
    for (std::size_t k = 0; k < grid.size(); ++k) {
      auto dst = wfull.at_index(k);
      if (k < w.values.grid().size()) {
        const auto src = w.values.at_index(k);
        std::copy(src.begin(), src.end(), dst.begin());
      } else {
        std::fill(dst.begin(), dst.end(), nan);
      }
    }
    sim.xi.push_back(std::move(full));
    sim.innovation.push_back(std::move(wfull));
  }

  std::vector<double> xi_now(m);
  for (const auto& asset : assets) {
    PathBundle prices(grid, n_paths, seed);
    const std::size_t ma = asset.factor_count();
    for (std::size_t k = 0; k < grid.size(); ++k) {
      auto row = prices.at_index(k);
      for (std::size_t i = 0; i < n_paths; ++i) {
        for (std::size_t j = 0; j < ma; ++j) xi_now[j] = sim.xi[j].value(i, k);
        row[i] = price_multi_dividend(asset, curve, grid[k], std::span(xi_now).first(ma));
      }
    }
    sim.prices.push_back(std::move(prices));
  }
  return sim;
}

void write_asset_csv(std::ostream& out, const MarketSimulation& sim, std::size_t asset,
                     std::size_t factor_count) {
  if (asset >= sim.prices.size()) throw DomainError("write_asset_csv: asset index out of range");
  if (factor_count > sim.innovation.size()) throw DomainError("write_asset_csv: too many factors");
  const PathBundle& s = sim.prices[asset];
  const std::size_t n = s.path_count();
  CsvWriter csv(out);
  std::vector<std::string> header{"time"};
  for (std::size_t i = 0; i < n; ++i) header.push_back("S_" + std::to_string(i));
  for (std::size_t j = 0; j < factor_count; ++j) {
    for (std::size_t i = 0; i < n; ++i) {
      header.push_back("W" + std::to_string(j) + "_" + std::to_string(i));
    }
  }
  csv.header(header);
  std::vector<double> row;
  for (std::size_t k = 0; k < sim.grid.size(); ++k) {
    row.assign(1, sim.grid[k]);
    const auto sk = s.at_index(k);
    row.insert(row.end(), sk.begin(), sk.end());
    for (std::size_t j = 0; j < factor_count; ++j) {
      const auto wk = sim.innovation[j].at_index(k);
      row.insert(row.end(), wk.begin(), wk.end());
    }
    csv.row(row);
  }
}

}  // namespace infoprice
