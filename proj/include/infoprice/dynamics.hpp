#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "infoprice/filtering.hpp"
#include "infoprice/market.hpp"
#include "infoprice/stochastic.hpp"

namespace infoprice {

/// W_t = xi_t - int_0^t (sigma T E_s[X] - xi_s) / (T - s) ds, one path per
/// column of the source bundle. Only the grid prefix before the horizon
/// guard band is kept; `grid` is that prefix.
struct InnovationPath {
  PathBundle values;
  std::uint64_t source_seed;
};

/// Compensator by the trapezoid rule on the grid of `xi`.
InnovationPath innovation_from_path(const PathBundle& xi, const FactorPrior& prior,
                                    const InfoProcessSpec& spec);

/// Single path version: `xi` holds one value per point of `grid`.
std::vector<double> innovation_from_path(std::span<const double> xi, const FactorPrior& prior,
                                         const InfoProcessSpec& spec, const TimeGrid& grid);

struct SdeCoefficients {
  double drift;      // r_t S_t
  double diffusion;  // P_tT (sigma T / (T - t)) Var_t[X]
};

/// dS_t = r_t S_t dt + P_tT (sigma T/(T-t)) Var_t[X] dW_t for S_t = P_tT E_t[X].
SdeCoefficients sde_coefficients_single(const FactorPrior& prior, const InfoProcessSpec& spec,
                                        const DiscountCurve& curve, double t, double xi);

/// Loadings of dS_t on each factor's innovation:
/// sum over live k of P_tTk (sigma_j T_j / (T_j - t)) Cov_t[D_Tk, X_j].
/// Loadings of expired factors are zero.
struct VolCoefficients {
  double time;
  double price;
  std::vector<double> loadings;
};

VolCoefficients vol_coefficients_multi(const AssetSpec& asset, const DiscountCurve& curve,
                                       double t, std::span<const PosteriorState> posteriors);

/// Normalized inner product of two loading vectors (factors matched by
/// index, missing entries are zero). Throws DegenerateError when either
/// asset has zero volatility.
double instantaneous_correlation(const VolCoefficients& a, const VolCoefficients& b);

/// S_t = S0 exp(r t + nu xi - nu^2 t / 2).
double gbm_price(double S0, double rate, double nu, double T, double t, double xi);

/// Joint simulation of assets whose factors are shared by position: an asset
/// with m factors uses factors 0..m-1 of the longest asset. Factor j is drawn
/// from its prior and revealed by its own information process on [0, T_j];
/// after T_j its process is frozen at xi_Tj. Prices are ex-dividend.
struct MarketSimulation {
  TimeGrid grid;
  /// factor_draws[j][i]: value of factor j on path i.
  std::vector<std::vector<double>> factor_draws;
  /// xi[j]: information process of factor j on the full grid.
  std::vector<PathBundle> xi;
  /// prices[a]: price of asset a on the full grid.
  std::vector<PathBundle> prices;
  /// innovation[j]: W^j on the full grid, NaN from the guard band of T_j on.
  std::vector<PathBundle> innovation;
};

/// `grid` must contain every payment date.
MarketSimulation simulate_market(std::span<const AssetSpec> assets, const DiscountCurve& curve,
                                 const TimeGrid& grid, std::size_t n_paths, std::uint64_t seed);

/// CSV for one asset: header "time,S_0,..,S_{n-1},W0_0,.." with the
/// innovation of every factor the asset depends on.
void write_asset_csv(std::ostream& out, const MarketSimulation& sim, std::size_t asset,
                     std::size_t factor_count);

}  // namespace infoprice
