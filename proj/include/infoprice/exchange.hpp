#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "infoprice/filtering.hpp"
#include "infoprice/market.hpp"
#include "infoprice/random.hpp"
#include "infoprice/stochastic.hpp"

namespace infoprice {

/// Quotes phi- S (buy) and phi+ S (sell) about a valuation S.
struct SpreadConfig {
  double phi_minus;
  double phi_plus;

  /// phi-+ = 1 -+ delta.
  static SpreadConfig symmetric(double delta);
  /// Throws DomainError unless 0 < phi- < 1 < phi+.
  void validate() const;
};

/// One trader: a private information process about the common dividend and
/// the observations of other processes learned at past trades.
struct TraderState {
  std::size_t id;
  InfoProcessSpec spec;
  std::vector<double> path;            // own xi at every step so far
  std::vector<Observation> knowledge;  // snapshots learned at trades, time <= now
  double valuation;                    // P_tT E[D_T | own current xi, knowledge]
};

struct TradeEvent {
  double time;
  std::size_t buyer;
  std::size_t seller;
  double price;  // midpoint of the crossed band
  double buyer_before;
  double seller_before;
  double buyer_after;
  double seller_after;
  /// Posterior entropies in nats (NaN for continuous priors).
  double buyer_entropy_before;
  double seller_entropy_before;
  double entropy_after;
};

/// Everything the exchange needs to advance one step.
struct ExchangeState {
  FactorPrior prior;
  DiscountCurve curve;
  double horizon;
  double dividend;
  double time;
  /// Correlation of the traders' bridges and a square root A (A A' = rho):
  /// bridge i is sum_k A_ik W^k with W^k independent standard bridges.
  std::vector<std::vector<double>> correlation;
  std::vector<std::vector<double>> mixing;
  std::vector<double> base_bridges;
  std::vector<PathRng> streams;
  std::vector<TraderState> traders;
};

/// Draws the dividend from the prior (factor stream 0) and starts every
/// trader at its prior valuation. Trader bridges use the trader streams.
/// An empty correlation means independent traders. Perfect correlation is
/// allowed only between traders with equal sigma.
ExchangeState init_exchange(const std::vector<InfoProcessSpec>& specs, const FactorPrior& prior,
                            const DiscountCurve& curve, std::uint64_t seed,
                            std::vector<std::vector<double>> correlation = {});

/// Advances every process to `next_time`, revalues, then checks each pair
/// (i, j), i < j, in ascending order: i buys from j when phi- S^i >= phi+ S^j
/// (and j from i symmetrically). A trade executes at the band midpoint; both
/// parties then share everything either knows and revalue to a common price.
/// No trades take place at the horizon, where every valuation is revealed.
std::vector<TradeEvent> step_exchange(ExchangeState& state, double next_time,
                                      const SpreadConfig& spread);

/// Current posterior of trader i.
PosteriorState trader_posterior(const ExchangeState& state, std::size_t i);

/// sigma_hat = sqrt(s1^2 + s2^2), xi_hat = (s1 xi1 + s2 xi2) / sigma_hat.
struct EffectiveInformation {
  double sigma;
  double xi;
};
EffectiveInformation effective_information(double xi1, double xi2, double sigma1, double sigma2);

/// First-order offset xi2 - xi1 at a trade of digital {0, 1} valuations with
/// spread 1 -+ delta: -2 delta (T - t) / (sigma T (1 - m)), m = E[X | xi1].
double epsilon_first_order(double delta, double sigma, double T, double t, double posterior_mean);

/// Same offset from (1 - delta) S(xi1) = (1 + delta) S(xi1 + eps) by root finding.
double epsilon_exact(double delta, double sigma, double T, double t, double posterior_mean);

struct MarketSimResult {
  TimeGrid grid;
  double dividend;
  std::vector<TradeEvent> events;
  /// valuations[i][k], xi[i][k]: trader i at grid point k.
  std::vector<std::vector<double>> valuations;
  std::vector<std::vector<double>> xi;
};

/// Runs the exchange over `grid` (starting at 0). Needs at least two traders
/// sharing one horizon that the grid does not pass.
MarketSimResult run_market_sim(const std::vector<InfoProcessSpec>& specs, const FactorPrior& prior,
                               const SpreadConfig& spread, const TimeGrid& grid,
                               std::uint64_t seed,
                               const DiscountCurve& curve = DiscountCurve::flat(0.0),
                               std::vector<std::vector<double>> correlation = {});

/// "time,buyer,seller,price,buyer_before,seller_before,buyer_after,seller_after".
void write_trade_log(std::ostream& out, const MarketSimResult& result);

/// "time,S_0,..,S_{n-1},xi_0,..,xi_{n-1}".
void write_valuations(std::ostream& out, const MarketSimResult& result);

}  // namespace infoprice
