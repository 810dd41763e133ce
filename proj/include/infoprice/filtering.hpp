#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "infoprice/market.hpp"
#include "infoprice/numerics.hpp"
#include "infoprice/stochastic.hpp"

namespace infoprice {

/// Times closer than this fraction of T to the horizon are rejected;
/// callers use reveal_at_horizon instead.
inline constexpr double kHorizonGuard = 1e-9;

/// Throws HorizonError unless 0 <= t < T (1 - kHorizonGuard).
void check_before_horizon(double t, double horizon);

/// Gaussian log-likelihood of the observations as a function of x, up to
/// x-independent terms: linear * x - quadratic * x^2 / 2.
struct LikelihoodTilt {
  double linear = 0.0;
  double quadratic = 0.0;
  bool is_zero() const noexcept { return linear == 0.0 && quadratic == 0.0; }
};

/// Law of one factor given the information available at time t.
///
/// Discrete posteriors hold normalized weights over outcomes (a revealed
/// value is a single atom). Continuous posteriors hold the tilt applied to
/// the prior density together with its normalizing constant.
class PosteriorState {
 public:
  /// Applies `tilt` to `prior`; with a zero tilt the prior comes back unchanged.
  static PosteriorState from_tilt(const FactorPrior& prior, LikelihoodTilt tilt, double time);
  static PosteriorState from_weights(const FactorPrior& prior, std::vector<double> outcomes,
                                     std::vector<double> weights, LikelihoodTilt tilt,
                                     double time);
  static PosteriorState point_mass(const FactorPrior& prior, double x, double time);

  double time() const noexcept { return time_; }
  const FactorPrior& prior() const noexcept { return prior_; }
  LikelihoodTilt tilt() const noexcept { return tilt_; }
  bool is_discrete() const noexcept { return discrete_; }

  /// Discrete representation (throws DomainError when continuous).
  std::span<const double> outcomes() const;
  std::span<const double> weights() const;

  /// Posterior density (throws DomainError when discrete).
  double density(double x) const;
  const Interval& support() const;
  /// Points around the posterior bulk; splitting quadrature there keeps it accurate.
  std::span<const double> breakpoints() const noexcept { return breakpoints_; }

  /// E[f(X)] under the posterior.
  double expectation(const std::function<double(double)>& f) const;

  /// ln of the prior expectation of exp(tilt), the normalizing constant of
  /// the posterior (0 for a zero tilt, NaN for point masses).
  double log_evidence() const noexcept { return log_evidence_; }

  /// Weighted nodes reproducing the posterior: the atoms themselves when
  /// discrete, composite Gauss-Legendre nodes (weights renormalized) otherwise.
  struct Atoms {
    std::vector<double> x;
    std::vector<double> w;
  };
  Atoms atoms(std::size_t nodes_per_panel = 24) const;

 private:
  PosteriorState(FactorPrior prior, double time, LikelihoodTilt tilt)
      : prior_(std::move(prior)), time_(time), tilt_(tilt), support_(0.0, 1.0) {}

  FactorPrior prior_;
  double time_;
  LikelihoodTilt tilt_;
  bool discrete_ = true;
  std::vector<double> outcomes_;
  std::vector<double> weights_;
  Interval support_;
  double log_shift_ = 0.0;
  double normalizer_ = 1.0;
  double log_evidence_ = 0.0;
  std::vector<double> breakpoints_;

  friend PosteriorState posterior_single(const FactorPrior&, const InfoProcessSpec&, double,
                                         double);
};

/// Tilt produced by one observation xi at time t:
/// linear = slope * xi with slope = T sigma / (T - t), quadratic = T sigma^2 t / (T - t).
struct SignalTilt {
  double slope;
  double quadratic;
};
SignalTilt single_signal_tilt(const InfoProcessSpec& spec, double t);

/// p_t(x) proportional to p(x) exp[(T/(T-t))(sigma x xi - sigma^2 x^2 t / 2)].
PosteriorState posterior_single(const FactorPrior& prior, const InfoProcessSpec& spec, double t,
                                double xi);

/// Point mass at xi_T / (sigma T). Discrete priors snap to the nearest
/// outcome within 1e-9 sigma T; farther values throw DomainError.
/// sigma = 0 throws DegenerateError.
PosteriorState reveal_at_horizon(const FactorPrior& prior, const InfoProcessSpec& spec,
                                 double xi_T);

/// One observed value of one information process about a single factor.
struct Observation {
  std::size_t process;
  double time;
  double value;
  InfoProcessSpec spec;
};

/// Observations of several information processes about the same factor.
/// Processes share the horizon; their bridges are correlated through a
/// constant matrix rho, so Cov[beta_a, beta_b] = rho min(t_a, t_b)(T - max)/T.
class ObservationSet {
 public:
  /// Identity correlation.
  explicit ObservationSet(std::size_t process_count);
  /// Symmetric, unit diagonal, positive semidefinite (to 1e-12).
  explicit ObservationSet(std::vector<std::vector<double>> correlation);

  void add(Observation obs);

  std::size_t process_count() const noexcept { return correlation_.size(); }
  double correlation(std::size_t p, std::size_t q) const { return correlation_.at(p).at(q); }
  const std::vector<Observation>& observations() const noexcept { return observations_; }
  bool empty() const noexcept { return observations_.empty(); }
  /// Latest observation time (0 when empty).
  double latest_time() const noexcept;

  /// Same information without redundant entries: observations at t = 0, of
  /// zero-sigma processes uncorrelated with every other observed process,
  /// and exact duplicates (same process and time, or correlation one with
  /// equal sigma and time) are dropped. Remaining order is (process, time).
  ObservationSet reduced() const;

 private:
  std::vector<std::vector<double>> correlation_;
  std::vector<Observation> observations_;
};

/// Weights u with linear = u . y and the fixed quadratic term, for the
/// observation design in `obs` (observed values are ignored). Assumes `obs`
/// is already reduced. Throws DegenerateError when the covariance is singular
/// (reciprocal condition number below 1e-12).
struct FusionWeights {
  std::vector<double> u;
  double quadratic;
};
FusionWeights fusion_weights(const ObservationSet& obs);

/// Posterior given every observation in `obs` (a single one delegates to posterior_single).
PosteriorState posterior_multi_signal(const FactorPrior& prior, const ObservationSet& obs);

struct Moments {
  double mean;
  double variance;
};
Moments conditional_moments(const PosteriorState& state);

/// S_t = P_tT E[payoff(X) | xi_t] (identity payoff when empty).
double price_single_dividend(const FactorPrior& prior, const InfoProcessSpec& spec,
                             const DiscountCurve& curve, double t, double xi,
                             const std::function<double(double)>& payoff = {});

/// Per-factor posterior at time t: revealed point masses for factors whose
/// date has passed (from xi_values[j] taken at T_j), filtered laws otherwise.
/// xi_values needs one entry per factor.
std::vector<PosteriorState> factor_posteriors(const AssetSpec& asset, double t,
                                              std::span<const double> xi_values);

/// Calls visit(x, w) for every node of the product law of the first `count`
/// posteriors. Weights sum to one.
void enumerate_product(std::span<const PosteriorState> posteriors, std::size_t count,
                       const std::function<void(std::span<const double>, double)>& visit);

/// Sum over T_k > t of P_tTk E[D_Tk | F_t]. xi_values holds, for every
/// factor, its information process value at min(t, T_j).
double price_multi_dividend(const AssetSpec& asset, const DiscountCurve& curve, double t,
                            std::span<const double> xi_values);

/// Posterior weight of the larger atom of a two-point prior for a batch of
/// linear statistics s: logistic(ln(p1/p0) + slope (d1-d0) s - quadratic (d1^2-d0^2)/2).
/// With slope and quadratic from single_signal_tilt, s is the observed xi.
void two_point_upper_weights(const FactorPrior& prior, double slope, double quadratic,
                             std::span<const double> s, std::span<double> out);

}  // namespace infoprice
