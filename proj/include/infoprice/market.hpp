#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "infoprice/numerics.hpp"
#include "infoprice/random.hpp"
#include "infoprice/stochastic.hpp"

namespace infoprice {

/// Per-side tail mass left outside the truncated support of a continuous
/// prior. Far below the 1e-12 budget so that posteriors tilted towards a tail
/// still see their mass inside the support.
inline constexpr double kPriorTailMass = 1e-30;

struct DiscretePrior {
  std::vector<double> outcomes;
  std::vector<double> probabilities;
};

struct ContinuousPrior {
  std::function<double(double)> density;
  Interval support;
  /// Inverse distribution function, used for sampling. May be empty.
  std::function<double(double)> quantile;
  std::string name;
};

/// A priori law of one X-factor.
class FactorPrior {
 public:
  /// Probabilities strictly positive, summing to one within 1e-12.
  static FactorPrior discrete(std::vector<double> outcomes, std::vector<double> probabilities);
  /// Digital factor on {0, 1} with P(X = 1) = p (p = 1 gives the single atom {1}).
  static FactorPrior digital(double p);
  /// Density must integrate to one within 1e-9 over the support.
  static FactorPrior continuous(std::function<double(double)> density, Interval support,
                                std::function<double(double)> quantile = {},
                                std::string name = "continuous");
  static FactorPrior gaussian(double mean, double sd);
  /// X = exp(mu + s Z) with Z standard normal.
  static FactorPrior lognormal(double mu, double s);
  static FactorPrior uniform(double lo, double hi);

  bool is_discrete() const noexcept { return std::holds_alternative<DiscretePrior>(law_); }
  const DiscretePrior& as_discrete() const;
  const ContinuousPrior& as_continuous() const;

  double mean() const;
  double variance() const;
  /// Smallest and largest values the factor can take (support ends when continuous).
  double min_value() const;
  double max_value() const;

  double sample(PathRng& rng) const;

 private:
  explicit FactorPrior(std::variant<DiscretePrior, ContinuousPrior> law) : law_(std::move(law)) {}
  std::variant<DiscretePrior, ContinuousPrior> law_;
};

/// Deterministic discount bond system P_tT = P_0T / P_0t.
class DiscountCurve {
 public:
  static DiscountCurve flat(double rate);
  /// Log-linear interpolation of (t, P_0t) pairs; P_00 = 1 is implied.
  /// Extrapolates the last forward rate beyond the table.
  static DiscountCurve table(std::vector<std::pair<double, double>> points);

  /// P_0t.
  double initial(double t) const;
  /// P_tT; exactly 1 when t == T. Throws DomainError when t > T.
  double discount(double t, double T) const;
  /// Instantaneous forward rate -d ln P_0t / dt.
  double forward_rate(double t) const;

 private:
  DiscountCurve() = default;
  double flat_rate_ = 0.0;
  bool is_flat_ = true;
  std::vector<double> times_;
  std::vector<double> log_discounts_;
};

/// D_Tk = flow_k(X_1, ..., X_k). The function receives exactly k values.
using CashFlowFunction = std::function<double(std::span<const double>)>;

struct CashFlowSpec {
  std::vector<double> dates;
  std::vector<CashFlowFunction> flows;

  std::size_t size() const noexcept { return dates.size(); }
  /// Evaluates flow k (0-based) on the first k + 1 entries of `factors`.
  double evaluate(std::size_t k, std::span<const double> factors) const;
};

/// Cash flows on dates T_1 < ... < T_n, factor X_Tk revealed at T_k by its
/// own information process.
struct AssetSpec {
  CashFlowSpec cashflows;
  std::vector<FactorPrior> factor_priors;
  std::vector<InfoProcessSpec> info_specs;

  std::size_t factor_count() const noexcept { return factor_priors.size(); }
  /// Throws DomainError when counts, dates or horizons are inconsistent.
  void validate() const;
};

/// One cash flow D_T = payoff(X_T) (identity when payoff is empty).
AssetSpec build_single_dividend(FactorPrior prior, InfoProcessSpec spec,
                                std::function<double(double)> payoff = {});

/// D_T1 = c X1, D_T2 = (c + n) X1 X2 with digital factors.
AssetSpec build_two_coupon_bond(double coupon, double principal, double p1, double p2,
                                std::pair<double, double> sigmas, double T1, double T2);

/// D_T1 = c X1 + R1 (c + n)(1 - X1), D_T2 = (c + n) X1 X2 + R2 (c + n) X1 (1 - X2).
AssetSpec build_recovery_bond(double coupon, double principal, double R1, double R2, double p1,
                              double p2, std::pair<double, double> sigmas, double T1, double T2);

/// Coefficients of the restaurant flow written as
/// D_T2 = n2 R2c + beta X1 + gamma X2 + delta X1 X2.
struct RestaurantConstants {
  double beta;
  double gamma;
  double delta;
};
RestaurantConstants restaurant_constants(double n2, double R2a, double R2b, double R2c);

struct FactoryRestaurant {
  AssetSpec factory;     // one flow at T1
  AssetSpec restaurant;  // zero flow at T1, then D_T2 (factors X1 and X2)
};

/// Factory bond D_T1 = n1 X1 + R1 n1 (1 - X1) and restaurant bond
/// D_T2 = n2 [X1 X2 + R2a (1-X1) X2 + R2b X1 (1-X2) + R2c (1-X1)(1-X2)],
/// sharing factor X1 and its information process.
FactoryRestaurant build_factory_restaurant(double n1, double n2, double R1, double R2a,
                                           double R2b, double R2c, double p1, double p2,
                                           std::pair<double, double> sigmas, double T1,
                                           double T2);

/// Reference parameter set: n1 = 100, n2 = 80, R1 = 0.4, R2a = 0.2,
/// R2b = 0.5, R2c = 0.1, p1 = 0.9, p2 = 0.8, sigma = 0.3 for both factors,
/// T1 = 1, T2 = 2.
FactoryRestaurant factory_restaurant_preset();

/// Single distribution S_T = S0 exp(rT + nu sqrt(T) X - nu^2 T / 2) with X
/// standard normal and flow rate 1/sqrt(T): the geometric Brownian motion case.
AssetSpec build_gbm_asset(double S0, double rate, double nu, double T);

}  // namespace infoprice
