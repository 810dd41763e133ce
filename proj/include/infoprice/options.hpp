#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>

#include "infoprice/filtering.hpp"
#include "infoprice/market.hpp"

namespace infoprice {

/// European call (or put) with maturity t on the price S_t = P_tT E_t[payoff(X)].
struct CallSpec {
  double strike;
  double maturity;
  FactorPrior prior;
  InfoProcessSpec spec;
  DiscountCurve curve;
  /// Cash flow as a function of the factor; identity when empty.
  std::function<double(double)> payoff{};

  /// Throws DomainError unless 0 < t < T and K >= 0.
  void validate() const;
  double cash_flow(double x) const { return payoff ? payoff(x) : x; }
};

/// Where the strike sits relative to the prices S_t can take.
enum class ExerciseRegime {
  interior,  // a critical level xi* separates exercise from expiry worthless
  always,    // K at or below every attainable price
  never,     // K at or above every attainable price
};

struct CriticalLevel {
  double xi_star;  // NaN unless interior
  ExerciseRegime regime;
};

/// xi* with S_t(xi*) = K, by a safeguarded Newton search on an expanding bracket.
CriticalLevel critical_information(const CallSpec& call);

struct OptionValue {
  double price;
  ExerciseRegime regime;
};

/// C_0 = P_0t sum/int p(x) (P_tT f(x) - K) N((sigma x t - xi*) / sqrt(t (T - t) / T)) dx.
OptionValue call_price_semianalytic(const CallSpec& call, double tol = 1e-11);

/// Put counterpart with weight N((xi* - sigma x t) / sqrt(v)) and payoff K - P_tT f(x).
OptionValue put_price_semianalytic(const CallSpec& call, double tol = 1e-11);

/// Call on a bond paying d0 or d1 (d0 < d1) with P(d1) = p1.
struct BinaryCallParams {
  double p1;
  double d0;
  double d1;
  double sigma;
  double t;
  double T;
  double K;
  DiscountCurve curve;
};

/// u+ and u- with tau = tT / (T - t).
struct BinaryExercise {
  double u_plus;
  double u_minus;
};
BinaryExercise binary_exercise(const BinaryCallParams& p);

/// C_0 = P_0t [p1 (P_tT d1 - K) N(u+) - p0 (K - P_tT d0) N(u-)].
/// Strikes outside (P_tT d0, P_tT d1) give S_0 - P_0t K or 0.
OptionValue binary_call_price(const BinaryCallParams& p);

/// dC_0/dS_0 = [(P_tT d1 - K) N(u+) + (K - P_tT d0) N(u-)] / (P_tT (d1 - d0)),
/// with S_0 entering through p1 = (S_0 / P_0T - d0) / (d1 - d0).
double binary_delta(const BinaryCallParams& p);

/// Density of Q relative to the bridge measure on F_t:
/// Phi_t = sum/int p(x) exp[(T/(T-t))(sigma x xi - sigma^2 x^2 t / 2)].
double bridge_density_ratio(const FactorPrior& prior, const InfoProcessSpec& spec, double t,
                            double xi);

enum class OptionKind { call, put };

struct McEstimate {
  double estimate;
  double std_error;
  std::size_t paths;
};

/// P_0t E^Q[(S_t - K)^+] from n_paths draws of (X, xi_t); path i uses the
/// trial stream i. Two-point priors with the identity payoff run through the
/// batch kernels; continuous priors price S_t on a Hermite table in xi whose
/// nodes come from filtering.
McEstimate mc_option_price(const CallSpec& call, std::size_t n_paths, std::uint64_t seed,
                           OptionKind kind = OptionKind::call);

/// Same value under the bridge measure: xi_t ~ N(0, t(T-t)/T), payoff weighted by Phi_t.
McEstimate mc_option_price_bridge(const CallSpec& call, std::size_t n_paths, std::uint64_t seed);

}  // namespace infoprice
