#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "infoprice/market.hpp"
#include "infoprice/stochastic.hpp"

namespace infoprice {

/// Joint law of (xi_t, D_T) for a discrete prior: rho(xi, i) = p_i N(xi; sigma d_i t, t(T-t)/T).
struct JointDensityGrid {
  std::vector<double> xi;
  /// density[i][k] = rho(xi[k], i).
  std::vector<std::vector<double>> density;
  /// rho(xi[k]) = sum_i rho(xi[k], i).
  std::vector<double> marginal_xi;
  /// rho(i) = int rho(xi, i) dxi by quadrature.
  std::vector<double> marginal_outcome;
  std::vector<double> means;
  double variance;
};

/// Grid points cluster around every component mean (9 standard deviations
/// each side, 16 points per standard deviation). Needs 0 < t < T.
JointDensityGrid joint_density(const FactorPrior& prior, const InfoProcessSpec& spec, double t);

/// Shannon entropy of a discrete prior in nats (0 ln 0 = 0).
double entropy(const FactorPrior& prior);

/// J(xi_t; D_T) in nats. J(0) = 0, J(T) = entropy (sigma > 0), sigma = 0 gives 0.
double mutual_information(const FactorPrior& prior, const InfoProcessSpec& spec, double t);

/// J for component means separated by `snr` (d_i - d_j) standard deviations;
/// a single signal has snr = sigma sqrt(tT/(T-t)).
double mutual_information_snr(const FactorPrior& prior, double snr);

/// J((xi_t, xi'_t); D_T) for two processes with a common horizon whose
/// bridges have correlation rho, by 2-D quadrature over each component.
/// A near-singular correlation (1 - |rho| < 1e-9) uses the exact 1-D reduction.
double mutual_information_pair(const FactorPrior& prior, const InfoProcessSpec& spec,
                               const InfoProcessSpec& informed, double rho, double t);

/// Delta J = J((xi, xi'); D) - J(xi; D).
double informed_information_gain(const FactorPrior& prior, const InfoProcessSpec& spec,
                                 const InfoProcessSpec& informed, double rho, double t);

/// Plug-in estimate of J(S_t; D_T) from simulated pairs against the quadrature J(xi_t; D_T).
struct InformationEquality {
  double j_xi;
  double j_price;        // Miller-Madow corrected plug-in estimate
  double binning_bias;   // J(xi) - J(binned S), exact for the bins used
  double std_error;
  double tolerance;      // binning_bias + Miller-Madow correction + 3 std_error
  bool agree;
};

/// Bins are equal-probability quantiles of xi_t mapped through S_t(xi).
InformationEquality price_information_equality_check(const FactorPrior& prior,
                                                     const InfoProcessSpec& spec, double t,
                                                     std::size_t n_bins, std::size_t n_samples,
                                                     std::uint64_t seed);

}  // namespace infoprice
