#include "infoprice/infotheory.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "infoprice/error.hpp"
#include "infoprice/filtering.hpp"
#include "infoprice/numerics.hpp"
#include "infoprice/random.hpp"

namespace infoprice {

namespace {

constexpr double kComponentReach = 9.0;   // standard deviations per side, 1-D
constexpr double kBoxReach = 8.0;         // standard deviations per side, 2-D
constexpr double kGridDensity = 16.0;     // grid points per standard deviation
constexpr double kSingularGap = 1e-9;     // 1 - |rho| below this is treated as singular

const DiscretePrior& require_discrete(const FactorPrior& prior) {
  if (!prior.is_discrete()) throw DomainError("mutual information needs a discrete prior");
  return prior.as_discrete();
}

double tau_of(double t, double T) { return t * T / (T - t); }

// -ln sum_j p_j exp(-delta_ij^2 |g|^2 / 2 - delta_ij (g . z)) for component i,
// where proj = g . z and g2 = |g|^2.
double log_ratio(const DiscretePrior& d, std::size_t i, double g2, double proj,
                 std::vector<double>& scratch) {
  for (std::size_t j = 0; j < d.outcomes.size(); ++j) {
    const double delta = d.outcomes[i] - d.outcomes[j];
    scratch[j] = std::log(d.probabilities[j]) - 0.5 * delta * delta * g2 - delta * proj;
  }
  return -log_sum_exp(scratch);
}

QuadOptions component_options(std::vector<double> breakpoints, double reach) {
  QuadOptions opt;
  opt.abs_tol = 1e-14;
  opt.rel_tol = 0.0;
  opt.max_subintervals = 20000;
  breakpoints.push_back(0.0);
  std::erase_if(breakpoints, [reach](double b) { return !(b > -reach && b < reach); });
  std::sort(breakpoints.begin(), breakpoints.end());
  breakpoints.erase(std::unique(breakpoints.begin(), breakpoints.end()), breakpoints.end());
  opt.breakpoints = std::move(breakpoints);
  return opt;
}

// Where the j-th term overtakes the i-th along the signal direction: proj = -delta |g|^2 / 2.
std::vector<double> crossings(const DiscretePrior& d, std::size_t i, double g2, double scale) {
  std::vector<double> out;
  if (scale == 0.0) return out;
  for (std::size_t j = 0; j < d.outcomes.size(); ++j) {
    if (j == i) continue;
    out.push_back(-0.5 * (d.outcomes[i] - d.outcomes[j]) * g2 / scale);
  }
  return out;
}

void check_pair(const InfoProcessSpec& spec, const InfoProcessSpec& informed, double rho,
                double t) {
  if (spec.horizon != informed.horizon) {
    throw DomainError("paired information processes need a common horizon");
  }
  if (!(rho >= -1.0 && rho <= 1.0)) throw DomainError("correlation must lie in [-1, 1]");
  if (!(t >= 0.0 && t <= spec.horizon)) throw DomainError("mutual information needs 0 <= t <= T");
}

// Signal-to-noise of the pair, sqrt(u' R^+ u) with u = (s1, s2), from the
// eigenvectors (1, 1) and (1, -1) of R; +inf when a noiseless combination exists.
double reduced_pair_snr(double s1, double s2, double rho) {
  const double scale = std::max(std::abs(s1), std::abs(s2));
  const auto term = [scale](double num, double den) {
    if (den > 0.0) return num * num / den;
    return std::abs(num) > 1e-12 * scale ? INFINITY : 0.0;
  };
  const double r = std::sqrt(0.5);
  return std::sqrt(term(r * (s1 + s2), 1.0 + rho) + term(r * (s1 - s2), 1.0 - rho));
}

}  // namespace

JointDensityGrid joint_density(const FactorPrior& prior, const InfoProcessSpec& spec, double t) {
  const auto& d = require_discrete(prior);
  const double T = spec.horizon;
  if (!(t > 0.0 && t < T)) throw DomainError("joint density needs 0 < t < T");
  JointDensityGrid g;
  g.variance = t * (T - t) / T;
  const double sd = std::sqrt(g.variance);
  for (double x : d.outcomes) g.means.push_back(spec.sigma * t * x);

  const int half = static_cast<int>(kComponentReach * kGridDensity);
  for (double m : g.means) {
    for (int k = -half; k <= half; ++k) g.xi.push_back(m + sd * k / kGridDensity);
  }
  std::sort(g.xi.begin(), g.xi.end());
  g.xi.erase(std::unique(g.xi.begin(), g.xi.end()), g.xi.end());

  const auto [lo_m, hi_m] = std::minmax_element(g.means.begin(), g.means.end());
  const Interval range(*lo_m - kComponentReach * sd, *hi_m + kComponentReach * sd);
  g.marginal_xi.assign(g.xi.size(), 0.0);
  for (std::size_t i = 0; i < d.outcomes.size(); ++i) {
    const double p = d.probabilities[i];
    const double m = g.means[i];
    auto rho = [p, m, sd](double x) { return p * normal_pdf((x - m) / sd) / sd; };
    std::vector<double> row(g.xi.size());
    for (std::size_t k = 0; k < g.xi.size(); ++k) {
      row[k] = rho(g.xi[k]);
      g.marginal_xi[k] += row[k];
    }
    g.density.push_back(std::move(row));
    QuadOptions opt;
    opt.abs_tol = 1e-14;
    for (double k : {-4.0, -2.0, -1.0, 0.0, 1.0, 2.0, 4.0}) {
      if (range.contains(m + k * sd) && m + k * sd > range.lo() && m + k * sd < range.hi()) {
        opt.breakpoints.push_back(m + k * sd);
      }
    }
    g.marginal_outcome.push_back(integrate(rho, range, opt).value);
  }
  return g;
}

double entropy(const FactorPrior& prior) {
  const auto& d = require_discrete(prior);
  double h = 0.0;
  for (double p : d.probabilities) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return h;
}

double mutual_information_snr(const FactorPrior& prior, double snr) {
  const auto& d = require_discrete(prior);
  if (snr < 0.0 || std::isnan(snr)) throw DomainError("signal-to-noise must be nonnegative");
  if (snr == 0.0) return 0.0;
  if (std::isinf(snr)) return entropy(prior);
  const double g2 = snr * snr;
  std::vector<double> scratch(d.outcomes.size());
  double j = 0.0;
  for (std::size_t i = 0; i < d.outcomes.size(); ++i) {
    if (d.probabilities[i] == 0.0) continue;
    const auto f = [&](double z) {
      return normal_pdf(z) * log_ratio(d, i, g2, snr * z, scratch);
    };
    const auto opt = component_options(crossings(d, i, g2, snr), kComponentReach);
    j += d.probabilities[i] *
         integrate(f, Interval(-kComponentReach, kComponentReach), opt).value;
  }
  return std::clamp(j, 0.0, entropy(prior));
}

double mutual_information(const FactorPrior& prior, const InfoProcessSpec& spec, double t) {
  require_discrete(prior);
  const double T = spec.horizon;
  if (!(t >= 0.0 && t <= T)) throw DomainError("mutual information needs 0 <= t <= T");
  if (t == 0.0 || spec.sigma == 0.0) return 0.0;
  if (t == T) return entropy(prior);
  return mutual_information_snr(prior, std::abs(spec.sigma) * std::sqrt(tau_of(t, T)));
}

double mutual_information_pair(const FactorPrior& prior, const InfoProcessSpec& spec,
                               const InfoProcessSpec& informed, double rho, double t) {
  const auto& d = require_discrete(prior);
  check_pair(spec, informed, rho, t);
  const double T = spec.horizon;
  if (t == 0.0) return 0.0;
  const double s1 = spec.sigma;
  const double s2 = informed.sigma;
  if (1.0 - std::abs(rho) < kSingularGap) {
    const double snr = reduced_pair_snr(s1, s2, rho);
    if (t == T) return snr > 0.0 ? entropy(prior) : 0.0;
    return mutual_information_snr(prior, snr * std::sqrt(tau_of(t, T)));
  }
  if (s1 == 0.0 && s2 == 0.0) return 0.0;
  if (t == T) return entropy(prior);

  // Standardize with the Cholesky factor of [[1, rho], [rho, 1]]: g = sqrt(tau) L^{-1} (s1, s2).
  const double c = std::sqrt(1.0 - rho * rho);
  const double root_tau = std::sqrt(tau_of(t, T));
  const double g1 = root_tau * s1;
  const double g2v = root_tau * (s2 - rho * s1) / c;
  const double norm2 = g1 * g1 + g2v * g2v;
  std::vector<double> scratch(d.outcomes.size());
  const Interval box(-kBoxReach, kBoxReach);
  double j = 0.0;
  for (std::size_t i = 0; i < d.outcomes.size(); ++i) {
    if (d.probabilities[i] == 0.0) continue;
    const auto inner = [&](double z1) {
      const auto f = [&](double z2) {
        return normal_pdf(z2) * log_ratio(d, i, norm2, g1 * z1 + g2v * z2, scratch);
      };
      std::vector<double> cuts;
      if (g2v != 0.0) {
        for (std::size_t k = 0; k < d.outcomes.size(); ++k) {
          if (k == i) continue;
          cuts.push_back((-0.5 * (d.outcomes[i] - d.outcomes[k]) * norm2 - g1 * z1) / g2v);
        }
      }
      return normal_pdf(z1) * integrate(f, box, component_options(cuts, kBoxReach)).value;
    };
    std::vector<double> outer_cuts;
    if (g1 != 0.0) {
      for (std::size_t k = 0; k < d.outcomes.size(); ++k) {
        if (k == i) continue;
        outer_cuts.push_back(-0.5 * (d.outcomes[i] - d.outcomes[k]) * norm2 / g1);
      }
    }
    auto opt = component_options(outer_cuts, kBoxReach);
    opt.abs_tol = 1e-13;
    j += d.probabilities[i] * integrate(inner, box, opt).value;
  }
  return std::clamp(j, 0.0, entropy(prior));
}

double informed_information_gain(const FactorPrior& prior, const InfoProcessSpec& spec,
                                 const InfoProcessSpec& informed, double rho, double t) {
  return mutual_information_pair(prior, spec, informed, rho, t) -
         mutual_information(prior, spec, t);
}

InformationEquality price_information_equality_check(const FactorPrior& prior,
                                                     const InfoProcessSpec& spec, double t,
                                                     std::size_t n_bins, std::size_t n_samples,
                                                     std::uint64_t seed) {
  const auto& d = require_discrete(prior);
  const double T = spec.horizon;
  check_before_horizon(t, T);
  if (n_bins < 2) throw DomainError("plug-in estimate needs at least two bins");
  if (n_samples < 2) throw DomainError("plug-in estimate needs at least two samples");
  if (t == 0.0) return {0.0, 0.0, 0.0, 0.0, 0.0, true};

  const std::size_t m = d.outcomes.size();
  const double v = t * (T - t) / T;
  const double sd = std::sqrt(v);
  const double st = spec.sigma * t;
  const auto mean_price = [&](double xi) {
    return conditional_moments(posterior_single(prior, spec, t, xi)).mean;
  };

  // Equal-probability edges of the marginal law of xi_t.
  const auto cdf = [&](double x) {
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      s += d.probabilities[i] * normal_cdf((x - st * d.outcomes[i]) / sd);
    }
    return s;
  };
  const Interval reach(st * prior.min_value() - 12.0 * sd, st * prior.max_value() + 12.0 * sd);
  std::vector<double> xi_edges, s_edges;
  for (std::size_t b = 1; b < n_bins; ++b) {
    const double q = static_cast<double>(b) / static_cast<double>(n_bins);
    const double e = find_root_monotone([&](double x) { return cdf(x) - q; }, reach, 1e-12 * sd);
    xi_edges.push_back(e);
    s_edges.push_back(mean_price(e));
  }

  // Exact information in the binned price.
  double j_bin = 0.0;
  for (std::size_t b = 0; b < n_bins; ++b) {
    std::vector<double> cell(m);
    double row = 0.0;
    for (std::size_t i = 0; i < m; ++i) {
      const double m_i = st * d.outcomes[i];
      // Upper tail differences keep precision when both arguments are large.
      const auto upper = [&](std::size_t e) {
        return e + 1 < n_bins ? normal_cdf(-(xi_edges[e] - m_i) / sd) : 0.0;
      };
      const double upper_lo = b > 0 ? normal_cdf(-(xi_edges[b - 1] - m_i) / sd) : 1.0;
      const double mass = upper_lo - upper(b);
      cell[i] = d.probabilities[i] * std::max(mass, 0.0);
      row += cell[i];
    }
    for (std::size_t i = 0; i < m; ++i) {
      if (cell[i] > 0.0) j_bin += cell[i] * std::log(cell[i] / (row * d.probabilities[i]));
    }
  }

  // Simulated (S_t, D_T) pairs.
  std::vector<std::size_t> counts(n_bins * m, 0);
  std::vector<std::size_t> cell_of(n_samples);
  for (std::size_t k = 0; k < n_samples; ++k) {
    PathRng rng(seed, StreamFamily::trial, k);
    const double x = prior.sample(rng);
    const auto it = std::find(d.outcomes.begin(), d.outcomes.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - d.outcomes.begin());
    const double xi = st * x + sd * rng.normal();
    const double s = mean_price(xi);
    const std::size_t b =
        static_cast<std::size_t>(std::upper_bound(s_edges.begin(), s_edges.end(), s) -
                                 s_edges.begin());
    cell_of[k] = b * m + i;
    ++counts[cell_of[k]];
  }
  const double n = static_cast<double>(n_samples);
  std::vector<double> row(n_bins, 0.0), col(m, 0.0);
  std::size_t occupied = 0;
  for (std::size_t b = 0; b < n_bins; ++b) {
    for (std::size_t i = 0; i < m; ++i) {
      const double c = static_cast<double>(counts[b * m + i]);
      row[b] += c;
      col[i] += c;
      if (c > 0.0) ++occupied;
    }
  }
  const auto rows_used = static_cast<double>(std::count_if(row.begin(), row.end(), [](double r) { return r > 0.0; }));
  const auto cols_used = static_cast<double>(std::count_if(col.begin(), col.end(), [](double c) { return c > 0.0; }));
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t k = 0; k < n_samples; ++k) {
    const std::size_t b = cell_of[k] / m;
    const std::size_t i = cell_of[k] % m;
    const double l = std::log(static_cast<double>(counts[cell_of[k]]) * n / (row[b] * col[i]));
    sum += l;
    sum_sq += l * l;
  }
  const double plug_in = sum / n;
  const double correction = (static_cast<double>(occupied) - rows_used - cols_used + 1.0) / (2.0 * n);
  const double se = std::sqrt(std::max(0.0, sum_sq / n - plug_in * plug_in) / n);

  InformationEquality out;
  out.j_xi = mutual_information(prior, spec, t);
  out.j_price = plug_in - correction;
  out.binning_bias = std::max(0.0, out.j_xi - j_bin);
  out.std_error = se;
  out.tolerance = out.binning_bias + std::abs(correction) + 3.0 * se;
  out.agree = std::abs(out.j_xi - out.j_price) <= out.tolerance;
  return out;
}

}  // namespace infoprice
