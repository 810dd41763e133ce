#include "infoprice/options.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "infoprice/error.hpp"
#include "infoprice/kernels.hpp"
#include "infoprice/numerics.hpp"
#include "infoprice/random.hpp"

namespace infoprice {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr std::size_t kMinPaths = 100;
constexpr std::size_t kTableNodes = 2049;

double bridge_variance(double t, double T) { return t * (T - t) / T; }

// S_t(xi) and dS_t/dxi = P_tT slope Cov_t[f(X), X].
struct PriceAndSlope {
  double price;
  double slope;
};

PriceAndSlope price_and_slope(const CallSpec& call, double xi) {
  const double t = call.maturity;
  const double T = call.spec.horizon;
  const double P = call.curve.discount(t, T);
  const PosteriorState post = posterior_single(call.prior, call.spec, t, xi);
  const double ef = post.expectation([&call](double x) { return call.cash_flow(x); });
  const double ex = post.expectation([](double x) { return x; });
  const double efx = post.expectation([&call](double x) { return call.cash_flow(x) * x; });
  const double slope = single_signal_tilt(call.spec, t).slope;
  return {P * ef, P * slope * (efx - ef * ex)};
}

double price_at(const CallSpec& call, double xi) {
  const double P = call.curve.discount(call.maturity, call.spec.horizon);
  const PosteriorState post = posterior_single(call.prior, call.spec, call.maturity, xi);
  return P * post.expectation([&call](double x) { return call.cash_flow(x); });
}

// Prices attainable by S_t: the payoff range over the prior's support, discounted.
std::pair<double, double> attainable_prices(const CallSpec& call) {
  const double P = call.curve.discount(call.maturity, call.spec.horizon);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  if (call.prior.is_discrete()) {
    for (double x : call.prior.as_discrete().outcomes) {
      lo = std::min(lo, call.cash_flow(x));
      hi = std::max(hi, call.cash_flow(x));
    }
  } else {
    const Interval& s = call.prior.as_continuous().support;
    lo = std::min(call.cash_flow(s.lo()), call.cash_flow(s.hi()));
    hi = std::max(call.cash_flow(s.lo()), call.cash_flow(s.hi()));
  }
  return {P * lo, P * hi};
}

double initial_price(const CallSpec& call) {
  const PosteriorState prior = PosteriorState::from_tilt(call.prior, {}, 0.0);
  return call.curve.initial(call.spec.horizon) *
         prior.expectation([&call](double x) { return call.cash_flow(x); });
}

// Cubic Hermite interpolant of S_t on a uniform xi grid.
class PriceTable {
 public:
  PriceTable(const CallSpec& call, double lo, double hi, std::size_t nodes)
      : lo_(lo), h_((hi - lo) / static_cast<double>(nodes - 1)), s_(nodes), ds_(nodes) {
    for (std::size_t i = 0; i < nodes; ++i) {
      const auto v = price_and_slope(call, lo + h_ * static_cast<double>(i));
      s_[i] = v.price;
      ds_[i] = v.slope;
    }
  }

  double operator()(double xi) const {
    const double u = (xi - lo_) / h_;
    const std::size_t last = s_.size() - 2;
    const std::size_t k = std::min(last, static_cast<std::size_t>(std::max(0.0, std::floor(u))));
    const double s = u - static_cast<double>(k);
    const double s2 = s * s;
    const double s3 = s2 * s;
    return (2.0 * s3 - 3.0 * s2 + 1.0) * s_[k] + (s3 - 2.0 * s2 + s) * h_ * ds_[k] +
           (-2.0 * s3 + 3.0 * s2) * s_[k + 1] + (s3 - s2) * h_ * ds_[k + 1];
  }

 private:
  double lo_;
  double h_;
  std::vector<double> s_;
  std::vector<double> ds_;
};

McEstimate summarize(std::span<const double> values) {
  const auto ss = kernels::sum_and_squares(values);
  const double n = static_cast<double>(values.size());
  const double mean = ss.sum / n;
  const double var = std::max(0.0, (ss.sum_sq - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n), values.size()};
}

bool is_two_point_identity(const CallSpec& call) {
  return call.prior.is_discrete() && !call.payoff && call.prior.as_discrete().outcomes.size() == 2;
}

// S_t for each xi in the batch.
std::vector<double> batch_prices(const CallSpec& call, std::span<const double> xi) {
  const double t = call.maturity;
  const double P = call.curve.discount(t, call.spec.horizon);
  std::vector<double> s(xi.size());
  if (xi.empty()) return s;
  if (is_two_point_identity(call)) {
    const auto& d = call.prior.as_discrete();
    const double d0 = std::min(d.outcomes[0], d.outcomes[1]);
    const double d1 = std::max(d.outcomes[0], d.outcomes[1]);
    const SignalTilt tilt = single_signal_tilt(call.spec, t);
    two_point_upper_weights(call.prior, tilt.slope, tilt.quadratic, xi, s);
    for (double& v : s) v = P * (d0 + (d1 - d0) * v);
  } else if (call.prior.is_discrete()) {
    for (std::size_t i = 0; i < xi.size(); ++i) s[i] = price_at(call, xi[i]);
  } else {
    const auto [mn, mx] = std::minmax_element(xi.begin(), xi.end());
    const double pad = 1e-9 * (1.0 + std::abs(*mn) + std::abs(*mx));
    const PriceTable table(call, *mn - pad, *mx + pad, kTableNodes);
    for (std::size_t i = 0; i < xi.size(); ++i) s[i] = table(xi[i]);
  }
  return s;
}

}  // namespace

void CallSpec::validate() const {
  if (!(maturity > 0.0 && maturity < spec.horizon)) {
    throw DomainError("option maturity must satisfy 0 < t < T");
  }
  check_before_horizon(maturity, spec.horizon);
  if (!(strike >= 0.0) || !std::isfinite(strike)) throw DomainError("strike must be >= 0");
}

CriticalLevel critical_information(const CallSpec& call) {
  call.validate();
  const double K = call.strike;
  if (call.spec.sigma == 0.0) {
    const double s = price_at(call, 0.0);
    return {kNaN, K <= s ? ExerciseRegime::always : ExerciseRegime::never};
  }
  const auto [lo, hi] = attainable_prices(call);
  if (K <= lo) return {kNaN, ExerciseRegime::always};
  if (K >= hi) return {kNaN, ExerciseRegime::never};

  const auto g = [&call, K](double xi) { return price_at(call, xi) - K; };
  const auto dg = [&call](double xi) { return price_and_slope(call, xi).slope; };
  const double t = call.maturity;
  const double center = call.spec.sigma * t * call.prior.mean();
  const double w = std::sqrt(bridge_variance(t, call.spec.horizon));
  Interval bracket(center - w, center + w);
  try {
    bracket = expand_bracket(g, bracket);
  } catch (const BracketError&) {
    // K lies within numerical reach of an end of the price range.
    return {kNaN, g(center) < 0.0 ? ExerciseRegime::never : ExerciseRegime::always};
  }
  const double tol = 1e-13 * (1.0 + std::abs(bracket.lo()) + std::abs(bracket.hi()));
  return {find_root_monotone(g, bracket, tol, dg), ExerciseRegime::interior};
}

namespace {

OptionValue semianalytic(const CallSpec& call, double tol, OptionKind kind) {
  const CriticalLevel crit = critical_information(call);
  const double t = call.maturity;
  const double T = call.spec.horizon;
  const double P0t = call.curve.initial(t);
  const double P = call.curve.discount(t, T);
  const double K = call.strike;
  const double forward = initial_price(call) - P0t * K;
  if (crit.regime == ExerciseRegime::always) {
    return {kind == OptionKind::call ? forward : 0.0, crit.regime};
  }
  if (crit.regime == ExerciseRegime::never) {
    return {kind == OptionKind::call ? 0.0 : -forward, crit.regime};
  }
  const double sd = std::sqrt(bridge_variance(t, T));
  const double st = call.spec.sigma * t;
  const double sign = kind == OptionKind::call ? 1.0 : -1.0;
  const auto weight = [&](double x) {
    return sign * (P * call.cash_flow(x) - K) * normal_cdf(sign * (st * x - crit.xi_star) / sd);
  };

  if (call.prior.is_discrete()) {
    const auto& d = call.prior.as_discrete();
    double sum = 0.0;
    for (std::size_t i = 0; i < d.outcomes.size(); ++i) {
      sum += d.probabilities[i] * weight(d.outcomes[i]);
    }
    return {P0t * sum, crit.regime};
  }

  const auto& c = call.prior.as_continuous();
  QuadOptions opt;
  opt.abs_tol = tol;
  opt.rel_tol = 0.0;
  opt.max_subintervals = 20000;
  const PosteriorState prior = PosteriorState::from_tilt(call.prior, {}, 0.0);
  opt.breakpoints.assign(prior.breakpoints().begin(), prior.breakpoints().end());
  // The exercise weight switches over a width sd / (sigma t) around xi* / (sigma t).
  const double xc = crit.xi_star / st;
  for (double k : {0.0, 1.0, 2.0, 4.0, 8.0}) {
    for (double b : {xc - k * sd / st, xc + k * sd / st}) {
      if (b > c.support.lo() && b < c.support.hi()) opt.breakpoints.push_back(b);
    }
  }
  std::sort(opt.breakpoints.begin(), opt.breakpoints.end());
  opt.breakpoints.erase(std::unique(opt.breakpoints.begin(), opt.breakpoints.end()),
                        opt.breakpoints.end());
  const auto integrand = [&](double x) {
    const double p = c.density(x);
    return p > 0.0 ? p * weight(x) : 0.0;
  };
  return {P0t * integrate(integrand, c.support, opt).value, crit.regime};
}

}  // namespace

OptionValue call_price_semianalytic(const CallSpec& call, double tol) {
  return semianalytic(call, tol, OptionKind::call);
}

OptionValue put_price_semianalytic(const CallSpec& call, double tol) {
  return semianalytic(call, tol, OptionKind::put);
}

namespace {

void check_binary(const BinaryCallParams& p) {
  if (!(p.p1 > 0.0 && p.p1 < 1.0)) throw DomainError("binary call needs 0 < p1 < 1");
  if (!(p.d1 > p.d0)) throw DomainError("binary call needs d0 < d1");
  if (!(p.sigma > 0.0) || !std::isfinite(p.sigma)) throw DomainError("binary call needs sigma > 0");
  if (!(p.t > 0.0 && p.t < p.T)) throw DomainError("binary call needs 0 < t < T");
  if (!(p.K >= 0.0)) throw DomainError("binary call needs K >= 0");
}

ExerciseRegime binary_regime(const BinaryCallParams& p) {
  const double P = p.curve.discount(p.t, p.T);
  if (p.K <= P * p.d0) return ExerciseRegime::always;
  if (p.K >= P * p.d1) return ExerciseRegime::never;
  return ExerciseRegime::interior;
}

}  // namespace

BinaryExercise binary_exercise(const BinaryCallParams& p) {
  check_binary(p);
  if (binary_regime(p) != ExerciseRegime::interior) {
    throw DomainError("binary exercise levels need P_tT d0 < K < P_tT d1");
  }
  const double P = p.curve.discount(p.t, p.T);
  const double p0 = 1.0 - p.p1;
  const double tau = p.t * p.T / (p.T - p.t);
  const double delta = p.d1 - p.d0;
  const double L = std::log(p.p1 * (P * p.d1 - p.K)) - std::log(p0 * (p.K - P * p.d0));
  const double half = 0.5 * p.sigma * p.sigma * delta * delta * tau;
  const double scale = p.sigma * delta * std::sqrt(tau);
  return {(L + half) / scale, (L - half) / scale};
}

OptionValue binary_call_price(const BinaryCallParams& p) {
  check_binary(p);
  const double P0t = p.curve.initial(p.t);
  const double P = p.curve.discount(p.t, p.T);
  const double p0 = 1.0 - p.p1;
  const ExerciseRegime regime = binary_regime(p);
  if (regime == ExerciseRegime::always) {
    const double S0 = p.curve.initial(p.T) * (p0 * p.d0 + p.p1 * p.d1);
    return {S0 - P0t * p.K, regime};
  }
  if (regime == ExerciseRegime::never) return {0.0, regime};
  const BinaryExercise u = binary_exercise(p);
  return {P0t * (p.p1 * (P * p.d1 - p.K) * normal_cdf(u.u_plus) -
                 p0 * (p.K - P * p.d0) * normal_cdf(u.u_minus)),
          regime};
}

double binary_delta(const BinaryCallParams& p) {
  check_binary(p);
  const ExerciseRegime regime = binary_regime(p);
  if (regime == ExerciseRegime::always) return 1.0;
  if (regime == ExerciseRegime::never) return 0.0;
  const double P = p.curve.discount(p.t, p.T);
  const BinaryExercise u = binary_exercise(p);
  return ((P * p.d1 - p.K) * normal_cdf(u.u_plus) + (p.K - P * p.d0) * normal_cdf(u.u_minus)) /
         (P * (p.d1 - p.d0));
}

double bridge_density_ratio(const FactorPrior& prior, const InfoProcessSpec& spec, double t,
                            double xi) {
  check_before_horizon(t, spec.horizon);
  const SignalTilt s = single_signal_tilt(spec, t);
  return std::exp(PosteriorState::from_tilt(prior, {s.slope * xi, s.quadratic}, t).log_evidence());
}

McEstimate mc_option_price(const CallSpec& call, std::size_t n_paths, std::uint64_t seed,
                           OptionKind kind) {
  call.validate();
  if (n_paths < kMinPaths) throw DomainError("mc_option_price needs at least 100 paths");
  const double t = call.maturity;
  const double st = call.spec.sigma * t;
  const double sd = std::sqrt(bridge_variance(t, call.spec.horizon));
  std::vector<double> xi(n_paths);
  for (std::size_t i = 0; i < n_paths; ++i) {
    PathRng rng(seed, StreamFamily::trial, i);
    const double x = call.prior.sample(rng);
    xi[i] = st * x + sd * rng.normal();
  }
  std::vector<double> v = batch_prices(call, xi);
  const double P0t = call.curve.initial(t);
  const double K = call.strike;
  for (double& s : v) {
    s = P0t * (kind == OptionKind::call ? std::max(s - K, 0.0) : std::max(K - s, 0.0));
  }
  return summarize(v);
}

McEstimate mc_option_price_bridge(const CallSpec& call, std::size_t n_paths, std::uint64_t seed) {
  call.validate();
  if (n_paths < kMinPaths) throw DomainError("mc_option_price_bridge needs at least 100 paths");
  if (!call.prior.is_discrete()) {
    throw DomainError("mc_option_price_bridge supports discrete priors only");
  }
  const double t = call.maturity;
  const double sd = std::sqrt(bridge_variance(t, call.spec.horizon));
  std::vector<double> xi(n_paths);
  for (std::size_t i = 0; i < n_paths; ++i) {
    PathRng rng(seed, StreamFamily::trial, i);
    xi[i] = sd * rng.normal();
  }
  const std::vector<double> s = batch_prices(call, xi);
  const double P0t = call.curve.initial(t);
  std::vector<double> v(n_paths);
  for (std::size_t i = 0; i < n_paths; ++i) {
    const double phi = bridge_density_ratio(call.prior, call.spec, t, xi[i]);
    v[i] = P0t * phi * std::max(s[i] - call.strike, 0.0);
  }
  return summarize(v);
}

}  // namespace infoprice
