#include "infoprice/filtering.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

#include "infoprice/error.hpp"
#include "infoprice/kernels.hpp"

namespace infoprice {

namespace {

constexpr std::size_t kScanPoints = 2049;

QuadOptions posterior_quad_options(std::span<const double> breakpoints) {
  QuadOptions opts;
  opts.abs_tol = 1e-14;
  opts.rel_tol = 1e-12;
  opts.breakpoints.assign(breakpoints.begin(), breakpoints.end());
  opts.initial_panels = 2;
  opts.max_subintervals = 20000;
  return opts;
}

double tilt_value(const LikelihoodTilt& tilt, double x) {
  return tilt.linear * x - 0.5 * tilt.quadratic * x * x;
}

}  // namespace

void check_before_horizon(double t, double horizon) {
  if (!std::isfinite(t) || t < 0.0) throw DomainError("time must be finite and >= 0");
  if (t >= horizon * (1.0 - kHorizonGuard)) {
    throw HorizonError("time " + std::to_string(t) + " is at or beyond the horizon " +
                       std::to_string(horizon) + "; use reveal_at_horizon");
  }
}

PosteriorState PosteriorState::from_weights(const FactorPrior& prior, std::vector<double> outcomes,
                                            std::vector<double> weights, LikelihoodTilt tilt,
                                            double time) {
  if (outcomes.size() != weights.size() || outcomes.empty()) {
    throw DomainError("posterior needs matching, non-empty outcomes and weights");
  }
  PosteriorState state(prior, time, tilt);
  state.discrete_ = true;
  state.outcomes_ = std::move(outcomes);
  state.weights_ = std::move(weights);
  return state;
}

PosteriorState PosteriorState::point_mass(const FactorPrior& prior, double x, double time) {
  auto state = from_weights(prior, {x}, {1.0}, {}, time);
  state.log_evidence_ = std::numeric_limits<double>::quiet_NaN();
  return state;
}

PosteriorState PosteriorState::from_tilt(const FactorPrior& prior, LikelihoodTilt tilt,
                                         double time) {
  if (!std::isfinite(tilt.linear) || !std::isfinite(tilt.quadratic) || tilt.quadratic < 0.0) {
    throw DomainError("likelihood tilt must be finite with nonnegative quadratic term");
  }
  if (prior.is_discrete()) {
    const auto& d = prior.as_discrete();
    if (tilt.is_zero()) return from_weights(prior, d.outcomes, d.probabilities, tilt, time);
    std::vector<double> logw(d.outcomes.size());
    for (std::size_t i = 0; i < logw.size(); ++i) {
      logw[i] = std::log(d.probabilities[i]) + tilt_value(tilt, d.outcomes[i]);
    }
    auto state = from_weights(prior, d.outcomes, normalize_log_weights(logw), tilt, time);
    state.log_evidence_ = log_sum_exp(logw);
    return state;
  }

  const auto& c = prior.as_continuous();
  PosteriorState state(prior, time, tilt);
  state.discrete_ = false;
  state.support_ = c.support;

  // Locate the bulk of p(x) exp(tilt) on a scan grid.
  const double lo = c.support.lo();
  const double h = c.support.width() / static_cast<double>(kScanPoints - 1);
  std::vector<double> xs(kScanPoints);
  for (std::size_t i = 0; i < kScanPoints; ++i) xs[i] = lo + h * static_cast<double>(i);
  if (tilt.quadratic > 0.0) {
    const double x0 = tilt.linear / tilt.quadratic;
    if (c.support.contains(x0)) xs.push_back(x0);
  }
  std::sort(xs.begin(), xs.end());
  auto log_target = [&c, &tilt](double x) { return std::log(c.density(x)) + tilt_value(tilt, x); };
  std::vector<double> lt(xs.size());
  std::size_t peak = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    lt[i] = log_target(xs[i]);
    if (lt[i] > lt[peak]) peak = i;
  }
  if (!std::isfinite(lt[peak])) throw DegenerateError("posterior has no mass on the support");
  const double peak_x = xs[peak];
  std::size_t left = peak;
  while (left > 0 && lt[left] > lt[peak] - 0.5) --left;
  std::size_t right = peak;
  while (right + 1 < xs.size() && lt[right] > lt[peak] - 0.5) ++right;
  double width = std::max(h, 0.5 * (xs[right] - xs[left]));
  if (tilt.quadratic > 0.0) width = std::min(width, 1.0 / std::sqrt(tilt.quadratic));

  state.breakpoints_.push_back(peak_x);
  for (double k = 0.5; k * width < c.support.width(); k *= 2.0) {
    for (double b : {peak_x - k * width, peak_x + k * width}) {
      if (b > c.support.lo() && b < c.support.hi()) state.breakpoints_.push_back(b);
    }
  }
  std::sort(state.breakpoints_.begin(), state.breakpoints_.end());

  if (tilt.is_zero()) {
    state.log_shift_ = 0.0;
    state.normalizer_ = 1.0;
    return state;
  }
  state.log_shift_ = lt[peak];
  const double shift = state.log_shift_;
  const auto unnormalized = [&c, tilt, shift](double x) {
    return std::exp(std::log(c.density(x)) + tilt_value(tilt, x) - shift);
  };
  state.normalizer_ =
      integrate(unnormalized, c.support, posterior_quad_options(state.breakpoints_)).value;
  if (!(state.normalizer_ > 0.0) || !std::isfinite(state.normalizer_)) {
    throw DegenerateError("posterior normalizing constant is not positive");
  }
  state.log_evidence_ = shift + std::log(state.normalizer_);
  return state;
}

std::span<const double> PosteriorState::outcomes() const {
  if (!discrete_) throw DomainError("posterior is continuous");
  return outcomes_;
}

std::span<const double> PosteriorState::weights() const {
  if (!discrete_) throw DomainError("posterior is continuous");
  return weights_;
}

double PosteriorState::density(double x) const {
  if (discrete_) throw DomainError("posterior is discrete");
  if (!support_.contains(x)) return 0.0;
  const auto& c = prior_.as_continuous();
  if (tilt_.is_zero()) return c.density(x);
  return std::exp(std::log(c.density(x)) + tilt_value(tilt_, x) - log_shift_) / normalizer_;
}

const Interval& PosteriorState::support() const {
  if (discrete_) throw DomainError("posterior is discrete");
  return support_;
}

double PosteriorState::expectation(const std::function<double(double)>& f) const {
  if (discrete_) {
    double s = 0.0;
    for (std::size_t i = 0; i < outcomes_.size(); ++i) s += weights_[i] * f(outcomes_[i]);
    return s;
  }
  return integrate([this, &f](double x) { return f(x) * density(x); }, support_,
                   posterior_quad_options(breakpoints_))
      .value;
}

PosteriorState::Atoms PosteriorState::atoms(std::size_t nodes_per_panel) const {
  if (discrete_) return {outcomes_, weights_};
  std::vector<double> cuts{support_.lo()};
  for (double b : breakpoints_) cuts.push_back(b);
  cuts.push_back(support_.hi());
  Atoms a;
  double total = 0.0;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    if (!(cuts[s + 1] > cuts[s])) continue;
    const auto rule = gauss_legendre(nodes_per_panel, Interval(cuts[s], cuts[s + 1]));
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
      const double w = rule.weights[i] * density(rule.nodes[i]);
      if (w > 0.0) {
        a.x.push_back(rule.nodes[i]);
        a.w.push_back(w);
        total += w;
      }
    }
  }
  for (double& w : a.w) w /= total;
  return a;
}

SignalTilt single_signal_tilt(const InfoProcessSpec& spec, double t) {
  check_before_horizon(t, spec.horizon);
  const double T = spec.horizon;
  const double k = T / (T - t);
  return {k * spec.sigma, k * spec.sigma * spec.sigma * t};
}

PosteriorState posterior_single(const FactorPrior& prior, const InfoProcessSpec& spec, double t,
                                double xi) {
  check_before_horizon(t, spec.horizon);
  if (!std::isfinite(xi)) throw DomainError("observation must be finite");
  const SignalTilt st = single_signal_tilt(spec, t);
  const LikelihoodTilt tilt{st.slope * xi, st.quadratic};
  if (!prior.is_discrete()) return PosteriorState::from_tilt(prior, tilt, t);

  const auto& d = prior.as_discrete();
  const double T = spec.horizon;
  const double k = T / (T - t);
  const double s = spec.sigma;
  std::vector<double> exponents(d.outcomes.size());
  bool all_zero = true;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    const double x = d.outcomes[i];
    exponents[i] = k * (s * x * xi - 0.5 * s * s * x * x * t);
    all_zero = all_zero && exponents[i] == 0.0;
  }
  if (all_zero) return PosteriorState::from_weights(prior, d.outcomes, d.probabilities, tilt, t);
  std::vector<double> logw(exponents.size());
  for (std::size_t i = 0; i < logw.size(); ++i) {
    logw[i] = std::log(d.probabilities[i]) + exponents[i];
  }
  auto state =
      PosteriorState::from_weights(prior, d.outcomes, normalize_log_weights(logw), tilt, t);
  state.log_evidence_ = log_sum_exp(logw);
  return state;
}

PosteriorState reveal_at_horizon(const FactorPrior& prior, const InfoProcessSpec& spec,
                                 double xi_T) {
  if (spec.sigma == 0.0) {
    throw DegenerateError("sigma = 0: the information process does not reveal the factor");
  }
  if (!std::isfinite(xi_T)) throw DomainError("observation must be finite");
  const double scale = spec.sigma * spec.horizon;
  const double x = xi_T / scale;
  if (!prior.is_discrete()) return PosteriorState::point_mass(prior, x, spec.horizon);
  const auto& outcomes = prior.as_discrete().outcomes;
  double best = outcomes.front();
  for (double d : outcomes) {
    if (std::abs(d - x) < std::abs(best - x)) best = d;
  }
  if (std::abs(xi_T - scale * best) > 1e-9 * std::abs(scale)) {
    throw DomainError("revealed value " + std::to_string(x) + " matches no prior outcome");
  }
  return PosteriorState::point_mass(prior, best, spec.horizon);
}

ObservationSet::ObservationSet(std::size_t process_count)
    : correlation_(process_count, std::vector<double>(process_count, 0.0)) {
  if (process_count == 0) throw DomainError("observation set needs at least one process");
  for (std::size_t i = 0; i < process_count; ++i) correlation_[i][i] = 1.0;
}

ObservationSet::ObservationSet(std::vector<std::vector<double>> correlation)
    : correlation_(std::move(correlation)) {
  const std::size_t n = correlation_.size();
  if (n == 0) throw DomainError("observation set needs at least one process");
  Eigen::MatrixXd m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (correlation_[i].size() != n) throw DomainError("correlation matrix must be square");
    for (std::size_t j = 0; j < n; ++j) {
      const double r = correlation_[i][j];
      if (!(r >= -1.0 && r <= 1.0)) throw DomainError("correlations must lie in [-1, 1]");
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = r;
    }
    if (correlation_[i][i] != 1.0) throw DomainError("correlation diagonal must be 1");
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (correlation_[i][j] != correlation_[j][i]) {
        throw DomainError("correlation matrix must be symmetric");
      }
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-12) {
    throw DomainError("correlation matrix is not positive semidefinite");
  }
}

void ObservationSet::add(Observation obs) {
  if (obs.process >= process_count()) throw DomainError("observation process id out of range");
  if (!std::isfinite(obs.value)) throw DomainError("observation value must be finite");
  if (!observations_.empty()) {
    const double T = observations_.front().spec.horizon;
    if (std::abs(obs.spec.horizon - T) > 1e-12 * T) {
      throw DomainError("observations of one factor must share the horizon");
    }
  }
  check_before_horizon(obs.time, obs.spec.horizon);
  observations_.push_back(obs);
}

double ObservationSet::latest_time() const noexcept {
  double t = 0.0;
  for (const auto& o : observations_) t = std::max(t, o.time);
  return t;
}

ObservationSet ObservationSet::reduced() const {
  std::vector<Observation> sorted = observations_;
  std::stable_sort(sorted.begin(), sorted.end(), [](const Observation& a, const Observation& b) {
    return a.process != b.process ? a.process < b.process : a.time < b.time;
  });
  std::vector<Observation> kept;
  for (const auto& o : sorted) {
    if (o.time == 0.0) continue;
    bool duplicate = false;
    for (const auto& k : kept) {
      if (k.time != o.time) continue;
      if (k.process == o.process ||
          (correlation_[k.process][o.process] == 1.0 && k.spec.sigma == o.spec.sigma)) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) kept.push_back(o);
  }
  std::vector<Observation> informative;
  for (const auto& o : kept) {
    if (o.spec.sigma == 0.0) {
      bool coupled = false;
      for (const auto& other : kept) {
        if (other.process != o.process && correlation_[o.process][other.process] != 0.0) {
          coupled = true;
        }
      }
      if (!coupled) continue;
    }
    informative.push_back(o);
  }
  ObservationSet out(correlation_);
  out.observations_ = std::move(informative);
  return out;
}

FusionWeights fusion_weights(const ObservationSet& obs) {
  const auto& o = obs.observations();
  const auto n = static_cast<Eigen::Index>(o.size());
  if (n == 0) return {{}, 0.0};
  const double T = o.front().spec.horizon;
  Eigen::MatrixXd cov(n, n);
  Eigen::VectorXd m(n);
  for (Eigen::Index a = 0; a < n; ++a) {
    const auto& oa = o[static_cast<std::size_t>(a)];
    m(a) = oa.spec.sigma * oa.time;
    for (Eigen::Index b = 0; b < n; ++b) {
      const auto& ob = o[static_cast<std::size_t>(b)];
      const double lo = std::min(oa.time, ob.time);
      const double hi = std::max(oa.time, ob.time);
      cov(a, b) = obs.correlation(oa.process, ob.process) * lo * (T - hi) / T;
    }
  }
  // LDLT's own rcond estimate can miss an exactly zero pivot; use the spectrum.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(cov);
  const auto& lambda = eig.eigenvalues();
  if (eig.info() != Eigen::Success || !(lambda.minCoeff() >= 1e-12 * lambda.maxCoeff())) {
    throw DegenerateError("observation covariance is singular (duplicated or redundant signal)");
  }
  const Eigen::VectorXd u = cov.ldlt().solve(m);
  FusionWeights fw;
  fw.u.assign(u.data(), u.data() + n);
  fw.quadratic = u.dot(m);
  return fw;
}

PosteriorState posterior_multi_signal(const FactorPrior& prior, const ObservationSet& obs) {
  const ObservationSet r = obs.reduced();
  const auto& o = r.observations();
  if (o.empty()) return PosteriorState::from_tilt(prior, {}, obs.latest_time());
  if (o.size() == 1) return posterior_single(prior, o.front().spec, o.front().time, o.front().value);
  const FusionWeights fw = fusion_weights(r);
  LikelihoodTilt tilt{0.0, fw.quadratic};
  for (std::size_t a = 0; a < o.size(); ++a) tilt.linear += fw.u[a] * o[a].value;
  return PosteriorState::from_tilt(prior, tilt, r.latest_time());
}

Moments conditional_moments(const PosteriorState& state) {
  const double mean = state.expectation([](double x) { return x; });
  const double var = state.expectation([mean](double x) { return (x - mean) * (x - mean); });
  return {mean, std::max(0.0, var)};
}

double price_single_dividend(const FactorPrior& prior, const InfoProcessSpec& spec,
                             const DiscountCurve& curve, double t, double xi,
                             const std::function<double(double)>& payoff) {
  check_before_horizon(t, spec.horizon);
  const PosteriorState post = posterior_single(prior, spec, t, xi);
  const double e = payoff ? post.expectation(payoff) : post.expectation([](double x) { return x; });
  return curve.discount(t, spec.horizon) * e;
}

std::vector<PosteriorState> factor_posteriors(const AssetSpec& asset, double t,
                                              std::span<const double> xi_values) {
  if (xi_values.size() > asset.factor_count()) {
    throw DomainError("more observations than factors");
  }
  std::vector<PosteriorState> out;
  out.reserve(xi_values.size());
  for (std::size_t j = 0; j < xi_values.size(); ++j) {
    const auto& prior = asset.factor_priors[j];
    const auto& spec = asset.info_specs[j];
    if (t >= spec.horizon) {
      out.push_back(reveal_at_horizon(prior, spec, xi_values[j]));
    } else {
      out.push_back(posterior_single(prior, spec, t, xi_values[j]));
    }
  }
  return out;
}

void enumerate_product(std::span<const PosteriorState> posteriors, std::size_t count,
                       const std::function<void(std::span<const double>, double)>& visit) {
  if (count > posteriors.size()) throw DomainError("not enough posteriors to enumerate");
  std::vector<PosteriorState::Atoms> atoms;
  atoms.reserve(count);
  for (std::size_t j = 0; j < count; ++j) atoms.push_back(posteriors[j].atoms());
  std::vector<double> x(count);
  std::vector<std::size_t> idx(count, 0);
  if (count == 0) {
    visit(x, 1.0);
    return;
  }
  while (true) {
    double w = 1.0;
    for (std::size_t j = 0; j < count; ++j) {
      x[j] = atoms[j].x[idx[j]];
      w *= atoms[j].w[idx[j]];
    }
    visit(x, w);
    std::size_t j = count;
    while (j > 0) {
      --j;
      if (++idx[j] < atoms[j].x.size()) break;
      idx[j] = 0;
      if (j == 0) return;
    }
  }
}

double price_multi_dividend(const AssetSpec& asset, const DiscountCurve& curve, double t,
                            std::span<const double> xi_values) {
  if (!std::isfinite(t) || t < 0.0) throw DomainError("time must be finite and >= 0");
  const auto& dates = asset.cashflows.dates;
  std::size_t last_live = dates.size();
  for (std::size_t k = 0; k < dates.size(); ++k) {
    if (dates[k] > t) last_live = k;
  }
  if (last_live == dates.size()) return 0.0;
  if (xi_values.size() < last_live + 1) {
    throw DomainError("missing information-process value for factor " +
                      std::to_string(xi_values.size()));
  }
  const auto posts = factor_posteriors(asset, t, xi_values.first(last_live + 1));
  double price = 0.0;
  for (std::size_t k = 0; k <= last_live; ++k) {
    if (!(dates[k] > t)) continue;
    double e = 0.0;
    if (k == 0) {
      const auto& flow = asset.cashflows.flows[0];
      e = posts[0].expectation([&flow](double x) { return flow(std::span<const double>(&x, 1)); });
    } else {
      enumerate_product(posts, k + 1, [&](std::span<const double> x, double w) {
        e += w * asset.cashflows.evaluate(k, x);
      });
    }
    price += curve.discount(t, dates[k]) * e;
  }
  return price;
}

void two_point_upper_weights(const FactorPrior& prior, double slope, double quadratic,
                             std::span<const double> s, std::span<double> out) {
  const auto& d = prior.as_discrete();
  if (d.outcomes.size() != 2) throw DomainError("two-point prior required");
  const bool ordered = d.outcomes[0] < d.outcomes[1];
  const double d0 = ordered ? d.outcomes[0] : d.outcomes[1];
  const double d1 = ordered ? d.outcomes[1] : d.outcomes[0];
  const double p0 = ordered ? d.probabilities[0] : d.probabilities[1];
  const double p1 = ordered ? d.probabilities[1] : d.probabilities[0];
  const double c0 = std::log(p1 / p0) - 0.5 * quadratic * (d1 * d1 - d0 * d0);
  const double c1 = slope * (d1 - d0);
  kernels::logistic_affine(c0, c1, s, out);
}

}  // namespace infoprice
