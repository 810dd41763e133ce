#include "infoprice/market.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "infoprice/error.hpp"

namespace infoprice {

namespace {

double tail_quantile() {
  // z with N(-z) = kPriorTailMass.
  static const double z = -inverse_normal_cdf(kPriorTailMass);
  return z;
}

void require_probability(double p, const char* name) {
  if (!(p > 0.0 && p <= 1.0)) {
    throw DomainError(std::string(name) + " must lie in (0, 1], got " + std::to_string(p));
  }
}

void require_recovery(double R, const char* name) {
  if (!(R >= 0.0 && R < 1.0)) {
    throw DomainError(std::string(name) + " must lie in [0, 1), got " + std::to_string(R));
  }
}

}  // namespace

FactorPrior FactorPrior::discrete(std::vector<double> outcomes, std::vector<double> probabilities) {
  if (outcomes.empty() || outcomes.size() != probabilities.size()) {
    throw DomainError("discrete prior needs matching, non-empty outcome and probability lists");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (!std::isfinite(outcomes[i])) throw DomainError("discrete prior outcome is not finite");
    if (!(probabilities[i] > 0.0)) {
      throw DomainError("discrete prior probabilities must be strictly positive");
    }
    total += probabilities[i];
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw DomainError("discrete prior probabilities sum to " + std::to_string(total));
  }
  return FactorPrior(DiscretePrior{std::move(outcomes), std::move(probabilities)});
}

FactorPrior FactorPrior::digital(double p) {
  require_probability(p, "digital probability");
  if (p == 1.0) return discrete({1.0}, {1.0});
  return discrete({0.0, 1.0}, {1.0 - p, p});
}

FactorPrior FactorPrior::continuous(std::function<double(double)> density, Interval support,
                                    std::function<double(double)> quantile, std::string name) {
  if (!density) throw DomainError("continuous prior needs a density");
  QuadOptions opts;
  opts.abs_tol = 1e-12;
  opts.initial_panels = 16;
  const double mass = integrate(density, support, opts).value;
  if (std::abs(mass - 1.0) > 1e-9) {
    throw DomainError("continuous prior density integrates to " + std::to_string(mass));
  }
  return FactorPrior(
      ContinuousPrior{std::move(density), support, std::move(quantile), std::move(name)});
}

FactorPrior FactorPrior::gaussian(double mean, double sd) {
  if (!(sd > 0.0) || !std::isfinite(mean)) throw DomainError("gaussian prior needs sd > 0");
  const double z = tail_quantile();
  auto density = [mean, sd](double x) { return normal_pdf((x - mean) / sd) / sd; };
  auto quantile = [mean, sd](double u) { return mean + sd * inverse_normal_cdf(u); };
  return continuous(density, Interval(mean - z * sd, mean + z * sd), quantile, "gaussian");
}

FactorPrior FactorPrior::lognormal(double mu, double s) {
  if (!(s > 0.0) || !std::isfinite(mu)) throw DomainError("lognormal prior needs s > 0");
  const double z = tail_quantile();
  auto density = [mu, s](double x) {
    if (x <= 0.0) return 0.0;
    return normal_pdf((std::log(x) - mu) / s) / (s * x);
  };
  auto quantile = [mu, s](double u) { return std::exp(mu + s * inverse_normal_cdf(u)); };
  return continuous(density, Interval(std::exp(mu - z * s), std::exp(mu + z * s)), quantile,
                    "lognormal");
}

FactorPrior FactorPrior::uniform(double lo, double hi) {
  const Interval support(lo, hi);
  const double h = 1.0 / (hi - lo);
  auto density = [h, support](double x) { return support.contains(x) ? h : 0.0; };
  auto quantile = [lo, hi](double u) { return lo + u * (hi - lo); };
  return continuous(density, support, quantile, "uniform");
}

const DiscretePrior& FactorPrior::as_discrete() const {
  if (!is_discrete()) throw DomainError("prior is not discrete");
  return std::get<DiscretePrior>(law_);
}

const ContinuousPrior& FactorPrior::as_continuous() const {
  if (is_discrete()) throw DomainError("prior is not continuous");
  return std::get<ContinuousPrior>(law_);
}

double FactorPrior::mean() const {
  if (is_discrete()) {
    const auto& d = as_discrete();
    double m = 0.0;
    for (std::size_t i = 0; i < d.outcomes.size(); ++i) m += d.probabilities[i] * d.outcomes[i];
    return m;
  }
  const auto& c = as_continuous();
  QuadOptions opts;
  opts.abs_tol = 1e-13;
  opts.rel_tol = 1e-13;
  opts.initial_panels = 32;
  return integrate([&c](double x) { return x * c.density(x); }, c.support, opts).value;
}

double FactorPrior::variance() const {
  const double m = mean();
  if (is_discrete()) {
    const auto& d = as_discrete();
    double v = 0.0;
    for (std::size_t i = 0; i < d.outcomes.size(); ++i) {
      v += d.probabilities[i] * (d.outcomes[i] - m) * (d.outcomes[i] - m);
    }
    return v;
  }
  const auto& c = as_continuous();
  QuadOptions opts;
  opts.abs_tol = 1e-13;
  opts.rel_tol = 1e-13;
  opts.initial_panels = 32;
  return integrate([&c, m](double x) { return (x - m) * (x - m) * c.density(x); }, c.support, opts)
      .value;
}

double FactorPrior::min_value() const {
  if (is_discrete()) {
    const auto& o = as_discrete().outcomes;
    return *std::min_element(o.begin(), o.end());
  }
  return as_continuous().support.lo();
}

double FactorPrior::max_value() const {
  if (is_discrete()) {
    const auto& o = as_discrete().outcomes;
    return *std::max_element(o.begin(), o.end());
  }
  return as_continuous().support.hi();
}

double FactorPrior::sample(PathRng& rng) const {
  const double u = rng.uniform();
  if (is_discrete()) {
    const auto& d = as_discrete();
    double cumulative = 0.0;
    for (std::size_t i = 0; i + 1 < d.outcomes.size(); ++i) {
      cumulative += d.probabilities[i];
      if (u < cumulative) return d.outcomes[i];
    }
    return d.outcomes.back();
  }
  const auto& c = as_continuous();
  if (!c.quantile) throw DomainError("continuous prior '" + c.name + "' has no sampler");
  return c.support.clamp(c.quantile(u));
}

DiscountCurve DiscountCurve::flat(double rate) {
  if (!std::isfinite(rate)) throw DomainError("flat rate must be finite");
  DiscountCurve curve;
  curve.flat_rate_ = rate;
  curve.is_flat_ = true;
  return curve;
}

DiscountCurve DiscountCurve::table(std::vector<std::pair<double, double>> points) {
  std::sort(points.begin(), points.end());
  DiscountCurve curve;
  curve.is_flat_ = false;
  curve.times_.push_back(0.0);
  curve.log_discounts_.push_back(0.0);
  for (const auto& [t, p] : points) {
    if (!std::isfinite(t) || t < 0.0) throw DomainError("discount table times must be >= 0");
    if (!(p > 0.0 && p <= 1.0)) throw DomainError("discount factors must lie in (0, 1]");
    if (t == 0.0) {
      if (p != 1.0) throw DomainError("P(0, 0) must equal 1");
      continue;
    }
    if (t == curve.times_.back()) throw DomainError("duplicate time in discount table");
    const double lp = std::log(p);
    if (lp > curve.log_discounts_.back()) {
      throw DomainError("discount factors must be nonincreasing in maturity");
    }
    curve.times_.push_back(t);
    curve.log_discounts_.push_back(lp);
  }
  return curve;
}

double DiscountCurve::initial(double t) const {
  if (!(t >= 0.0) || !std::isfinite(t)) throw DomainError("discount time must be >= 0");
  if (is_flat_) return std::exp(-flat_rate_ * t);
  if (times_.size() == 1) return 1.0;
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t hi = static_cast<std::size_t>(it - times_.begin());
  if (hi >= times_.size()) hi = times_.size() - 1;
  const std::size_t lo = hi - 1;
  const double w = (t - times_[lo]) / (times_[hi] - times_[lo]);
  return std::exp(log_discounts_[lo] + w * (log_discounts_[hi] - log_discounts_[lo]));
}

double DiscountCurve::discount(double t, double T) const {
  if (t > T) throw DomainError("discount: t must not exceed T");
  if (t == T) return 1.0;
  return initial(T) / initial(t);
}

double DiscountCurve::forward_rate(double t) const {
  if (is_flat_) return flat_rate_;
  if (times_.size() == 1) return 0.0;
  auto it = std::upper_bound(times_.begin(), times_.end(), t);
  std::size_t hi = static_cast<std::size_t>(it - times_.begin());
  if (hi >= times_.size()) hi = times_.size() - 1;
  const std::size_t lo = hi - 1;
  return -(log_discounts_[hi] - log_discounts_[lo]) / (times_[hi] - times_[lo]);
}

double CashFlowSpec::evaluate(std::size_t k, std::span<const double> factors) const {
  if (k >= flows.size()) throw DomainError("cash flow index out of range");
  if (factors.size() < k + 1) throw DomainError("cash flow needs the first k factor values");
  return flows[k](factors.first(k + 1));
}

void AssetSpec::validate() const {
  const std::size_t n = cashflows.dates.size();
  if (n == 0) throw DomainError("asset has no cash flows");
  if (cashflows.flows.size() != n || factor_priors.size() != n || info_specs.size() != n) {
    throw DomainError("asset needs one flow, one prior and one information process per date");
  }
  for (std::size_t k = 0; k < n; ++k) {
    if (!cashflows.flows[k]) throw DomainError("cash flow function is empty");
    if (!(cashflows.dates[k] > 0.0)) throw DomainError("payment dates must be positive");
    if (k > 0 && !(cashflows.dates[k] > cashflows.dates[k - 1])) {
      throw DomainError("payment dates must be strictly increasing");
    }
    if (std::abs(info_specs[k].horizon - cashflows.dates[k]) > 1e-12 * cashflows.dates[k]) {
      throw DomainError("information horizon of factor " + std::to_string(k) +
                        " differs from its payment date");
    }
  }
}

AssetSpec build_single_dividend(FactorPrior prior, InfoProcessSpec spec,
                                std::function<double(double)> payoff) {
  CashFlowFunction flow;
  if (payoff) {
    flow = [payoff](std::span<const double> x) { return payoff(x[0]); };
  } else {
    flow = [](std::span<const double> x) { return x[0]; };
  }
  AssetSpec asset{{{spec.horizon}, {flow}}, {std::move(prior)}, {spec}};
  asset.validate();
  return asset;
}

AssetSpec build_two_coupon_bond(double coupon, double principal, double p1, double p2,
                                std::pair<double, double> sigmas, double T1, double T2) {
  require_probability(p1, "p1");
  require_probability(p2, "p2");
  if (!(T1 < T2)) throw DomainError("two-coupon bond needs T1 < T2");
  const double c = coupon;
  const double cn = coupon + principal;
  AssetSpec asset{
      {{T1, T2},
       {[c](std::span<const double> x) { return c * x[0]; },
        [cn](std::span<const double> x) { return cn * x[0] * x[1]; }}},
      {FactorPrior::digital(p1), FactorPrior::digital(p2)},
      {InfoProcessSpec(sigmas.first, T1), InfoProcessSpec(sigmas.second, T2)}};
  asset.validate();
  return asset;
}

AssetSpec build_recovery_bond(double coupon, double principal, double R1, double R2, double p1,
                              double p2, std::pair<double, double> sigmas, double T1, double T2) {
  require_recovery(R1, "R1");
  require_recovery(R2, "R2");
  require_probability(p1, "p1");
  require_probability(p2, "p2");
  if (!(T1 < T2)) throw DomainError("recovery bond needs T1 < T2");
  const double c = coupon;
  const double cn = coupon + principal;
  AssetSpec asset{
      {{T1, T2},
       {[c, cn, R1](std::span<const double> x) { return c * x[0] + R1 * cn * (1.0 - x[0]); },
        [cn, R2](std::span<const double> x) {
          return cn * x[0] * x[1] + R2 * cn * x[0] * (1.0 - x[1]);
        }}},
      {FactorPrior::digital(p1), FactorPrior::digital(p2)},
      {InfoProcessSpec(sigmas.first, T1), InfoProcessSpec(sigmas.second, T2)}};
  asset.validate();
  return asset;
}

RestaurantConstants restaurant_constants(double n2, double R2a, double R2b, double R2c) {
  return {n2 * (R2b - R2c), n2 * (R2a - R2c), n2 * (1.0 - R2a - R2b + R2c)};
}

FactoryRestaurant build_factory_restaurant(double n1, double n2, double R1, double R2a,
                                           double R2b, double R2c, double p1, double p2,
                                           std::pair<double, double> sigmas, double T1,
                                           double T2) {
  require_recovery(R1, "R1");
  require_recovery(R2a, "R2a");
  require_recovery(R2b, "R2b");
  require_recovery(R2c, "R2c");
  require_probability(p1, "p1");
  require_probability(p2, "p2");
  if (!(T1 < T2)) throw DomainError("factory/restaurant needs T1 < T2");
  const InfoProcessSpec spec1(sigmas.first, T1);
  const InfoProcessSpec spec2(sigmas.second, T2);
  const FactorPrior prior1 = FactorPrior::digital(p1);
  const FactorPrior prior2 = FactorPrior::digital(p2);

  AssetSpec factory{
      {{T1},
       {[n1, R1](std::span<const double> x) { return n1 * x[0] + R1 * n1 * (1.0 - x[0]); }}},
      {prior1},
      {spec1}};
  AssetSpec restaurant{
      {{T1, T2},
       {[](std::span<const double>) { return 0.0; },
        [n2, R2a, R2b, R2c](std::span<const double> x) {
          const double x1 = x[0];
          const double x2 = x[1];
          return n2 * x1 * x2 + R2a * n2 * (1.0 - x1) * x2 + R2b * n2 * x1 * (1.0 - x2) +
                 R2c * n2 * (1.0 - x1) * (1.0 - x2);
        }}},
      {prior1, prior2},
      {spec1, spec2}};
  factory.validate();
  restaurant.validate();
  return {std::move(factory), std::move(restaurant)};
}

FactoryRestaurant factory_restaurant_preset() {
  return build_factory_restaurant(100.0, 80.0, 0.4, 0.2, 0.5, 0.1, 0.9, 0.8, {0.3, 0.3}, 1.0, 2.0);
}

AssetSpec build_gbm_asset(double S0, double rate, double nu, double T) {
  if (!(S0 > 0.0) || !(nu > 0.0) || !(T > 0.0)) {
    throw DomainError("gbm asset needs S0 > 0, nu > 0, T > 0");
  }
  const double sqrtT = std::sqrt(T);
  auto payoff = [S0, rate, nu, T, sqrtT](double x) {
    return S0 * std::exp(rate * T + nu * sqrtT * x - 0.5 * nu * nu * T);
  };
  return build_single_dividend(FactorPrior::gaussian(0.0, 1.0), InfoProcessSpec(1.0 / sqrtT, T),
                               payoff);
}

}  // namespace infoprice
