#include "infoprice/strategies.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "infoprice/error.hpp"
#include "infoprice/filtering.hpp"
#include "infoprice/kernels.hpp"
#include "infoprice/random.hpp"

namespace infoprice {

namespace {

struct MeanSe {
  double mean;
  double se;
};

MeanSe mean_se(std::span<const double> v) {
  const auto ss = kernels::sum_and_squares(v);
  const double n = static_cast<double>(v.size());
  const double mean = ss.sum / n;
  if (v.size() < 2) return {mean, 0.0};
  const double var = std::max(0.0, (ss.sum_sq - n * mean * mean) / (n - 1.0));
  return {mean, std::sqrt(var / n)};
}

bool two_point_prior(const FactorPrior& prior) {
  return prior.is_discrete() && prior.as_discrete().outcomes.size() == 2;
}

// P E[D | s] for a batch of sufficient statistics with the given tilt.
void two_point_prices(const FactorPrior& prior, double slope, double quadratic, double P,
                      std::span<const double> s, std::span<double> out) {
  const auto& d = prior.as_discrete();
  const double d0 = std::min(d.outcomes[0], d.outcomes[1]);
  const double d1 = std::max(d.outcomes[0], d.outcomes[1]);
  two_point_upper_weights(prior, slope, quadratic, s, out);
  for (double& v : out) v = P * (d0 + (d1 - d0) * v);
}

}  // namespace

void StatArbConfig::validate() const {
  if (market.horizon != informed.horizon) {
    throw DomainError("stat-arb: both information processes need the same horizon");
  }
  if (!(decision_time > 0.0 && decision_time < market.horizon)) {
    throw DomainError("stat-arb: decision time must satisfy 0 < t < T");
  }
  check_before_horizon(decision_time, market.horizon);
  if (n_trials < 1) throw DomainError("stat-arb: at least one trial needed");
  if (!(rho >= -1.0 && rho <= 1.0)) throw DomainError("stat-arb: rho must lie in [-1, 1]");
  if (!std::isfinite(threshold)) throw DomainError("stat-arb: threshold must be finite");
}

double conditional_excess_value(double S, double S_informed, double K, double P) {
  if (!std::isfinite(S) || !std::isfinite(S_informed) || !std::isfinite(K) || !(P > 0.0)) {
    throw DomainError("conditional excess value needs finite prices and P > 0");
  }
  const double level = K * P;
  const double buy = (S_informed > level ? 1.0 : 0.0) - (S > level ? 1.0 : 0.0);
  return buy * (S_informed - S) / P;
}

StatArbReport run_stat_arb(const StatArbConfig& c) {
  c.validate();
  const std::size_t n = c.n_trials;
  const double t = c.decision_time;
  const double T = c.market.horizon;
  const double v = t * (T - t) / T;
  const double sd = std::sqrt(v);
  const double side = std::sqrt(std::max(0.0, 1.0 - c.rho * c.rho));
  const double P = c.curve.discount(t, T);

  std::vector<double> D(n), xi(n), xi2(n);
  for (std::size_t i = 0; i < n; ++i) {
    PathRng rng(c.seed, StreamFamily::trial, i);
    D[i] = c.prior.sample(rng);
    const double beta = sd * rng.normal();
    const double beta2 = c.rho * beta + side * sd * rng.normal();
    xi[i] = c.market.sigma * t * D[i] + beta;
    xi2[i] = c.informed.sigma * t * D[i] + beta2;
  }

  // The informed design with redundant observations removed.
  ObservationSet design({{1.0, c.rho}, {c.rho, 1.0}});
  design.add({0, t, 0.0, c.market});
  design.add({1, t, 0.0, c.informed});
  const ObservationSet reduced = design.reduced();

  std::vector<double> S(n), St(n);
  if (two_point_prior(c.prior)) {
    const SignalTilt m = single_signal_tilt(c.market, t);
    two_point_prices(c.prior, m.slope, m.quadratic, P, xi, S);
    if (reduced.observations().size() == 1) {
      const Observation& only = reduced.observations().front();
      const SignalTilt s = single_signal_tilt(only.spec, t);
      two_point_prices(c.prior, s.slope, s.quadratic, P, only.process == 0 ? xi : xi2, St);
    } else if (reduced.empty()) {
      two_point_prices(c.prior, 0.0, 0.0, P, xi, St);
    } else {
      const FusionWeights fw = fusion_weights(reduced);
      std::vector<double> linear(n);
      kernels::axpby(fw.u[0], xi, fw.u[1], xi2, linear);
      two_point_prices(c.prior, 1.0, fw.quadratic, P, linear, St);
    }
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      S[i] = P * conditional_moments(posterior_single(c.prior, c.market, t, xi[i])).mean;
      ObservationSet obs({{1.0, c.rho}, {c.rho, 1.0}});
      obs.add({0, t, xi[i], c.market});
      obs.add({1, t, xi2[i], c.informed});
      St[i] = P * conditional_moments(posterior_multi_signal(c.prior, obs)).mean;
    }
  }

  const double level = c.threshold * P;
  std::vector<double> V(n), Vt(n), dV(n), cond(n);
  std::size_t buys = 0, buys_informed = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool b = S[i] > level;
    const bool bt = St[i] > level;
    buys += b;
    buys_informed += bt;
    const double pnl = D[i] - S[i] / P;
    V[i] = b ? pnl : 0.0;
    Vt[i] = bt ? pnl : 0.0;
    dV[i] = Vt[i] - V[i];
    cond[i] = conditional_excess_value(S[i], St[i], c.threshold, P);
  }

  const MeanSe vm = mean_se(V), vi = mean_se(Vt), dv = mean_se(dV), ce = mean_se(cond);
  StatArbReport r;
  r.mean_market = vm.mean;
  r.mean_informed = vi.mean;
  r.mean_excess = vi.mean - vm.mean;
  r.se_market = vm.se;
  r.se_informed = vi.se;
  r.se_excess = dv.se;
  r.market_buy_rate = static_cast<double>(buys) / static_cast<double>(n);
  r.informed_buy_rate = static_cast<double>(buys_informed) / static_cast<double>(n);
  r.mean_conditional_excess = ce.mean;
  r.se_conditional_excess = ce.se;
  r.trials = n;
  return r;
}

StatArbConfig stat_arb_preset_fig3(std::uint64_t seed) {
  return {FactorPrior::discrete({0.0, 1.0}, {0.2, 0.8}),
          InfoProcessSpec(0.25, 5.0),
          InfoProcessSpec(0.45, 5.0),
          0.15,
          2.5,
          0.7,
          DiscountCurve::flat(0.0),
          2000,
          seed};
}

}  // namespace infoprice
