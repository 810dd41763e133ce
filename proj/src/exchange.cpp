#include "infoprice/exchange.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <string>

#include "infoprice/csv.hpp"
#include "infoprice/error.hpp"
#include "infoprice/numerics.hpp"

namespace infoprice {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool is_identity(const std::vector<std::vector<double>>& m) {
  for (std::size_t i = 0; i < m.size(); ++i) {
    for (std::size_t j = 0; j < m.size(); ++j) {
      if (m[i][j] != (i == j ? 1.0 : 0.0)) return false;
    }
  }
  return true;
}

// Symmetric square root with eigenvalues below 1e-12 of the largest set to zero.
std::vector<std::vector<double>> square_root(const std::vector<std::vector<double>>& m) {
  const std::size_t n = m.size();
  if (is_identity(m)) {
    std::vector<std::vector<double>> id(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) id[i][i] = 1.0;
    return id;
  }
  Eigen::MatrixXd a(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = m[i][j];
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a);
  Eigen::VectorXd lambda = es.eigenvalues();
  const double cut = 1e-12 * lambda.maxCoeff();
  for (Eigen::Index k = 0; k < lambda.size(); ++k) {
    lambda(k) = lambda(k) > cut ? std::sqrt(lambda(k)) : 0.0;
  }
  const Eigen::MatrixXd root = es.eigenvectors() * lambda.asDiagonal() * es.eigenvectors().transpose();
  std::vector<std::vector<double>> out(n, std::vector<double>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) out[i][j] = root(i, j);
  }
  return out;
}

double posterior_entropy(const PosteriorState& post) {
  if (!post.is_discrete()) return kNaN;
  double h = 0.0;
  for (double w : post.weights()) {
    if (w > 0.0) h -= w * std::log(w);
  }
  return h;
}

bool at_horizon(const ExchangeState& s) { return s.time >= s.horizon; }

double valuation(const ExchangeState& s, std::size_t i) {
  const TraderState& tr = s.traders[i];
  if (at_horizon(s) && tr.spec.sigma != 0.0) {
    const PosteriorState post = reveal_at_horizon(s.prior, tr.spec, tr.path.back());
    return conditional_moments(post).mean;
  }
  return s.curve.discount(s.time, s.horizon) * conditional_moments(trader_posterior(s, i)).mean;
}

// Keeps one entry per (process, time); with independent traders only the
// latest entry of each process carries information.
void compact(std::vector<Observation>& obs, bool independent) {
  std::stable_sort(obs.begin(), obs.end(), [](const Observation& a, const Observation& b) {
    return a.process != b.process ? a.process < b.process : a.time < b.time;
  });
  obs.erase(std::unique(obs.begin(), obs.end(),
                        [](const Observation& a, const Observation& b) {
                          return a.process == b.process && a.time == b.time;
                        }),
            obs.end());
  if (!independent) return;
  std::vector<Observation> latest;
  for (std::size_t k = 0; k < obs.size(); ++k) {
    if (k + 1 == obs.size() || obs[k + 1].process != obs[k].process) latest.push_back(obs[k]);
  }
  obs = std::move(latest);
}

}  // namespace

SpreadConfig SpreadConfig::symmetric(double delta) {
  SpreadConfig s{1.0 - delta, 1.0 + delta};
  s.validate();
  return s;
}

void SpreadConfig::validate() const {
  if (!(phi_minus > 0.0 && phi_minus < 1.0 && phi_plus > 1.0) || !std::isfinite(phi_plus)) {
    throw DomainError("spread needs 0 < phi- < 1 < phi+");
  }
}

ExchangeState init_exchange(const std::vector<InfoProcessSpec>& specs, const FactorPrior& prior,
                            const DiscountCurve& curve, std::uint64_t seed,
                            std::vector<std::vector<double>> correlation) {
  const std::size_t n = specs.size();
  if (n < 2) throw DomainError("exchange needs at least two traders");
  const double T = specs.front().horizon;
  for (const auto& s : specs) {
    if (s.horizon != T) throw DomainError("traders must share the dividend date");
  }
  if (correlation.empty()) {
    correlation.assign(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) correlation[i][i] = 1.0;
  }
  // Validates shape, symmetry and semidefiniteness.
  const ObservationSet check(correlation);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i != j && std::abs(correlation[i][j]) == 1.0 && specs[i].sigma != specs[j].sigma) {
        throw DomainError("perfectly correlated traders need equal sigma");
      }
    }
  }

  ExchangeState s{prior, curve, T, 0.0, 0.0, correlation, square_root(correlation),
                  std::vector<double>(n, 0.0), {}, {}};
  PathRng draw(seed, StreamFamily::factor, 0);
  s.dividend = prior.sample(draw);
  for (std::size_t k = 0; k < n; ++k) s.streams.emplace_back(seed, StreamFamily::trader, k);
  for (std::size_t i = 0; i < n; ++i) s.traders.push_back({i, specs[i], {0.0}, {}, 0.0});
  for (std::size_t i = 0; i < n; ++i) s.traders[i].valuation = valuation(s, i);
  return s;
}

PosteriorState trader_posterior(const ExchangeState& s, std::size_t i) {
  const TraderState& tr = s.traders.at(i);
  ObservationSet obs(s.correlation);
  for (const auto& o : tr.knowledge) {
    if (!(o.process == i && o.time == s.time)) obs.add(o);
  }
  if (s.time < s.horizon) obs.add({i, s.time, tr.path.back(), tr.spec});
  return posterior_multi_signal(s.prior, obs);
}

std::vector<TradeEvent> step_exchange(ExchangeState& s, double next_time,
                                      const SpreadConfig& spread) {
  spread.validate();
  if (!(next_time > s.time && next_time <= s.horizon)) {
    throw DomainError("step_exchange: next time must lie in (now, T]");
  }
  const std::size_t n = s.traders.size();
  const BridgeStep step = bridge_step(s.time, next_time, s.horizon);
  for (std::size_t k = 0; k < n; ++k) {
    s.base_bridges[k] =
        next_time == s.horizon ? 0.0 : step.decay * s.base_bridges[k] + step.scale * s.streams[k].normal();
  }
  s.time = next_time;
  for (std::size_t i = 0; i < n; ++i) {
    double beta = 0.0;
    for (std::size_t k = 0; k < n; ++k) beta += s.mixing[i][k] * s.base_bridges[k];
    if (next_time == s.horizon) beta = 0.0;
    s.traders[i].path.push_back(s.traders[i].spec.sigma * next_time * s.dividend + beta);
  }
  for (std::size_t i = 0; i < n; ++i) s.traders[i].valuation = valuation(s, i);

  std::vector<TradeEvent> events;
  if (at_horizon(s) || s.time >= s.horizon * (1.0 - kHorizonGuard)) return events;
  const bool independent = is_identity(s.correlation);
  const bool discrete = s.prior.is_discrete();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      TraderState& a = s.traders[i];
      TraderState& b = s.traders[j];
      std::size_t buyer, seller;
      if (spread.phi_minus * a.valuation >= spread.phi_plus * b.valuation &&
          a.valuation > b.valuation) {
        buyer = i;
        seller = j;
      } else if (spread.phi_minus * b.valuation >= spread.phi_plus * a.valuation &&
                 b.valuation > a.valuation) {
        buyer = j;
        seller = i;
      } else {
        continue;
      }
      TradeEvent e;
      e.time = s.time;
      e.buyer = buyer;
      e.seller = seller;
      e.buyer_before = s.traders[buyer].valuation;
      e.seller_before = s.traders[seller].valuation;
      e.price = 0.5 * (spread.phi_minus * e.buyer_before + spread.phi_plus * e.seller_before);
      e.buyer_entropy_before = discrete ? posterior_entropy(trader_posterior(s, buyer)) : kNaN;
      e.seller_entropy_before = discrete ? posterior_entropy(trader_posterior(s, seller)) : kNaN;

      std::vector<Observation> merged = a.knowledge;
      merged.insert(merged.end(), b.knowledge.begin(), b.knowledge.end());
      merged.push_back({i, s.time, a.path.back(), a.spec});
      merged.push_back({j, s.time, b.path.back(), b.spec});
      compact(merged, independent);
      a.knowledge = merged;
      b.knowledge = std::move(merged);
      a.valuation = valuation(s, i);
      b.valuation = valuation(s, j);

      e.buyer_after = s.traders[buyer].valuation;
      e.seller_after = s.traders[seller].valuation;
      e.entropy_after = discrete ? posterior_entropy(trader_posterior(s, buyer)) : kNaN;
      events.push_back(e);
    }
  }
  return events;
}

EffectiveInformation effective_information(double xi1, double xi2, double sigma1, double sigma2) {
  const double s = std::hypot(sigma1, sigma2);
  if (s == 0.0) throw DegenerateError("effective information needs sigma1^2 + sigma2^2 > 0");
  return {s, (sigma1 * xi1 + sigma2 * xi2) / s};
}

double epsilon_first_order(double delta, double sigma, double T, double t, double posterior_mean) {
  if (!(t >= 0.0 && t < T)) throw DomainError("epsilon needs 0 <= t < T");
  if (!(sigma > 0.0)) throw DomainError("epsilon needs sigma > 0");
  if (!(posterior_mean < 1.0)) throw DegenerateError("epsilon is singular when E[X | xi] = 1");
  return -2.0 * delta * (T - t) / (sigma * T * (1.0 - posterior_mean));
}

double epsilon_exact(double delta, double sigma, double T, double t, double posterior_mean) {
  if (!(t >= 0.0 && t < T)) throw DomainError("epsilon needs 0 <= t < T");
  if (!(sigma > 0.0)) throw DomainError("epsilon needs sigma > 0");
  if (!(posterior_mean > 0.0 && posterior_mean < 1.0)) {
    throw DegenerateError("epsilon needs 0 < E[X | xi] < 1");
  }
  if (!(delta >= 0.0 && delta < 1.0)) throw DomainError("epsilon needs 0 <= delta < 1");
  // Digital valuation as a function of the shift: logistic(logit(m) + k sigma eps).
  const double k = T / (T - t);
  const double logit = std::log(posterior_mean / (1.0 - posterior_mean));
  const double target = (1.0 - delta) * posterior_mean;
  const auto g = [&](double eps) {
    return (1.0 + delta) / (1.0 + std::exp(-(logit + k * sigma * eps))) - target;
  };
  const auto dg = [&](double eps) {
    const double v = 1.0 / (1.0 + std::exp(-(logit + k * sigma * eps)));
    return (1.0 + delta) * k * sigma * v * (1.0 - v);
  };
  if (delta == 0.0) return 0.0;
  const double guess = epsilon_first_order(delta, sigma, T, t, posterior_mean);
  const Interval bracket = expand_bracket(g, Interval(2.0 * guess, 0.0));
  return find_root_monotone(g, bracket, 1e-15 * (1.0 + std::abs(guess)), dg);
}

MarketSimResult run_market_sim(const std::vector<InfoProcessSpec>& specs, const FactorPrior& prior,
                               const SpreadConfig& spread, const TimeGrid& grid,
                               std::uint64_t seed, const DiscountCurve& curve,
                               std::vector<std::vector<double>> correlation) {
  spread.validate();
  if (grid.size() < 2 || grid[0] != 0.0) throw DomainError("market sim: grid must start at 0");
  ExchangeState s = init_exchange(specs, prior, curve, seed, std::move(correlation));
  if (grid[grid.size() - 1] > s.horizon) throw DomainError("market sim: grid passes the horizon");
  MarketSimResult r{grid, s.dividend, {}, {}, {}};
  const std::size_t n = specs.size();
  r.valuations.assign(n, std::vector<double>(grid.size()));
  r.xi.assign(n, std::vector<double>(grid.size()));
  for (std::size_t i = 0; i < n; ++i) r.valuations[i][0] = s.traders[i].valuation;
  for (std::size_t k = 1; k < grid.size(); ++k) {
    auto ev = step_exchange(s, grid[k], spread);
    r.events.insert(r.events.end(), ev.begin(), ev.end());
    for (std::size_t i = 0; i < n; ++i) {
      r.valuations[i][k] = s.traders[i].valuation;
      r.xi[i][k] = s.traders[i].path.back();
    }
  }
  return r;
}

void write_trade_log(std::ostream& out, const MarketSimResult& result) {
  CsvWriter csv(out);
  csv.header({"time", "buyer", "seller", "price", "buyer_before", "seller_before", "buyer_after",
              "seller_after"});
  for (const auto& e : result.events) {
    csv.row({e.time, static_cast<double>(e.buyer), static_cast<double>(e.seller), e.price,
             e.buyer_before, e.seller_before, e.buyer_after, e.seller_after});
  }
}

void write_valuations(std::ostream& out, const MarketSimResult& result) {
  CsvWriter csv(out);
  const std::size_t n = result.valuations.size();
  std::vector<std::string> header{"time"};
  for (std::size_t i = 0; i < n; ++i) header.push_back("S_" + std::to_string(i));
  for (std::size_t i = 0; i < n; ++i) header.push_back("xi_" + std::to_string(i));
  csv.header(header);
  std::vector<double> row;
  for (std::size_t k = 0; k < result.grid.size(); ++k) {
    row.assign(1, result.grid[k]);
    for (std::size_t i = 0; i < n; ++i) row.push_back(result.valuations[i][k]);
    for (std::size_t i = 0; i < n; ++i) row.push_back(result.xi[i][k]);
    csv.row(row);
  }
}

}  // namespace infoprice
