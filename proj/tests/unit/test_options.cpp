#include <cmath>
#include <random>

#include "doctest.h"
#include "infoprice/error.hpp"
#include "infoprice/options.hpp"
#include "infoprice/random.hpp"

using namespace infoprice;

namespace {

// Figure-3 style binary bond: d0 = 0, d1 = 1, p1 = 0.8, T = 5, t = 1, sigma = 0.25, K = 0.7.
CallSpec fig3_call(double K = 0.7, double r = 0.0) {
  return {K, 1.0, FactorPrior::digital(0.8), InfoProcessSpec(0.25, 5.0), DiscountCurve::flat(r)};
}

BinaryCallParams fig3_params(double K = 0.7, double r = 0.0) {
  return {0.8, 0.0, 1.0, 0.25, 1.0, 5.0, K, DiscountCurve::flat(r)};
}

// Oracle: mpmath quadrature over the Q-law of xi (tests/oracles/compute_oracles.py).
constexpr double kFig3Call = 0.10052196942781312;

}  // namespace

TEST_CASE("critical level of a binary bond matches the inverted logistic") {
  for (double m : {0.1, 0.4, 0.7, 0.95}) {
    const double K = m * std::exp(-0.03 * 4.0);
    const CallSpec call = fig3_call(K, 0.03);
    const auto crit = critical_information(call);
    REQUIRE(crit.regime == ExerciseRegime::interior);
    const double t = 1.0, T = 5.0, s = 0.25, p1 = 0.8, p0 = 0.2;
    const double P = std::exp(-0.03 * (T - t));
    // Posterior weight of d1 equals K / P at xi*.
    const double expected =
        ((T - t) / (s * T)) * (std::log(p0 * K / (p1 * (P - K))) + 0.5 * s * s * t * T / (T - t));
    CHECK(crit.xi_star == doctest::Approx(expected).epsilon(1e-11));
    CHECK(price_single_dividend(call.prior, call.spec, call.curve, t, crit.xi_star - 1e-6) < K);
    CHECK(price_single_dividend(call.prior, call.spec, call.curve, t, crit.xi_star + 1e-6) > K);
  }
}

TEST_CASE("strikes outside the price range are degenerate") {
  CHECK(critical_information(fig3_call(0.0)).regime == ExerciseRegime::always);
  CHECK(critical_information(fig3_call(1.0)).regime == ExerciseRegime::never);
  CHECK(critical_information(fig3_call(1.5)).regime == ExerciseRegime::never);

  const auto c0 = call_price_semianalytic(fig3_call(0.0, 0.02));
  CHECK(c0.regime == ExerciseRegime::always);
  CHECK(c0.price == doctest::Approx(0.8 * std::exp(-0.02 * 5.0)).epsilon(1e-14));
  CHECK(call_price_semianalytic(fig3_call(1.2)).price == 0.0);
  CHECK(binary_call_price(fig3_params(0.0)).price == doctest::Approx(0.8).epsilon(1e-14));
  CHECK(binary_call_price(fig3_params(1.0)).price == 0.0);
  CHECK(binary_delta(fig3_params(0.0)) == 1.0);
  CHECK(binary_delta(fig3_params(1.0)) == 0.0);
}

TEST_CASE("call validation") {
  CallSpec c = fig3_call();
  c.maturity = 5.0;
  CHECK_THROWS_AS(critical_information(c), DomainError);
  c = fig3_call(-0.1);
  CHECK_THROWS_AS(call_price_semianalytic(c), DomainError);
  CHECK_THROWS_AS(mc_option_price(fig3_call(), 50, 1), DomainError);
  BinaryCallParams p = fig3_params();
  p.p1 = 1.0;
  CHECK_THROWS_AS(binary_call_price(p), DomainError);
}

TEST_CASE("binary closed form against the quadrature oracle and the semi-analytic integral") {
  CHECK(binary_call_price(fig3_params()).price == doctest::Approx(kFig3Call).epsilon(1e-12));
  CHECK(call_price_semianalytic(fig3_call()).price == doctest::Approx(kFig3Call).epsilon(1e-12));

  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 200; ++i) {
    const double d0 = u(gen);
    const double d1 = d0 + 0.1 + 2.0 * u(gen);
    const double p1 = 0.05 + 0.9 * u(gen);
    const double T = 0.5 + 5.0 * u(gen);
    const double t = T * (0.05 + 0.9 * u(gen));
    const double sigma = 0.05 + 2.0 * u(gen);
    const double r = 0.05 * u(gen);
    const auto curve = DiscountCurve::flat(r);
    const double P = curve.discount(t, T);
    const double K = P * (d0 + (d1 - d0) * (0.02 + 0.96 * u(gen)));
    const BinaryCallParams bp{p1, d0, d1, sigma, t, T, K, curve};
    const CallSpec call{K, t, FactorPrior::discrete({d0, d1}, {1.0 - p1, p1}),
                        InfoProcessSpec(sigma, T), curve};
    const double closed = binary_call_price(bp).price;
    CHECK(std::abs(closed - call_price_semianalytic(call).price) < 1e-10);
    const auto ue = binary_exercise(bp);
    const double tau = t * T / (T - t);
    CHECK(ue.u_plus - ue.u_minus == doctest::Approx(sigma * std::sqrt(tau) * (d1 - d0)));
  }
}

TEST_CASE("immediate revelation limit") {
  BinaryCallParams p = fig3_params(0.7, 0.01);
  p.sigma = 1e4;
  const double P0t = std::exp(-0.01 * 1.0);
  const double P = std::exp(-0.01 * 4.0);
  CHECK(binary_call_price(p).price == doctest::Approx(P0t * 0.8 * (P - 0.7)).epsilon(1e-10));
}

TEST_CASE("delta matches a central difference through p1") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 100; ++i) {
    const double d0 = u(gen);
    const double d1 = d0 + 0.2 + u(gen);
    const double T = 1.0 + 4.0 * u(gen);
    const double t = T * (0.1 + 0.8 * u(gen));
    const auto curve = DiscountCurve::flat(0.04 * u(gen));
    const double P = curve.discount(t, T);
    BinaryCallParams p{0.1 + 0.8 * u(gen), d0, d1, 0.1 + u(gen), t, T, 0.0, curve};
    // Strike placed by its exercise level u+ in (-3, 3).
    const double scale = p.sigma * (d1 - d0) * std::sqrt(t * T / (T - t));
    const double L = (6.0 * u(gen) - 3.0) * scale - 0.5 * scale * scale;
    const double R = std::exp(L) * (1.0 - p.p1) / p.p1;
    p.K = P * (d1 + R * d0) / (1.0 + R);
    const double P0T = curve.initial(T);
    const double S0 = P0T * (d0 + (d1 - d0) * p.p1);
    const double h = 1e-5;
    auto at = [&](double s) {
      BinaryCallParams q = p;
      q.p1 = (s / P0T - d0) / (d1 - d0);
      return binary_call_price(q).price;
    };
    const double fd = (at(S0 + h) - at(S0 - h)) / (2.0 * h);
    const double delta = binary_delta(p);
    CHECK(std::abs(fd - delta) / std::abs(delta) < 1e-4);
  }
}

TEST_CASE("delta homogeneity holds with sigma scaled inversely") {
  const BinaryCallParams p{0.6, 0.2, 1.3, 0.4, 1.0, 3.0, 0.7, DiscountCurve::flat(0.02)};
  for (double lambda : {0.5, 2.0, 10.0}) {
    BinaryCallParams q = p;
    q.d0 *= lambda;
    q.d1 *= lambda;
    q.K *= lambda;
    q.sigma /= lambda;
    CHECK(binary_delta(q) == doctest::Approx(binary_delta(p)).epsilon(1e-12));
    CHECK(binary_call_price(q).price ==
          doctest::Approx(lambda * binary_call_price(p).price).epsilon(1e-12));
  }
  // With sigma held fixed the delta moves.
  BinaryCallParams q = p;
  q.d0 *= 2.0;
  q.d1 *= 2.0;
  q.K *= 2.0;
  CHECK(std::abs(binary_delta(q) - binary_delta(p)) > 1e-3);
}

TEST_CASE("delta approaches one as K falls to the lowest price") {
  BinaryCallParams p = fig3_params(1e-9);
  CHECK(binary_delta(p) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("put-call parity") {
  for (double K : {0.2, 0.5, 0.7, 0.9}) {
    for (double r : {0.0, 0.03}) {
      const CallSpec call = fig3_call(K, r);
      const double C = call_price_semianalytic(call).price;
      const double P = put_price_semianalytic(call).price;
      const double S0 = 0.8 * std::exp(-r * 5.0);
      CHECK(std::abs((C - P) - (S0 - std::exp(-r * 1.0) * K)) < 1e-9);
    }
  }
  const CallSpec ln{1.1, 0.5, FactorPrior::lognormal(0.0, 0.3), InfoProcessSpec(0.8, 1.0),
                    DiscountCurve::flat(0.02)};
  const double S0 = std::exp(-0.02) * std::exp(0.5 * 0.09);
  CHECK(std::abs(call_price_semianalytic(ln).price - put_price_semianalytic(ln).price -
                 (S0 - std::exp(-0.01) * 1.1)) < 1e-9);
}

TEST_CASE("monotone in strike and information flow") {
  double prev = 1e9;
  for (double K = 0.05; K < 1.0; K += 0.05) {
    const double c = call_price_semianalytic(fig3_call(K)).price;
    CHECK(c <= prev + 1e-14);
    prev = c;
  }
  prev = -1.0;
  for (double s = 0.05; s < 3.0; s += 0.15) {
    BinaryCallParams p = fig3_params();
    p.sigma = s;
    const double c = binary_call_price(p).price;
    CHECK(c >= prev - 1e-14);
    prev = c;
  }
}

TEST_CASE("Monte Carlo under Q") {
  const CallSpec zero = fig3_call(0.0, 0.02);
  const auto m0 = mc_option_price(zero, 20000, 3);
  CHECK(std::abs(m0.estimate - 0.8 * std::exp(-0.1)) < 3.0 * m0.std_error);

  const auto m = mc_option_price(fig3_call(), 200000, 7);
  CHECK(std::abs(m.estimate - kFig3Call) < 3.0 * m.std_error);
  const auto half = mc_option_price(fig3_call(), 100000, 7);
  CHECK(half.std_error / m.std_error == doctest::Approx(std::sqrt(2.0)).epsilon(0.2));

  const auto put = mc_option_price(fig3_call(), 200000, 7, OptionKind::put);
  CHECK(std::abs(put.estimate - put_price_semianalytic(fig3_call()).price) < 3.0 * put.std_error);

  // Same seed, same stream: deterministic.
  CHECK(mc_option_price(fig3_call(), 1000, 9).estimate ==
        mc_option_price(fig3_call(), 1000, 9).estimate);
}

TEST_CASE("Monte Carlo under the bridge measure") {
  const auto b = mc_option_price_bridge(fig3_call(), 200000, 13);
  CHECK(std::abs(b.estimate - kFig3Call) < 3.0 * b.std_error);
  CallSpec c = fig3_call();
  c.prior = FactorPrior::gaussian(0.0, 1.0);
  CHECK_THROWS_AS(mc_option_price_bridge(c, 1000, 1), DomainError);
}

TEST_CASE("bridge density ratio") {
  const auto prior = FactorPrior::digital(0.8);
  const InfoProcessSpec spec(0.25, 5.0);
  CHECK(bridge_density_ratio(prior, spec, 0.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
  // Closed form for the two-point prior.
  const double t = 2.0, xi = 0.4, k = 5.0 / 3.0;
  const double expected = 0.2 + 0.8 * std::exp(k * (0.25 * xi - 0.5 * 0.0625 * t));
  CHECK(bridge_density_ratio(prior, spec, t, xi) == doctest::Approx(expected).epsilon(1e-14));
  // Gaussian prior N(0,1): Phi = (1 + q)^(-1/2) exp(l^2 / (2 (1 + q))).
  const auto g = FactorPrior::gaussian(0.0, 1.0);
  const double s = 0.7;
  const double l = 5.0 * s / 3.0 * xi, q = 5.0 * s * s * t / 3.0;
  CHECK(bridge_density_ratio(g, InfoProcessSpec(s, 5.0), t, xi) ==
        doctest::Approx(std::exp(l * l / (2.0 * (1.0 + q))) / std::sqrt(1.0 + q)).epsilon(1e-9));
}

TEST_CASE("inverse density ratio is a Q-martingale and xi is bridge-Gaussian under B") {
  const auto prior = FactorPrior::digital(0.8);
  const InfoProcessSpec spec(0.25, 5.0);
  const std::size_t n = 100000;
  for (double t : {0.5, 1.0, 2.0, 3.5, 4.5}) {
    double sum = 0.0, sum_sq = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      PathRng rng(21, StreamFamily::trial, i);
      const double x = prior.sample(rng);
      const double xi = spec.sigma * t * x + std::sqrt(t * (5.0 - t) / 5.0) * rng.normal();
      const double v = 1.0 / bridge_density_ratio(prior, spec, t, xi);
      sum += v;
      sum_sq += v * v;
    }
    const double mean = sum / n;
    const double se = std::sqrt((sum_sq / n - mean * mean) / n);
    CHECK(std::abs(mean - 1.0) < 3.0 * se);
  }
  const double t = 2.0, var = t * 3.0 / 5.0;
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    PathRng rng(22, StreamFamily::trial, i);
    const double xi = std::sqrt(var) * rng.normal();
    sum += xi;
    sum_sq += xi * xi;
  }
  const double mean = sum / n;
  CHECK(std::abs(mean) < 3.0 * std::sqrt(var / n));
  CHECK(std::abs(sum_sq / n - var) < 3.0 * var * std::sqrt(2.0 / n));
}

TEST_CASE("lognormal prior: semi-analytic against Monte Carlo") {
  const CallSpec call{1.0, 0.5, FactorPrior::lognormal(0.0, 0.3), InfoProcessSpec(0.8, 1.0),
                      DiscountCurve::flat(0.02)};
  const double c = call_price_semianalytic(call).price;
  const auto m = mc_option_price(call, 1000000, 17);
  CHECK(std::abs(m.estimate - c) < 3.0 * m.std_error);
  const auto crit = critical_information(call);
  REQUIRE(crit.regime == ExerciseRegime::interior);
  CHECK(price_single_dividend(call.prior, call.spec, call.curve, 0.5, crit.xi_star) ==
        doctest::Approx(1.0).epsilon(1e-10));
}
