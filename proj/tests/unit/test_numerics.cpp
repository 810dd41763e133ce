#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "infoprice/error.hpp"
#include "infoprice/numerics.hpp"

using namespace infoprice;

TEST_CASE("interval rejects empty and non-finite ranges") {
  CHECK_THROWS_AS(Interval(1.0, 1.0), DomainError);
  CHECK_THROWS_AS(Interval(0.0, std::numeric_limits<double>::infinity()), DomainError);
  Interval iv(-1.0, 3.0);
  CHECK(iv.width() == 4.0);
  CHECK(iv.clamp(5.0) == 3.0);
}

TEST_CASE("gauss-legendre rule structure") {
  for (std::size_t n : {1u, 2u, 5u, 10u, 24u, 64u}) {
    const auto rule = gauss_legendre(n, Interval(-2.0, 5.0));
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(rule.weights[i] > 0.0);
      CHECK(rule.nodes[i] > -2.0);
      CHECK(rule.nodes[i] < 5.0);
      if (i > 0) CHECK(rule.nodes[i] > rule.nodes[i - 1]);
      sum += rule.weights[i];
    }
    CHECK(std::abs(sum - 7.0) < 1e-12);
  }
  // Exact for degree 2n - 1.
  const auto rule = gauss_legendre(6, Interval(0.0, 1.0));
  CHECK(std::abs(rule.apply([](double x) { return std::pow(x, 11); }) - 1.0 / 12.0) < 1e-15);
}

TEST_CASE("normal_cdf values") {
  CHECK(normal_cdf(0.0) == 0.5);
  CHECK(std::abs(normal_cdf(20.0) - 1.0) < 1e-12);
  // mpmath, 40 digits
  CHECK(std::abs(normal_cdf(1.0) - 0.8413447460685429485852) < 1e-15);
  CHECK(std::abs(normal_cdf(-3.0) - 0.001349898031630094526652) < 1e-17);
  CHECK_THROWS_AS(normal_cdf(std::nan("")), DomainError);
  CHECK_THROWS_AS(normal_cdf(std::numeric_limits<double>::infinity()), DomainError);
}

TEST_CASE("normal_cdf monotone with reflection identity") {
  std::mt19937_64 gen(7);
  std::uniform_real_distribution<double> u(-9.0, 9.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = u(gen);
    CHECK(std::abs(normal_cdf(x) + normal_cdf(-x) - 1.0) < 1e-12);
  }
  double prev = 0.0;
  for (int i = 0; i <= 4000; ++i) {
    const double v = normal_cdf(-10.0 + 0.005 * i);
    CHECK(v >= prev);
    prev = v;
  }
}

TEST_CASE("inverse normal cdf round trip") {
  for (double p : {1e-30, 1e-8, 0.1, 0.5, 0.9, 1.0 - 1e-9}) {
    CHECK(std::abs(normal_cdf(inverse_normal_cdf(p)) - p) < 1e-14 + 1e-12 * p);
  }
  CHECK_THROWS_AS(inverse_normal_cdf(0.0), DomainError);
}

TEST_CASE("integrate basics") {
  CHECK(std::abs(integrate([](double) { return 1.0; }, Interval(0, 1), 1e-12) - 1.0) < 1e-12);
  CHECK(std::abs(integrate([](double x) { return x; }, Interval(0, 1), 1e-12) - 0.5) < 1e-12);
  CHECK(std::abs(integrate(normal_pdf, Interval(-8, 8), 1e-12) - 1.0) < 2e-12);
  // Sharp peak found by adaptivity.
  // A spike narrower than the first panel's nodes needs breakpoints around it.
  const double w = 1e-3;
  QuadOptions opts;
  opts.abs_tol = 1e-10;
  opts.breakpoints = {0.3};
  for (double k = w; k < 10.0; k *= 2.0) {
    opts.breakpoints.push_back(0.3 - k);
    opts.breakpoints.push_back(0.3 + k);
  }
  const double peak =
      integrate([w](double x) { return normal_pdf((x - 0.3) / w) / w; }, Interval(-5, 5), opts).value;
  CHECK(std::abs(peak - 1.0) < 1e-9);
}

TEST_CASE("integrate reports non-convergence with its last estimate") {
  QuadOptions opts;
  opts.abs_tol = 1e-14;
  opts.max_subintervals = 8;
  try {
    integrate([](double x) { return 1.0 / std::sqrt(x); }, Interval(0.0, 1.0), opts);
    FAIL("expected ConvergenceError");
  } catch (const ConvergenceError& e) {
    CHECK(e.error_bound() > 1e-14);
    CHECK(std::abs(e.last_estimate() - 2.0) < 0.5);
  }
}

TEST_CASE("integrate is linear on random polynomials") {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const double tol = 1e-11;
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> a(6), b(6);
    for (auto& c : a) c = u(gen);
    for (auto& c : b) c = u(gen);
    auto poly = [](const std::vector<double>& c) {
      return [c](double x) {
        double s = 0.0;
        for (auto it = c.rbegin(); it != c.rend(); ++it) s = s * x + *it;
        return s;
      };
    };
    const double alpha = u(gen);
    const double beta = u(gen);
    const Interval dom(-1.5, 2.5);
    const auto f = poly(a);
    const auto g = poly(b);
    const double lhs = integrate([&](double x) { return alpha * f(x) + beta * g(x); }, dom, tol);
    const double rhs = alpha * integrate(f, dom, tol) + beta * integrate(g, dom, tol);
    CHECK(std::abs(lhs - rhs) < 3 * tol);
  }
}

TEST_CASE("find_root_monotone") {
  CHECK(std::abs(find_root_monotone([](double x) { return x - 0.3; }, Interval(0, 1), 1e-14) -
                 0.3) < 1e-14);
  CHECK(std::abs(find_root_monotone([](double x) { return x * x * x; }, Interval(-1, 2), 1e-12)) <
        1e-12);
  CHECK_THROWS_AS(find_root_monotone([](double x) { return x + 5.0; }, Interval(0, 1), 1e-12),
                  BracketError);
  const auto with_derivative = find_root_monotone([](double x) { return std::exp(x) - 2.0; },
                                                  Interval(-3, 3), 1e-13,
                                                  [](double x) { return std::exp(x); });
  CHECK(std::abs(with_derivative - std::log(2.0)) < 1e-13);
}

TEST_CASE("find_root_monotone on random monotone cubics") {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_real_distribution<double> pos(0.01, 2.0);
  for (int i = 0; i < 100; ++i) {
    // g(x) = a (x - r)^3 + b (x - r), a, b > 0: strictly increasing with root r.
    const double a = pos(gen);
    const double b = pos(gen);
    const double r = u(gen);
    auto g = [=](double x) { return a * std::pow(x - r, 3) + b * (x - r); };
    const double tol = 1e-12;
    const double x = find_root_monotone(g, Interval(-3.0, 3.0), tol);
    CHECK(g(x - tol) <= 0.0);
    CHECK(g(x + tol) >= 0.0);
  }
}

TEST_CASE("binary posterior critical level matches logistic inversion") {
  // S(xi) = 1 / (1 + (p0/p1) exp(-k(sigma xi - sigma^2 t / 2))) with k = T/(T-t).
  const double p1 = 0.3, T = 2.0, t = 0.7, sigma = 0.8, K = 0.55;
  const double k = T / (T - t);
  auto S = [&](double xi) {
    return 1.0 / (1.0 + (1.0 - p1) / p1 * std::exp(-k * (sigma * xi - 0.5 * sigma * sigma * t)));
  };
  const double exact =
      (std::log(K / (1.0 - K) * (1.0 - p1) / p1) / k + 0.5 * sigma * sigma * t) / sigma;
  const double root = find_root_monotone([&](double xi) { return S(xi) - K; }, Interval(-10, 10),
                                         1e-13);
  CHECK(std::abs(root - exact) < 1e-12);
}

TEST_CASE("expand_bracket widens until the sign changes") {
  const auto iv = expand_bracket([](double x) { return x - 100.0; }, Interval(0.0, 1.0));
  CHECK(iv.lo() <= 100.0);
  CHECK(iv.hi() >= 100.0);
}

TEST_CASE("normalize_log_weights") {
  const double inf = std::numeric_limits<double>::infinity();
  auto w = normalize_log_weights(std::vector<double>{0.0, 0.0});
  CHECK(w[0] == 0.5);
  CHECK(w[1] == 0.5);
  w = normalize_log_weights(std::vector<double>{1000.0, 1000.0 + std::log(3.0)});
  CHECK(std::abs(w[0] - 0.25) < 1e-12);
  CHECK(std::abs(w[1] - 0.75) < 1e-12);
  w = normalize_log_weights(std::vector<double>{0.0, -inf});
  CHECK(w[0] == 1.0);
  CHECK(w[1] == 0.0);
  CHECK_THROWS_AS(normalize_log_weights(std::vector<double>{-inf, -inf}), DegenerateError);
  CHECK_THROWS_AS(normalize_log_weights(std::vector<double>{0.0, std::nan("")}), DomainError);
}

TEST_CASE("normalize_log_weights is exactly shift invariant") {
  // Dyadic inputs and integer shifts keep x - max exact, so outputs agree bitwise.
  std::mt19937_64 gen(3);
  std::uniform_int_distribution<int> u(-4096, 4096);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> a(7);
    for (auto& v : a) v = u(gen) / 64.0;
    const double c = static_cast<double>(u(gen));
    std::vector<double> b(a);
    for (auto& v : b) v += c;
    CHECK(normalize_log_weights(a) == normalize_log_weights(b));
  }
}

TEST_CASE("log_sum_exp is stable") {
  CHECK(std::abs(log_sum_exp(std::vector<double>{1000.0, 1000.0}) - (1000.0 + std::log(2.0))) <
        1e-12);
}
