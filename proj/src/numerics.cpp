#include "infoprice/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/erf.hpp>

#include "infoprice/error.hpp"

namespace infoprice {

Interval::Interval(double lo, double hi) : lo_(lo), hi_(hi) {
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
    throw DomainError("interval requires finite lo < hi, got [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  }
}

double Interval::clamp(double x) const noexcept { return std::clamp(x, lo_, hi_); }

double QuadratureRule::apply(const std::function<double(double)>& f) const {
  double sum = 0.0;
  for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
  return sum;
}

namespace {

struct ReferenceRule {
  std::vector<double> nodes;    // on [-1, 1], increasing
  std::vector<double> weights;
};

ReferenceRule legendre_reference(std::size_t n) {
  ReferenceRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const std::size_t half = (n + 1) / 2;
  for (std::size_t i = 0; i < half; ++i) {
    double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                        (static_cast<double>(n) + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0;
      double p1 = x;
      for (std::size_t k = 2; k <= n; ++k) {
        const double kd = static_cast<double>(k);
        const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
        p0 = p1;
        p1 = p2;
      }
      dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    // Recompute the derivative at the converged node.
    double p0 = 1.0;
    double p1 = x;
    for (std::size_t k = 2; k <= n; ++k) {
      const double kd = static_cast<double>(k);
      const double p2 = ((2.0 * kd - 1.0) * x * p1 - (kd - 1.0) * p0) / kd;
      p0 = p1;
      p1 = p2;
    }
    dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
    const double w = 2.0 / ((1.0 - x * x) * dp * dp);
    rule.nodes[i] = -x;
    rule.nodes[n - 1 - i] = x;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

const ReferenceRule& panel_rule() {
  static const ReferenceRule rule = legendre_reference(10);
  return rule;
}

double apply_reference(const ReferenceRule& rule, const std::function<double(double)>& f, double a,
                       double b) {
  const double half = 0.5 * (b - a);
  const double mid = 0.5 * (a + b);
  double sum = 0.0;
  for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
    sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
  }
  return half * sum;
}

struct Panel {
  double a;
  double b;
  double value;
  double error;
};

Panel evaluate_panel(const std::function<double(double)>& f, double a, double b) {
  const auto& rule = panel_rule();
  const double m = 0.5 * (a + b);
  const double whole = apply_reference(rule, f, a, b);
  const double halves = apply_reference(rule, f, a, m) + apply_reference(rule, f, m, b);
  double err = std::abs(whole - halves);
  if (!std::isfinite(halves)) err = std::numeric_limits<double>::infinity();
  return {a, b, halves, err};
}

bool by_error(const Panel& x, const Panel& y) { return x.error < y.error; }

}  // namespace

QuadratureRule gauss_legendre(std::size_t n, const Interval& domain) {
  if (n == 0) throw DomainError("gauss_legendre requires at least one node");
  const auto ref = legendre_reference(n);
  QuadratureRule rule{{}, {}, domain};
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const double half = 0.5 * domain.width();
  for (std::size_t i = 0; i < n; ++i) {
    rule.nodes[i] = domain.mid() + half * ref.nodes[i];
    rule.weights[i] = half * ref.weights[i];
  }
  return rule;
}

double normal_pdf(double x) noexcept {
  return std::exp(-0.5 * x * x) * (0.5 * std::numbers::inv_sqrtpi * std::numbers::sqrt2);
}

double log_normal_pdf(double x) noexcept {
  return -0.5 * x * x - 0.5 * std::log(2.0 * std::numbers::pi);
}

double normal_cdf(double x) {
  if (!std::isfinite(x)) throw DomainError("normal_cdf: non-finite argument");
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

double inverse_normal_cdf(double p) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("inverse_normal_cdf: p must lie in (0, 1)");
  return -std::numbers::sqrt2 * boost::math::erfc_inv(2.0 * p);
}

QuadResult integrate(const std::function<double(double)>& f, const Interval& domain,
                     const QuadOptions& options) {
  if (!(options.abs_tol > 0.0) && !(options.rel_tol > 0.0)) {
    throw DomainError("integrate: tolerance must be positive");
  }

  std::vector<double> cuts{domain.lo()};
  std::vector<double> inner;
  for (double p : options.breakpoints) {
    if (p > domain.lo() && p < domain.hi()) inner.push_back(p);
  }
  std::sort(inner.begin(), inner.end());
  for (double p : inner) {
    if (p > cuts.back()) cuts.push_back(p);
  }
  cuts.push_back(domain.hi());

  std::vector<Panel> heap;
  const std::size_t per_segment = std::max<std::size_t>(1, options.initial_panels);
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    const double a = cuts[s];
    const double h = (cuts[s + 1] - a) / static_cast<double>(per_segment);
    for (std::size_t k = 0; k < per_segment; ++k) {
      const double lo = a + h * static_cast<double>(k);
      const double hi = (k + 1 == per_segment) ? cuts[s + 1] : lo + h;
      heap.push_back(evaluate_panel(f, lo, hi));
    }
  }
  std::make_heap(heap.begin(), heap.end(), by_error);

  auto totals = [&heap] {
    double value = 0.0;
    double error = 0.0;
    for (const auto& p : heap) {
      value += p.value;
      error += p.error;
    }
    return std::pair{value, error};
  };

  auto [value, error] = totals();
  while (true) {
    const double target = std::max(options.abs_tol, options.rel_tol * std::abs(value));
    if (error <= target) break;
    if (heap.size() >= options.max_subintervals) {
      throw ConvergenceError("integrate: subinterval budget exhausted", value, error);
    }
    std::pop_heap(heap.begin(), heap.end(), by_error);
    const Panel worst = heap.back();
    heap.pop_back();
    const double m = 0.5 * (worst.a + worst.b);
    if (!(m > worst.a && m < worst.b)) {
      throw ConvergenceError("integrate: panel cannot be bisected further", value, error);
    }
    const Panel left = evaluate_panel(f, worst.a, m);
    const Panel right = evaluate_panel(f, m, worst.b);
    value += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push_back(left);
    std::push_heap(heap.begin(), heap.end(), by_error);
    heap.push_back(right);
    std::push_heap(heap.begin(), heap.end(), by_error);
    // Running sums drift; refresh them now and then.
    if (heap.size() % 64 == 0) std::tie(value, error) = totals();
  }
  std::tie(value, error) = totals();
  if (!std::isfinite(value)) {
    throw ConvergenceError("integrate: non-finite integrand", value, error);
  }
  return {value, error, heap.size()};
}

double integrate(const std::function<double(double)>& f, const Interval& domain, double tol) {
  QuadOptions options;
  options.abs_tol = tol;
  return integrate(f, domain, options).value;
}

double find_root_monotone(const std::function<double(double)>& g, const Interval& bracket,
                          double tol, const std::function<double(double)>& derivative) {
  if (!(tol > 0.0)) throw DomainError("find_root_monotone: tol must be positive");
  double a = bracket.lo();
  double b = bracket.hi();
  double ga = g(a);
  double gb = g(b);
  if (ga == 0.0) return a;
  if (gb == 0.0) return b;
  if (std::signbit(ga) == std::signbit(gb)) {
    throw BracketError("find_root_monotone: no sign change over [" + std::to_string(a) + ", " +
                       std::to_string(b) + "]");
  }

  // Start from the regula falsi point.
  double x = a - ga * (b - a) / (gb - ga);
  if (!(x > a && x < b)) x = 0.5 * (a + b);
  double x_prev = a;
  double g_prev = ga;
  double width_two_back = b - a;
  double width_one_back = b - a;

  for (int iter = 0; iter < 500; ++iter) {
    const double gx = g(x);
    if (gx == 0.0) return x;
    if (std::signbit(gx) == std::signbit(ga)) {
      a = x;
      ga = gx;
    } else {
      b = x;
      gb = gx;
    }
    const double width = b - a;
    if (width < tol) return 0.5 * (a + b);

    double slope = derivative ? derivative(x) : (gx - g_prev) / (x - x_prev);
    double candidate = x - gx / slope;
    const bool stalled = width > 0.5 * width_two_back;
    if (!std::isfinite(candidate) || !(candidate > a && candidate < b) || stalled) {
      candidate = 0.5 * (a + b);
    }
    width_two_back = width_one_back;
    width_one_back = width;
    x_prev = x;
    g_prev = gx;
    x = candidate;
  }
  return 0.5 * (a + b);
}

Interval expand_bracket(const std::function<double(double)>& g, Interval start,
                        int max_expansions) {
  double lo = start.lo();
  double hi = start.hi();
  for (int i = 0; i <= max_expansions; ++i) {
    const double glo = g(lo);
    const double ghi = g(hi);
    if (glo == 0.0 || ghi == 0.0 || std::signbit(glo) != std::signbit(ghi)) return {lo, hi};
    const double mid = 0.5 * (lo + hi);
    const double half = hi - lo;
    lo = mid - half;
    hi = mid + half;
  }
  throw BracketError("expand_bracket: no sign change found");
}

double log_sum_exp(std::span<const double> logw) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : logw) m = std::max(m, v);
  if (m == -std::numeric_limits<double>::infinity()) return m;
  double s = 0.0;
  for (double v : logw) s += std::exp(v - m);
  return m + std::log(s);
}

std::vector<double> normalize_log_weights(std::span<const double> logw) {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : logw) {
    if (std::isnan(v)) throw DomainError("normalize_log_weights: NaN log weight");
    m = std::max(m, v);
  }
  if (logw.empty() || m == -std::numeric_limits<double>::infinity()) {
    throw DegenerateError("normalize_log_weights: every log weight is -inf");
  }
  if (m == std::numeric_limits<double>::infinity()) {
    throw DomainError("normalize_log_weights: +inf log weight");
  }
  std::vector<double> w(logw.size());
  double s = 0.0;
  for (std::size_t i = 0; i < logw.size(); ++i) {
    w[i] = std::exp(logw[i] - m);
    s += w[i];
  }
  for (double& v : w) v /= s;
  return w;
}

}  // namespace infoprice
