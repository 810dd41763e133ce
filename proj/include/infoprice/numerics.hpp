#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

namespace infoprice {

/// Closed interval [lo, hi] with lo < hi, both finite.
class Interval {
 public:
  Interval(double lo, double hi);

  double lo() const noexcept { return lo_; }
  double hi() const noexcept { return hi_; }
  double width() const noexcept { return hi_ - lo_; }
  double mid() const noexcept { return 0.5 * (lo_ + hi_); }
  bool contains(double x) const noexcept { return x >= lo_ && x <= hi_; }
  double clamp(double x) const noexcept;

 private:
  double lo_;
  double hi_;
};

/// Fixed quadrature rule: nodes strictly inside the domain and increasing,
/// weights strictly positive and summing to the domain width.
struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  Interval domain;

  double apply(const std::function<double(double)>& f) const;
};

/// n-point Gauss-Legendre rule mapped onto `domain`.
QuadratureRule gauss_legendre(std::size_t n, const Interval& domain);

// Gaussian special functions.

double normal_pdf(double x) noexcept;
double log_normal_pdf(double x) noexcept;

/// Standard normal distribution function. Throws DomainError on non-finite input.
double normal_cdf(double x);

/// Inverse of normal_cdf on (0, 1).
double inverse_normal_cdf(double p);

// Adaptive quadrature.

struct QuadOptions {
  double abs_tol = 1e-12;
  double rel_tol = 0.0;
  /// Points at which the domain is pre-split (outside points are ignored).
  std::vector<double> breakpoints{};
  /// Initial number of equal panels per breakpoint segment.
  std::size_t initial_panels = 1;
  std::size_t max_subintervals = 4000;
};

struct QuadResult {
  double value;
  double error;
  std::size_t subintervals;
};

/// Globally adaptive Gauss-Legendre quadrature with interval bisection.
/// The error of a panel is estimated by comparing the rule on the panel
/// with the rule on its two halves. Throws ConvergenceError (carrying the
/// last estimate and error bound) when the subinterval budget is exhausted.
QuadResult integrate(const std::function<double(double)>& f, const Interval& domain,
                     const QuadOptions& options);

/// integrate() with an absolute tolerance; returns the estimate only.
double integrate(const std::function<double(double)>& f, const Interval& domain, double tol);

// Root finding.

/// Root of a strictly monotone function on a sign-changing bracket, to a
/// bracket width below `tol` (or an exact zero of g). Newton steps (using
/// `derivative` when given, secant slopes otherwise) are accepted only while
/// they stay inside the current bracket and keep shrinking it; otherwise the
/// step falls back to bisection.
/// Throws BracketError when g(lo) and g(hi) have the same strict sign.
double find_root_monotone(const std::function<double(double)>& g, const Interval& bracket,
                          double tol,
                          const std::function<double(double)>& derivative = nullptr);

/// Grows [lo, hi] geometrically around its midpoint until g changes sign.
/// Throws BracketError after `max_expansions` doublings.
Interval expand_bracket(const std::function<double(double)>& g, Interval start,
                        int max_expansions = 60);

// Log-space weights.

/// log(sum(exp(logw))) computed by shifting with the maximum.
double log_sum_exp(std::span<const double> logw);

/// exp(logw - max) / sum, so the result sums to one. -inf entries map to 0.
/// Throws DegenerateError when every entry is -inf (or the input is empty).
std::vector<double> normalize_log_weights(std::span<const double> logw);

}  // namespace infoprice
