#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <utility>
#include <vector>

#include "infoprice/random.hpp"

namespace infoprice {

/// Strictly increasing times from 0 to the horizon T (at least two points).
class TimeGrid {
 public:
  explicit TimeGrid(std::vector<double> points);
  static TimeGrid uniform(double horizon, std::size_t steps);

  double horizon() const noexcept { return points_.back(); }
  std::size_t size() const noexcept { return points_.size(); }
  double operator[](std::size_t k) const noexcept { return points_[k]; }
  std::span<const double> points() const noexcept { return points_; }
  /// Index of the grid point equal to t (within 1e-12 * T); throws DomainError otherwise.
  std::size_t index_of(double t) const;

 private:
  std::vector<double> points_;
};

/// Parameters of xi_t = sigma * t * X + beta_t on [0, T].
/// sigma is the information flow rate, in units of time^(-1/2) for a dimensionless X.
struct InfoProcessSpec {
  double sigma;
  double horizon;

  InfoProcessSpec(double sigma, double horizon);
  /// Rough revelation timescale 1 / (sigma^2 Var[X]).
  double revelation_timescale(double factor_variance) const noexcept;
};

/// Gaussian transition of a bridge pinned at (T, 0): beta_t = decay * beta_s + scale * Z.
struct BridgeStep {
  double decay;
  double scale;
};
BridgeStep bridge_step(double s, double t, double horizon);

/// Sample paths on a grid. Values are stored time-major: row k holds every
/// path's value at grid point k, so per-step updates run over contiguous memory.
class PathBundle {
 public:
  PathBundle(TimeGrid grid, std::size_t path_count, std::uint64_t seed);

  const TimeGrid& grid() const noexcept { return grid_; }
  std::size_t path_count() const noexcept { return path_count_; }
  std::uint64_t seed() const noexcept { return seed_; }

  double value(std::size_t path, std::size_t k) const noexcept {
    return values_[k * path_count_ + path];
  }
  std::span<const double> at_index(std::size_t k) const noexcept {
    return {values_.data() + k * path_count_, path_count_};
  }
  std::span<double> at_index(std::size_t k) noexcept {
    return {values_.data() + k * path_count_, path_count_};
  }
  std::vector<double> path(std::size_t i) const;
  std::span<const double> raw() const noexcept { return values_; }

 private:
  TimeGrid grid_;
  std::size_t path_count_;
  std::uint64_t seed_;
  std::vector<double> values_;
};

/// Brownian bridges on [0, T] sampled by the exact forward conditional law.
/// Path i draws from the Philox stream (seed, family, i).
PathBundle sample_bridge_paths(const TimeGrid& grid, std::size_t n, std::uint64_t seed,
                               StreamFamily family = StreamFamily::bridge);

/// Two bridge bundles with cross-covariance rho * min(s,t) (T - max(s,t)) / T:
/// second = rho * first + sqrt(1 - rho^2) * independent bridge.
std::pair<PathBundle, PathBundle> sample_correlated_bridge_pairs(const TimeGrid& grid, double rho,
                                                                 std::size_t n,
                                                                 std::uint64_t seed);

/// xi_t = sigma * t * factor_draws[i] + beta_t, one path per factor draw.
PathBundle sample_information_paths(const InfoProcessSpec& spec,
                                    std::span<const double> factor_draws, const TimeGrid& grid,
                                    std::uint64_t seed);

/// CSV with header "time,path_0,...,path_{n-1}" and one row per grid point.
void write_csv(std::ostream& out, const PathBundle& bundle);

}  // namespace infoprice
