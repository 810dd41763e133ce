#include "infoprice/stochastic.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <string>

#include "infoprice/csv.hpp"
#include "infoprice/error.hpp"
#include "infoprice/kernels.hpp"

namespace infoprice {

TimeGrid::TimeGrid(std::vector<double> points) : points_(std::move(points)) {
  if (points_.size() < 2) throw DomainError("TimeGrid needs at least two points");
  if (points_.front() != 0.0) throw DomainError("TimeGrid must start at 0");
  for (std::size_t k = 1; k < points_.size(); ++k) {
    if (!(points_[k] > points_[k - 1]) || !std::isfinite(points_[k])) {
      throw DomainError("TimeGrid points must be finite and strictly increasing");
    }
  }
}

TimeGrid TimeGrid::uniform(double horizon, std::size_t steps) {
  if (steps == 0) throw DomainError("TimeGrid::uniform needs at least one step");
  if (!(horizon > 0.0)) throw DomainError("TimeGrid horizon must be positive");
  std::vector<double> pts(steps + 1);
  for (std::size_t k = 0; k <= steps; ++k) {
    pts[k] = horizon * static_cast<double>(k) / static_cast<double>(steps);
  }
  pts.back() = horizon;
  return TimeGrid(std::move(pts));
}

std::size_t TimeGrid::index_of(double t) const {
  const double tol = 1e-12 * horizon();
  for (std::size_t k = 0; k < points_.size(); ++k) {
    if (std::abs(points_[k] - t) <= tol) return k;
  }
  throw DomainError("time " + std::to_string(t) + " is not a grid point");
}

InfoProcessSpec::InfoProcessSpec(double sigma_, double horizon_) : sigma(sigma_), horizon(horizon_) {
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) {
    throw DomainError("information flow rate must be finite and >= 0");
  }
  if (!(horizon > 0.0) || !std::isfinite(horizon)) {
    throw DomainError("information horizon must be finite and > 0");
  }
}

double InfoProcessSpec::revelation_timescale(double factor_variance) const noexcept {
  return 1.0 / (sigma * sigma * factor_variance);
}

BridgeStep bridge_step(double s, double t, double horizon) {
  if (!(s >= 0.0 && s < t && t <= horizon)) {
    throw DomainError("bridge_step requires 0 <= s < t <= T");
  }
  const double remaining = horizon - s;
  const double decay = (horizon - t) / remaining;
  const double variance = (t - s) * (horizon - t) / remaining;
  return {decay, std::sqrt(variance)};
}

PathBundle::PathBundle(TimeGrid grid, std::size_t path_count, std::uint64_t seed)
    : grid_(std::move(grid)),
      path_count_(path_count),
      seed_(seed),
      values_(grid_.size() * path_count, 0.0) {
  if (path_count == 0) throw DomainError("PathBundle needs at least one path");
}

std::vector<double> PathBundle::path(std::size_t i) const {
  std::vector<double> out(grid_.size());
  for (std::size_t k = 0; k < grid_.size(); ++k) out[k] = value(i, k);
  return out;
}

PathBundle sample_bridge_paths(const TimeGrid& grid, std::size_t n, std::uint64_t seed,
                               StreamFamily family) {
  PathBundle bundle(grid, n, seed);
  std::vector<PathRng> streams;
  streams.reserve(n);
  for (std::size_t i = 0; i < n; ++i) streams.emplace_back(seed, family, i);

  std::vector<double> z(n);
  const double horizon = grid.horizon();
  for (std::size_t k = 1; k < grid.size(); ++k) {
    const BridgeStep step = bridge_step(grid[k - 1], grid[k], horizon);
    for (std::size_t i = 0; i < n; ++i) z[i] = streams[i].normal();
    kernels::axpby(step.decay, bundle.at_index(k - 1), step.scale, z, bundle.at_index(k));
  }
  // The pin is exact; avoid -0.0 from 0 * negative.
  auto last = bundle.at_index(grid.size() - 1);
  std::fill(last.begin(), last.end(), 0.0);
  return bundle;
}

std::pair<PathBundle, PathBundle> sample_correlated_bridge_pairs(const TimeGrid& grid, double rho,
                                                                 std::size_t n,
                                                                 std::uint64_t seed) {
  if (!(rho >= -1.0 && rho <= 1.0)) throw DomainError("correlation must lie in [-1, 1]");
  PathBundle first = sample_bridge_paths(grid, n, seed, StreamFamily::bridge);
  PathBundle second = sample_bridge_paths(grid, n, seed, StreamFamily::bridge_aux);
  const double mix = std::sqrt(1.0 - rho * rho);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    kernels::axpby(rho, first.at_index(k), mix, second.at_index(k), second.at_index(k));
  }
  return {std::move(first), std::move(second)};
}

PathBundle sample_information_paths(const InfoProcessSpec& spec,
                                    std::span<const double> factor_draws, const TimeGrid& grid,
                                    std::uint64_t seed) {
  if (factor_draws.empty()) throw DomainError("sample_information_paths: no factor draws");
  if (std::abs(grid.horizon() - spec.horizon) > 1e-12 * spec.horizon) {
    throw DomainError("sample_information_paths: grid horizon differs from the process horizon");
  }
  PathBundle bundle = sample_bridge_paths(grid, factor_draws.size(), seed);
  for (std::size_t k = 0; k < grid.size(); ++k) {
    kernels::axpby(spec.sigma * grid[k], factor_draws, 1.0, bundle.at_index(k),
                   bundle.at_index(k));
  }
  return bundle;
}

void write_csv(std::ostream& out, const PathBundle& bundle) {
  CsvWriter csv(out);
  std::vector<std::string> header{"time"};
  for (std::size_t i = 0; i < bundle.path_count(); ++i) header.push_back("path_" + std::to_string(i));
  csv.header(header);
  std::vector<double> row(bundle.path_count() + 1);
  for (std::size_t k = 0; k < bundle.grid().size(); ++k) {
    row[0] = bundle.grid()[k];
    const auto values = bundle.at_index(k);
    std::copy(values.begin(), values.end(), row.begin() + 1);
    csv.row(row);
  }
}

}  // namespace infoprice
