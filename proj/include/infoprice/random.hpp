#pragma once

#include <array>
#include <cstdint>

namespace infoprice {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
/// Pure function of (key, counter); no hidden state.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> counter,
                                        std::array<std::uint32_t, 2> key) noexcept;

/// Stream families keep draws for different roles disjoint under one seed.
enum class StreamFamily : std::uint32_t {
  bridge = 1,
  bridge_aux = 2,
  factor = 3,
  trial = 4,
  trader = 5,
};

/// Sequential view of the Philox stream identified by (seed, family, index).
/// Draw k of stream i depends only on (seed, family, i, k), so results are
/// independent of how paths are batched or scheduled.
class PathRng {
 public:
  PathRng(std::uint64_t seed, StreamFamily family, std::uint64_t index) noexcept;

  /// Uniform on the open interval (0, 1), 53-bit resolution.
  double uniform() noexcept;
  /// Standard normal (Box-Muller; the paired value is cached).
  double normal() noexcept;

 private:
  void refill() noexcept;

  std::array<std::uint32_t, 2> key_;
  std::uint32_t family_;
  std::uint64_t index_;
  std::uint32_t block_ = 0;
  std::array<std::uint32_t, 4> buffer_{};
  int used_ = 4;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace infoprice
