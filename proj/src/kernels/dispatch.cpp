#include <atomic>
#include <cstdlib>
#include <string>
#include <string_view>

#include "infoprice/error.hpp"
#include "kernels_internal.hpp"

namespace infoprice::kernels {

namespace {

bool cpu_has_avx2() noexcept {
#if defined(INFOPRICE_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Isa initial_isa() noexcept {
  const Isa best = detected_isa();
  if (const char* env = std::getenv("INFOPRICE_SIMD")) {
    const std::string_view v(env);
    if (v == "scalar") return Isa::scalar;
    if (v == "avx2" && best == Isa::avx2) return Isa::avx2;
  }
  return best;
}

std::atomic<Isa>& current() noexcept {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

void check_sizes(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw DomainError(std::string(what) + ": span length mismatch");
}

}  // namespace

std::string_view isa_name(Isa isa) noexcept { return isa == Isa::avx2 ? "avx2" : "scalar"; }

Isa detected_isa() noexcept { return cpu_has_avx2() ? Isa::avx2 : Isa::scalar; }

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (isa == Isa::avx2 && detected_isa() != Isa::avx2) {
    throw DomainError("AVX2 kernels are not available on this CPU/build");
  }
  current().store(isa, std::memory_order_relaxed);
}

void axpby(double a, std::span<const double> x, double b, std::span<const double> y,
           std::span<double> out) {
  check_sizes(x.size(), out.size(), "axpby");
  check_sizes(y.size(), out.size(), "axpby");
#if defined(INFOPRICE_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::axpby(a, x.data(), b, y.data(), out.data(), out.size());
#endif
  scalar::axpby(a, x.data(), b, y.data(), out.data(), out.size());
}

void exp(std::span<const double> x, std::span<double> out) {
  check_sizes(x.size(), out.size(), "exp");
#if defined(INFOPRICE_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::exp(x.data(), out.data(), out.size());
#endif
  scalar::exp(x.data(), out.data(), out.size());
}

void logistic_affine(double c0, double c1, std::span<const double> x, std::span<double> out) {
  check_sizes(x.size(), out.size(), "logistic_affine");
#if defined(INFOPRICE_HAVE_AVX2)
  if (active_isa() == Isa::avx2) {
    return avx2::logistic_affine(c0, c1, x.data(), out.data(), out.size());
  }
#endif
  scalar::logistic_affine(c0, c1, x.data(), out.data(), out.size());
}

SumOfSquares sum_and_squares(std::span<const double> x) {
#if defined(INFOPRICE_HAVE_AVX2)
  if (active_isa() == Isa::avx2) return avx2::sum_and_squares(x.data(), x.size());
#endif
  return scalar::sum_and_squares(x.data(), x.size());
}

}  // namespace infoprice::kernels
