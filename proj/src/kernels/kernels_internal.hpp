#pragma once

#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>

#include "infoprice/kernels.hpp"

namespace infoprice::kernels {

// Cephes-style exp: x = n ln2 + r, exp(r) from a (2,3) Pade form.
namespace exp_consts {
inline constexpr double hi = 709.0;
inline constexpr double lo = -708.0;
inline constexpr double log2e = 1.4426950408889634073599;
inline constexpr double ln2_hi = 6.93145751953125e-1;
inline constexpr double ln2_lo = 1.42860682030941723212e-6;
inline constexpr double p0 = 1.26177193074810590878e-4;
inline constexpr double p1 = 3.02994407707441961300e-2;
inline constexpr double p2 = 9.99999999999999999910e-1;
inline constexpr double q0 = 3.00198505138664455042e-6;
inline constexpr double q1 = 2.52448340349684104192e-3;
inline constexpr double q2 = 2.27265548208155028766e-1;
inline constexpr double q3 = 2.00000000000000000009e0;
// Adding 2^52 to an integer-valued double in [0, 2^52) leaves it in the low mantissa bits.
inline constexpr double shifter = 4503599627370496.0;
}  // namespace exp_consts

inline double exp_reference(double x) noexcept {
  using namespace exp_consts;
  if (std::isnan(x)) return x;
  if (x > hi) return std::numeric_limits<double>::infinity();
  if (x < lo) return 0.0;
  const double n = std::nearbyint(x * log2e);
  double r = x - n * ln2_hi;
  r = r - n * ln2_lo;
  const double rr = r * r;
  const double px = r * ((p0 * rr + p1) * rr + p2);
  const double qx = ((q0 * rr + q1) * rr + q2) * rr + q3;
  double e = px / (qx - px);
  e = 1.0 + 2.0 * e;
  const std::uint64_t biased = std::bit_cast<std::uint64_t>((n + 1023.0) + shifter);
  const double scale = std::bit_cast<double>(biased << 52);
  return e * scale;
}

namespace scalar {
void axpby(double a, const double* x, double b, const double* y, double* out, std::size_t n);
void exp(const double* x, double* out, std::size_t n);
void logistic_affine(double c0, double c1, const double* x, double* out, std::size_t n);
SumOfSquares sum_and_squares(const double* x, std::size_t n);
}  // namespace scalar

#if defined(INFOPRICE_HAVE_AVX2)
namespace avx2 {
void axpby(double a, const double* x, double b, const double* y, double* out, std::size_t n);
void exp(const double* x, double* out, std::size_t n);
void logistic_affine(double c0, double c1, const double* x, double* out, std::size_t n);
SumOfSquares sum_and_squares(const double* x, std::size_t n);
}  // namespace avx2
#endif

}  // namespace infoprice::kernels
