#pragma once

#include <cstddef>
#include <span>
#include <string_view>

/// Data-parallel inner loops used by the Monte Carlo drivers.
///
/// Every kernel has a scalar reference implementation and, on x86-64, an AVX2
/// variant. Variants evaluate the same operation sequence lane by lane (no FMA
/// contraction, same reduction tree), so their outputs are bitwise identical;
/// the equivalence tests hold them to that. The variant is chosen at runtime
/// from CPU support and may be forced with INFOPRICE_SIMD=scalar|avx2.
namespace infoprice::kernels {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa) noexcept;

/// Best variant supported by this CPU and build.
Isa detected_isa() noexcept;

/// Variant currently used by the dispatching entry points.
Isa active_isa() noexcept;

/// Throws DomainError if `isa` is not supported here.
void set_active_isa(Isa isa);

/// out[i] = a * x[i] + b * y[i]
void axpby(double a, std::span<const double> x, double b, std::span<const double> y,
           std::span<double> out);

/// out[i] = exp(x[i]); inputs above 709 give +inf, below -708 give 0.
/// Accurate to about one ulp over the finite range.
void exp(std::span<const double> x, std::span<double> out);

/// out[i] = 1 / (1 + exp(-(c0 + c1 * x[i])))
void logistic_affine(double c0, double c1, std::span<const double> x, std::span<double> out);

struct SumOfSquares {
  double sum;
  double sum_sq;
};

/// Sum and sum of squares, accumulated in four interleaved partial sums.
SumOfSquares sum_and_squares(std::span<const double> x);

}  // namespace infoprice::kernels
