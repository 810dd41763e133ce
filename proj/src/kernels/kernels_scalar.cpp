#include "kernels_internal.hpp"

namespace infoprice::kernels::scalar {

void axpby(double a, const double* x, double b, const double* y, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double ax = a * x[i];
    const double by = b * y[i];
    out[i] = ax + by;
  }
}

void exp(const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = exp_reference(x[i]);
}

void logistic_affine(double c0, double c1, const double* x, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double z = c0 + c1 * x[i];
    out[i] = 1.0 / (1.0 + exp_reference(-z));
  }
}

SumOfSquares sum_and_squares(const double* x, std::size_t n) {
  double s[4] = {0.0, 0.0, 0.0, 0.0};
  double q[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t i = 0; i < n; ++i) {
    s[i % 4] += x[i];
    q[i % 4] += x[i] * x[i];
  }
  return {(s[0] + s[1]) + (s[2] + s[3]), (q[0] + q[1]) + (q[2] + q[3])};
}

}  // namespace infoprice::kernels::scalar
