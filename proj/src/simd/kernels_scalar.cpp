#include "picardnets/simd/kernels.hpp"

#include <algorithm>

namespace picardnets::simd {
namespace {

double dot_scalar(const double* a, const double* b, std::size_t n) {
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void affine_scalar(const double* w, std::size_t rows, std::size_t cols, const double* x, const double* b,
                   double* y) {
  for (std::size_t i = 0; i < rows; ++i) y[i] = dot_scalar(w + i * cols, x, cols) + b[i];
}

void relu_scalar(double* v, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) v[i] = std::max(v[i], 0.0);
}

void leaky_scalar(double* v, std::size_t n, double alpha) {
  for (std::size_t i = 0; i < n; ++i) v[i] = std::max(v[i], alpha * v[i]);
}

void repu_scalar(double* v, std::size_t n, int gamma) {
  for (std::size_t i = 0; i < n; ++i) {
    const double r = std::max(v[i], 0.0);
    double p = r;
    for (int g = 1; g < gamma; ++g) p *= r;
    v[i] = p;
  }
}

}  // namespace

const Kernels& scalar_kernels() {
  static const Kernels k{Isa::Scalar, affine_scalar, relu_scalar, leaky_scalar, repu_scalar, dot_scalar};
  return k;
}

}  // namespace picardnets::simd
