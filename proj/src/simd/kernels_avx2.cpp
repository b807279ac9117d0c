// Compiled with -mavx2 -mfma. Nothing in here may run before the dispatcher
// has confirmed both feature bits.
#include "picardnets/simd/kernels.hpp"

#include <immintrin.h>

namespace picardnets::simd::detail {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

double dot_avx2(const double* a, const double* b, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i + 4), _mm256_loadu_pd(b + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(a + i), _mm256_loadu_pd(b + i), acc0);
  double sum = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) sum += a[i] * b[i];
  return sum;
}

void affine_avx2(const double* w, std::size_t rows, std::size_t cols, const double* x, const double* b,
                 double* y) {
  if (cols < 4) {
    // Narrow inputs (the first layer of most nets here): vectorize across rows instead.
    std::size_t i = 0;
    for (; i + 4 <= rows; i += 4) {
      __m256d acc = _mm256_loadu_pd(b + i);
      for (std::size_t j = 0; j < cols; ++j) {
        const __m256d wcol = _mm256_set_pd(w[(i + 3) * cols + j], w[(i + 2) * cols + j],
                                           w[(i + 1) * cols + j], w[i * cols + j]);
        acc = _mm256_fmadd_pd(wcol, _mm256_set1_pd(x[j]), acc);
      }
      _mm256_storeu_pd(y + i, acc);
    }
    for (; i < rows; ++i) {
      double s = b[i];
      for (std::size_t j = 0; j < cols; ++j) s += w[i * cols + j] * x[j];
      y[i] = s;
    }
    return;
  }
  for (std::size_t i = 0; i < rows; ++i) y[i] = dot_avx2(w + i * cols, x, cols) + b[i];
}

void relu_avx2(double* v, std::size_t n) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(v + i, _mm256_max_pd(_mm256_loadu_pd(v + i), zero));
  for (; i < n; ++i) v[i] = v[i] > 0.0 ? v[i] : 0.0;
}

void leaky_avx2(double* v, std::size_t n, double alpha) {
  const __m256d a = _mm256_set1_pd(alpha);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d x = _mm256_loadu_pd(v + i);
    _mm256_storeu_pd(v + i, _mm256_max_pd(x, _mm256_mul_pd(a, x)));
  }
  for (; i < n; ++i) {
    const double s = alpha * v[i];
    v[i] = v[i] > s ? v[i] : s;
  }
}

void repu_avx2(double* v, std::size_t n, int gamma) {
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d r = _mm256_max_pd(_mm256_loadu_pd(v + i), zero);
    __m256d p = r;
    for (int g = 1; g < gamma; ++g) p = _mm256_mul_pd(p, r);
    _mm256_storeu_pd(v + i, p);
  }
  for (; i < n; ++i) {
    const double r = v[i] > 0.0 ? v[i] : 0.0;
    double p = r;
    for (int g = 1; g < gamma; ++g) p *= r;
    v[i] = p;
  }
}

}  // namespace

const Kernels& avx2_kernels() {
  static const Kernels k{Isa::Avx2, affine_avx2, relu_avx2, leaky_avx2, repu_avx2, dot_avx2};
  return k;
}

}  // namespace picardnets::simd::detail
