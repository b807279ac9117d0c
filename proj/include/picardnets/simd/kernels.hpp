#pragma once

// Data-parallel inner loops of the forward pass and of the Monte Carlo
// reductions. Every kernel has a scalar reference; wider variants are picked
// at runtime and must agree with the reference up to summation reordering.

#include <cstddef>
#include <string>
#include <vector>

namespace picardnets::simd {

enum class Isa { Scalar, Avx2 };

struct Kernels {
  Isa isa;
  /// y = W x + b for a row-major rows x cols matrix W.
  void (*affine)(const double* w, std::size_t rows, std::size_t cols, const double* x, const double* b,
                 double* y);
  /// v <- max(v, 0)
  void (*relu)(double* v, std::size_t n);
  /// v <- max(v, alpha v)
  void (*leaky_relu)(double* v, std::size_t n, double alpha);
  /// v <- max(v, 0)^gamma
  void (*repu)(double* v, std::size_t n, int gamma);
  double (*dot)(const double* a, const double* b, std::size_t n);
};

const Kernels& scalar_kernels();
bool isa_available(Isa isa);
/// Throws std::invalid_argument when the ISA is not compiled in or not supported by the CPU.
const Kernels& kernels_for(Isa isa);

/// Kernels used by the library. Chosen once from PICARDNETS_KERNELS
/// ("scalar", "avx2", "auto"; default auto) and the CPU feature bits.
const Kernels& active();
/// Overrides the process-wide choice. Not thread-safe against concurrent forward passes.
void set_active(Isa isa);

std::string to_string(Isa isa);
std::vector<Isa> available_isas();

namespace detail {
#ifdef PICARDNETS_HAVE_AVX2_TU
const Kernels& avx2_kernels();
#endif
}  // namespace detail

}  // namespace picardnets::simd
