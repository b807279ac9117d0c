#include "picardnets/simd/kernels.hpp"

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string_view>

namespace picardnets::simd {
namespace {

bool cpu_has_avx2() {
#if defined(PICARDNETS_HAVE_AVX2_TU) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const Kernels* initial_choice() {
  const char* env = std::getenv("PICARDNETS_KERNELS");
  const std::string_view want = env != nullptr ? env : "auto";
  if (want == "scalar") return &scalar_kernels();
  if (want == "avx2") return &kernels_for(Isa::Avx2);
  return cpu_has_avx2() ? &kernels_for(Isa::Avx2) : &scalar_kernels();
}

std::atomic<const Kernels*>& slot() {
  static std::atomic<const Kernels*> current{initial_choice()};
  return current;
}

}  // namespace

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
      return cpu_has_avx2();
  }
  return false;
}

const Kernels& kernels_for(Isa isa) {
  if (!isa_available(isa)) throw std::invalid_argument("kernel set not available: " + to_string(isa));
#ifdef PICARDNETS_HAVE_AVX2_TU
  if (isa == Isa::Avx2) return detail::avx2_kernels();
#endif
  return scalar_kernels();
}

const Kernels& active() { return *slot().load(std::memory_order_acquire); }

void set_active(Isa isa) { slot().store(&kernels_for(isa), std::memory_order_release); }

std::string to_string(Isa isa) { return isa == Isa::Avx2 ? "avx2" : "scalar"; }

std::vector<Isa> available_isas() {
  std::vector<Isa> out{Isa::Scalar};
  if (isa_available(Isa::Avx2)) out.push_back(Isa::Avx2);
  return out;
}

}  // namespace picardnets::simd
