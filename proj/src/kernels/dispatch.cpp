#include <cstdlib>
#include <string_view>

#include "specshare/kernels/path_loss.hpp"

namespace specshare::kernels {

std::string_view to_string(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return "scalar";
    case Isa::Avx2:
      return "avx2";
  }
  return "?";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::Scalar:
      return true;
    case Isa::Avx2:
#if defined(SPECSHARE_HAVE_AVX2)
      return __builtin_cpu_supports("avx2");
#else
      return false;
#endif
  }
  return false;
}

Isa active_isa() {
  static const Isa chosen = [] {
    if (const char* env = std::getenv("SPECSHARE_ISA");
        env && std::string_view(env) == "scalar")
      return Isa::Scalar;
    return isa_available(Isa::Avx2) ? Isa::Avx2 : Isa::Scalar;
  }();
  return chosen;
}

PathLossSumFn kernel_for(Isa isa) {
#if defined(SPECSHARE_HAVE_AVX2)
  if (isa == Isa::Avx2 && isa_available(Isa::Avx2)) return &path_loss_sum_avx2;
#endif
  (void)isa;
  return &path_loss_sum_scalar;
}

}  // namespace specshare::kernels
