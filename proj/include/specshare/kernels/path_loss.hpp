#pragma once

// Weighted path-loss sums, sum_i gain_i * distance_i^-alpha, the inner loop
// of every interference evaluation. A scalar reference and an AVX2 variant
// share one signature; `path_loss_sum` picks one at runtime.
//
// Integer exponents in [1, 16] take a multiply-only path in both variants.
// Other exponents fall back to std::pow, where the AVX2 variant defers to
// the scalar code.

#include <cstddef>
#include <span>
#include <string_view>

namespace specshare::kernels {

enum class Isa { Scalar, Avx2 };

std::string_view to_string(Isa isa);

using PathLossSumFn = double (*)(std::span<const double> distances,
                                 std::span<const double> gains, double alpha);

double path_loss_sum_scalar(std::span<const double> distances,
                            std::span<const double> gains, double alpha);

#if defined(SPECSHARE_HAVE_AVX2)
double path_loss_sum_avx2(std::span<const double> distances,
                          std::span<const double> gains, double alpha);
#endif

/// Whether this build contains `isa` and the running CPU supports it.
bool isa_available(Isa isa);

/// The variant chosen at first use. SPECSHARE_ISA=scalar forces the
/// reference path.
Isa active_isa();

PathLossSumFn kernel_for(Isa isa);

inline double path_loss_sum(std::span<const double> distances,
                            std::span<const double> gains, double alpha) {
  static const PathLossSumFn fn = kernel_for(active_isa());
  return fn(distances, gains, alpha);
}

/// Exponent as a small positive integer, or 0 when the pow path is needed.
int integer_exponent(double alpha);

}  // namespace specshare::kernels
