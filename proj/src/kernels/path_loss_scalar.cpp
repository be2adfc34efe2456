#include <cmath>

#include "specshare/kernels/path_loss.hpp"

namespace specshare::kernels {

int integer_exponent(double alpha) {
  if (alpha >= 1 && alpha <= 16 && alpha == std::floor(alpha))
    return static_cast<int>(alpha);
  return 0;
}

namespace {

inline double int_pow(double x, int n) {
  double r = 1.0;
  double b = x;
  while (n > 0) {
    if (n & 1) r *= b;
    b *= b;
    n >>= 1;
  }
  return r;
}

}  // namespace

double path_loss_sum_scalar(std::span<const double> distances,
                            std::span<const double> gains, double alpha) {
  const std::size_t n = distances.size() < gains.size() ? distances.size()
                                                        : gains.size();
  double sum = 0.0;
  if (const int k = integer_exponent(alpha); k > 0) {
    for (std::size_t i = 0; i < n; ++i)
      sum += gains[i] / int_pow(distances[i], k);
  } else {
    for (std::size_t i = 0; i < n; ++i)
      sum += gains[i] * std::pow(distances[i], -alpha);
  }
  return sum;
}

}  // namespace specshare::kernels
