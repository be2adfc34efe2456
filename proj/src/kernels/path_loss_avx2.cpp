#include <immintrin.h>

#include "specshare/kernels/path_loss.hpp"

namespace specshare::kernels {

namespace {

inline __m256d int_pow4(__m256d x, int n) {
  __m256d r = _mm256_set1_pd(1.0);
  __m256d b = x;
  while (n > 0) {
    if (n & 1) r = _mm256_mul_pd(r, b);
    b = _mm256_mul_pd(b, b);
    n >>= 1;
  }
  return r;
}

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

double path_loss_sum_avx2(std::span<const double> distances,
                          std::span<const double> gains, double alpha) {
  const int k = integer_exponent(alpha);
  if (k == 0) return path_loss_sum_scalar(distances, gains, alpha);

  const std::size_t n = distances.size() < gains.size() ? distances.size()
                                                        : gains.size();
  const double* d = distances.data();
  const double* g = gains.data();

  // Two accumulators hide the add latency.
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d p0 = int_pow4(_mm256_loadu_pd(d + i), k);
    const __m256d p1 = int_pow4(_mm256_loadu_pd(d + i + 4), k);
    acc0 = _mm256_add_pd(acc0, _mm256_div_pd(_mm256_loadu_pd(g + i), p0));
    acc1 = _mm256_add_pd(acc1, _mm256_div_pd(_mm256_loadu_pd(g + i + 4), p1));
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d p0 = int_pow4(_mm256_loadu_pd(d + i), k);
    acc0 = _mm256_add_pd(acc0, _mm256_div_pd(_mm256_loadu_pd(g + i), p0));
  }
  double sum = hsum(_mm256_add_pd(acc0, acc1));
  if (i < n) sum += path_loss_sum_scalar(distances.subspan(i, n - i),
                                         gains.subspan(i, n - i), alpha);
  return sum;
}

}  // namespace specshare::kernels
