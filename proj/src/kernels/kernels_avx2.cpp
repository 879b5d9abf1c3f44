// Compiled with -mavx2 -mfma; only reached after a runtime CPU check.
#include <immintrin.h>

#include "vstsae/kernels/kernels.hpp"

namespace vstsae::kernels::avx2 {

namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d s = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

}  // namespace

void reciprocal_shift(double shift, std::span<const double> d, std::span<double> out) {
  const std::size_t n = d.size();
  const __m256d vs = _mm256_set1_pd(shift);
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const __m256d v = _mm256_add_pd(vs, _mm256_loadu_pd(d.data() + i));
    _mm256_storeu_pd(out.data() + i, _mm256_div_pd(one, v));
  }
  for (; i < n; ++i) out[i] = 1.0 / (shift + d[i]);
}

double dot3(std::span<const double> a, std::span<const double> b, std::span<const double> c) {
  const std::size_t n = a.size();
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 8 <= n; i += 8) {
    const __m256d ab0 = _mm256_mul_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
    const __m256d ab1 = _mm256_mul_pd(_mm256_loadu_pd(a.data() + i + 4), _mm256_loadu_pd(b.data() + i + 4));
    acc0 = _mm256_fmadd_pd(ab0, _mm256_loadu_pd(c.data() + i), acc0);
    acc1 = _mm256_fmadd_pd(ab1, _mm256_loadu_pd(c.data() + i + 4), acc1);
  }
  for (; i + 4 <= n; i += 4) {
    const __m256d ab = _mm256_mul_pd(_mm256_loadu_pd(a.data() + i), _mm256_loadu_pd(b.data() + i));
    acc0 = _mm256_fmadd_pd(ab, _mm256_loadu_pd(c.data() + i), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i] * c[i];
  return acc;
}

}  // namespace vstsae::kernels::avx2
