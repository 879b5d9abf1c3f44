#include <arm_neon.h>

#include "vstsae/kernels/kernels.hpp"

namespace vstsae::kernels::neon {

void reciprocal_shift(double shift, std::span<const double> d, std::span<double> out) {
  const std::size_t n = d.size();
  const float64x2_t vs = vdupq_n_f64(shift);
  const float64x2_t one = vdupq_n_f64(1.0);
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    const float64x2_t v = vaddq_f64(vs, vld1q_f64(d.data() + i));
    vst1q_f64(out.data() + i, vdivq_f64(one, v));
  }
  for (; i < n; ++i) out[i] = 1.0 / (shift + d[i]);
}

double dot3(std::span<const double> a, std::span<const double> b, std::span<const double> c) {
  const std::size_t n = a.size();
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    const float64x2_t ab0 = vmulq_f64(vld1q_f64(a.data() + i), vld1q_f64(b.data() + i));
    const float64x2_t ab1 = vmulq_f64(vld1q_f64(a.data() + i + 2), vld1q_f64(b.data() + i + 2));
    acc0 = vfmaq_f64(acc0, ab0, vld1q_f64(c.data() + i));
    acc1 = vfmaq_f64(acc1, ab1, vld1q_f64(c.data() + i + 2));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; i < n; ++i) acc += a[i] * b[i] * c[i];
  return acc;
}

}  // namespace vstsae::kernels::neon
