#include "vstsae/kernels/kernels.hpp"

namespace vstsae::kernels::scalar {

void reciprocal_shift(double shift, std::span<const double> d, std::span<double> out) {
  for (std::size_t i = 0; i < d.size(); ++i) out[i] = 1.0 / (shift + d[i]);
}

double dot3(std::span<const double> a, std::span<const double> b, std::span<const double> c) {
  double acc = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i] * c[i];
  return acc;
}

}  // namespace vstsae::kernels::scalar
