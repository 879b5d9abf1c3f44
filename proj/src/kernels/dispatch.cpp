#include <cstdlib>
#include <cstring>

#include "vstsae/kernels/kernels.hpp"

namespace vstsae::kernels {

namespace {

struct Table {
  Isa isa;
  void (*reciprocal_shift)(double, std::span<const double>, std::span<double>);
  double (*dot3)(std::span<const double>, std::span<const double>, std::span<const double>);
};

bool cpu_has(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return true;
    case Isa::kAvx2:
#if defined(VSTSAE_HAVE_AVX2_VARIANT) && (defined(__GNUC__) || defined(__clang__))
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::kNeon:
#if defined(VSTSAE_HAVE_NEON_VARIANT)
      return true;
#else
      return false;
#endif
  }
  return false;
}

Table select() {
  const char* env = std::getenv("VSTSAE_SIMD");
  const bool force_scalar = env != nullptr && std::strcmp(env, "scalar") == 0;
  if (!force_scalar) {
#if defined(VSTSAE_HAVE_AVX2_VARIANT)
    if (cpu_has(Isa::kAvx2)) return {Isa::kAvx2, &avx2::reciprocal_shift, &avx2::dot3};
#endif
#if defined(VSTSAE_HAVE_NEON_VARIANT)
    return {Isa::kNeon, &neon::reciprocal_shift, &neon::dot3};
#endif
  }
  return {Isa::kScalar, &scalar::reciprocal_shift, &scalar::dot3};
}

const Table& table() {
  static const Table t = select();
  return t;
}

}  // namespace

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::kScalar:
      return "scalar";
    case Isa::kAvx2:
      return "avx2";
    case Isa::kNeon:
      return "neon";
  }
  return "unknown";
}

Isa active_isa() { return table().isa; }

bool isa_available(Isa isa) { return cpu_has(isa); }

void reciprocal_shift(double shift, std::span<const double> d, std::span<double> out) {
  table().reciprocal_shift(shift, d, out);
}

double dot3(std::span<const double> a, std::span<const double> b, std::span<const double> c) {
  return table().dot3(a, b, c);
}

void weighted_moments(double shift, std::span<const double> d, std::span<const double> z,
                      std::span<const double> x_colmajor, std::size_t p, std::span<double> scratch,
                      WeightedMoments& out) {
  const std::size_t m = d.size();
  const Table& t = table();
  std::span<double> w = scratch.first(m);
  t.reciprocal_shift(shift, d, w);
  for (std::size_t j = 0; j < p; ++j) {
    const auto xj = x_colmajor.subspan(j * m, m);
    for (std::size_t k = j; k < p; ++k) {
      const double v = t.dot3(w, xj, x_colmajor.subspan(k * m, m));
      out.xx[j * p + k] = v;
      out.xx[k * p + j] = v;
    }
    out.xz[j] = t.dot3(w, xj, z);
  }
  out.zz = t.dot3(w, z, z);
}

}  // namespace vstsae::kernels
