#pragma once

// Data-parallel inner loops behind GLS / REML evaluation.
//
// Every primitive has a scalar reference implementation; SIMD variants are
// compiled per target and chosen once at runtime. Variants are only required
// to agree with the scalar reference to rounding (summation order differs).

#include <cstddef>
#include <span>
#include <string_view>

namespace vstsae::kernels {

enum class Isa { kScalar, kAvx2, kNeon };

std::string_view isa_name(Isa isa);

/// ISA picked at first use. VSTSAE_SIMD=scalar in the environment forces the
/// reference path.
Isa active_isa();

/// True when this binary carries the variant and the CPU can run it.
bool isa_available(Isa isa);

/// out[i] = 1 / (shift + d[i]).
void reciprocal_shift(double shift, std::span<const double> d, std::span<double> out);
/// sum_i a[i] * b[i] * c[i].
double dot3(std::span<const double> a, std::span<const double> b, std::span<const double> c);

namespace scalar {
void reciprocal_shift(double shift, std::span<const double> d, std::span<double> out);
double dot3(std::span<const double> a, std::span<const double> b, std::span<const double> c);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
#define VSTSAE_HAVE_AVX2_VARIANT 1
namespace avx2 {
void reciprocal_shift(double shift, std::span<const double> d, std::span<double> out);
double dot3(std::span<const double> a, std::span<const double> b, std::span<const double> c);
}  // namespace avx2
#endif

#if defined(__aarch64__)
#define VSTSAE_HAVE_NEON_VARIANT 1
namespace neon {
void reciprocal_shift(double shift, std::span<const double> d, std::span<double> out);
double dot3(std::span<const double> a, std::span<const double> b, std::span<const double> c);
}  // namespace neon
#endif

/// Cross-moments of the columns of a column-major m x p design matrix under
/// weights w_i = 1/(shift + d_i):
///   xx[j*p + k] = sum_i w_i x_ij x_ik   (full symmetric p x p, row-major)
///   xz[j]       = sum_i w_i x_ij z_i
///   zz          = sum_i w_i z_i^2
/// `scratch` must hold m doubles and receives the weights.
struct WeightedMoments {
  std::span<double> xx;
  std::span<double> xz;
  double zz = 0.0;
};

void weighted_moments(double shift, std::span<const double> d, std::span<const double> z,
                      std::span<const double> x_colmajor, std::size_t p, std::span<double> scratch,
                      WeightedMoments& out);

}  // namespace vstsae::kernels
