#pragma once

// Elementwise kernels used in the time-stepping inner loops. Each kernel has a
// scalar reference implementation and, where the target supports it, an AVX2
// variant. Variants perform the same IEEE operations in the same order (no FMA
// contraction), so they agree bit for bit and dispatch never changes results.

#include <cstddef>
#include <string_view>

#include "glnematic/aligned.hpp"

namespace glnematic::simd {

struct KernelTable {
  std::string_view name;

  // o_c = inv_eps2 * (1 - |d|^2) * d_c
  void (*gl_term)(const double* d0, const double* d1, const double* d2, double* o0, double* o1,
                  double* o2, std::size_t count, double inv_eps2);

  // out = a0*b0 + a1*b1
  void (*dot2)(const double* a0, const double* b0, const double* a1, const double* b1,
               double* out, std::size_t count);

  // out = -(a0*b0 + a1*b1 + a2*b2)
  void (*neg_dot3)(const double* a0, const double* b0, const double* a1, const double* b1,
                   const double* a2, const double* b2, double* out, std::size_t count);

  // Harmonic-map tension for unit fields: t_c = lap_c + (sum_j |g_j|^2) * d_c, with the
  // gradient given as six arrays g[2*c + j] = d_j d_c.
  void (*harmonic_tension)(const double* const* lap, const double* const* grad,
                           const double* const* d, double* const* out, std::size_t count);

  // d <- d / |d|; returns the smallest norm seen.
  double (*normalize3)(double* d0, double* d1, double* d2, std::size_t count);

  // z *= s
  void (*scale_complex)(Complex* z, std::size_t count, double s);

  // out = (keep * prev + dt * rhs) * inv_denom   (per-mode real factor)
  void (*implicit_update)(const Complex* prev, const Complex* rhs, const double* inv_denom,
                          double keep, double dt, Complex* out, std::size_t count);

  // out = i * k * in
  void (*mul_ik)(const Complex* in, const double* k, Complex* out, std::size_t count);

  // Remove the longitudinal part of (u1, u2): s = (k1 u1 + k2 u2) * inv_k2; u -= k s.
  void (*leray)(Complex* u1, Complex* u2, const double* k1, const double* k2,
                const double* inv_k2, std::size_t count);

  // z = keep ? z : 0, with keep stored as 0.0 / 1.0.
  void (*apply_mask)(Complex* z, const double* keep, std::size_t count);
};

const KernelTable& scalar_kernels();

/// AVX2 table, or nullptr when the build or the running CPU lacks AVX2.
const KernelTable* avx2_kernels();

/// Table chosen once per process: AVX2 when available unless the environment
/// variable GLNEMATIC_SIMD is set to "scalar".
const KernelTable& active_kernels();

}  // namespace glnematic::simd
