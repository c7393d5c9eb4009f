#include <algorithm>
#include <cmath>
#include <limits>

#include "glnematic/simd.hpp"

namespace glnematic::simd {
namespace {

void gl_term(const double* d0, const double* d1, const double* d2, double* o0, double* o1,
             double* o2, std::size_t count, double inv_eps2) {
  for (std::size_t i = 0; i < count; ++i) {
    const double sq = d0[i] * d0[i] + d1[i] * d1[i] + d2[i] * d2[i];
    const double s = inv_eps2 * (1.0 - sq);
    o0[i] = s * d0[i];
    o1[i] = s * d1[i];
    o2[i] = s * d2[i];
  }
}

void dot2(const double* a0, const double* b0, const double* a1, const double* b1, double* out,
          std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) out[i] = a0[i] * b0[i] + a1[i] * b1[i];
}

void neg_dot3(const double* a0, const double* b0, const double* a1, const double* b1,
              const double* a2, const double* b2, double* out, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i)
    out[i] = -(a0[i] * b0[i] + a1[i] * b1[i] + a2[i] * b2[i]);
}

void harmonic_tension(const double* const* lap, const double* const* grad, const double* const* d,
                      double* const* out, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i) {
    double g2 = grad[0][i] * grad[0][i];
    for (int q = 1; q < 6; ++q) g2 = g2 + grad[q][i] * grad[q][i];
    for (int c = 0; c < 3; ++c) out[c][i] = lap[c][i] + g2 * d[c][i];
  }
}

double normalize3(double* d0, double* d1, double* d2, std::size_t count) {
  double min_norm = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < count; ++i) {
    const double r = std::sqrt(d0[i] * d0[i] + d1[i] * d1[i] + d2[i] * d2[i]);
    min_norm = std::min(min_norm, r);
    d0[i] = d0[i] / r;
    d1[i] = d1[i] / r;
    d2[i] = d2[i] / r;
  }
  return min_norm;
}

void scale_complex(Complex* z, std::size_t count, double s) {
  auto* p = reinterpret_cast<double*>(z);
  for (std::size_t i = 0; i < 2 * count; ++i) p[i] = p[i] * s;
}

void implicit_update(const Complex* prev, const Complex* rhs, const double* inv_denom, double keep,
                     double dt, Complex* out, std::size_t count) {
  const auto* a = reinterpret_cast<const double*>(prev);
  const auto* b = reinterpret_cast<const double*>(rhs);
  auto* o = reinterpret_cast<double*>(out);
  for (std::size_t i = 0; i < count; ++i) {
    o[2 * i] = (keep * a[2 * i] + dt * b[2 * i]) * inv_denom[i];
    o[2 * i + 1] = (keep * a[2 * i + 1] + dt * b[2 * i + 1]) * inv_denom[i];
  }
}

void mul_ik(const Complex* in, const double* k, Complex* out, std::size_t count) {
  const auto* a = reinterpret_cast<const double*>(in);
  auto* o = reinterpret_cast<double*>(out);
  for (std::size_t i = 0; i < count; ++i) {
    const double re = a[2 * i];
    const double im = a[2 * i + 1];
    o[2 * i] = -(k[i] * im);
    o[2 * i + 1] = k[i] * re;
  }
}

void leray(Complex* u1, Complex* u2, const double* k1, const double* k2, const double* inv_k2,
           std::size_t count) {
  auto* a = reinterpret_cast<double*>(u1);
  auto* b = reinterpret_cast<double*>(u2);
  for (std::size_t i = 0; i < count; ++i) {
    for (int part = 0; part < 2; ++part) {
      const std::size_t j = 2 * i + part;
      const double s = (k1[i] * a[j] + k2[i] * b[j]) * inv_k2[i];
      a[j] = a[j] - k1[i] * s;
      b[j] = b[j] - k2[i] * s;
    }
  }
}

void apply_mask(Complex* z, const double* keep, std::size_t count) {
  for (std::size_t i = 0; i < count; ++i)
    if (keep[i] == 0.0) z[i] = Complex{0.0, 0.0};
}

}  // namespace

const KernelTable& scalar_kernels() {
  static const KernelTable table{
      "scalar",      gl_term,       dot2,   neg_dot3,
      harmonic_tension, normalize3, scale_complex, implicit_update, mul_ik,
      leray,         apply_mask,
  };
  return table;
}

}  // namespace glnematic::simd
