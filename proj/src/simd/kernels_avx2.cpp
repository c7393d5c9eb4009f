#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "glnematic/simd.hpp"

namespace glnematic::simd {
namespace {

// [f0, f1] -> [f0, f0, f1, f1], one real factor per interleaved complex value.
inline __m256d dup_pairs(const double* f) {
  return _mm256_permute4x64_pd(_mm256_castpd128_pd256(_mm_loadu_pd(f)), 0x50);
}

void gl_term(const double* d0, const double* d1, const double* d2, double* o0, double* o1,
             double* o2, std::size_t count, double inv_eps2) {
  const __m256d one = _mm256_set1_pd(1.0);
  const __m256d ie = _mm256_set1_pd(inv_eps2);
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256d a = _mm256_loadu_pd(d0 + i);
    const __m256d b = _mm256_loadu_pd(d1 + i);
    const __m256d c = _mm256_loadu_pd(d2 + i);
    const __m256d sq =
        _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b)), _mm256_mul_pd(c, c));
    const __m256d s = _mm256_mul_pd(ie, _mm256_sub_pd(one, sq));
    _mm256_storeu_pd(o0 + i, _mm256_mul_pd(s, a));
    _mm256_storeu_pd(o1 + i, _mm256_mul_pd(s, b));
    _mm256_storeu_pd(o2 + i, _mm256_mul_pd(s, c));
  }
  for (; i < count; ++i) {
    const double sq = d0[i] * d0[i] + d1[i] * d1[i] + d2[i] * d2[i];
    const double s = inv_eps2 * (1.0 - sq);
    o0[i] = s * d0[i];
    o1[i] = s * d1[i];
    o2[i] = s * d2[i];
  }
}

void dot2(const double* a0, const double* b0, const double* a1, const double* b1, double* out,
          std::size_t count) {
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256d p = _mm256_mul_pd(_mm256_loadu_pd(a0 + i), _mm256_loadu_pd(b0 + i));
    const __m256d q = _mm256_mul_pd(_mm256_loadu_pd(a1 + i), _mm256_loadu_pd(b1 + i));
    _mm256_storeu_pd(out + i, _mm256_add_pd(p, q));
  }
  for (; i < count; ++i) out[i] = a0[i] * b0[i] + a1[i] * b1[i];
}

void neg_dot3(const double* a0, const double* b0, const double* a1, const double* b1,
              const double* a2, const double* b2, double* out, std::size_t count) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256d p = _mm256_mul_pd(_mm256_loadu_pd(a0 + i), _mm256_loadu_pd(b0 + i));
    const __m256d q = _mm256_mul_pd(_mm256_loadu_pd(a1 + i), _mm256_loadu_pd(b1 + i));
    const __m256d r = _mm256_mul_pd(_mm256_loadu_pd(a2 + i), _mm256_loadu_pd(b2 + i));
    _mm256_storeu_pd(out + i, _mm256_xor_pd(sign, _mm256_add_pd(_mm256_add_pd(p, q), r)));
  }
  for (; i < count; ++i) out[i] = -(a0[i] * b0[i] + a1[i] * b1[i] + a2[i] * b2[i]);
}

void harmonic_tension(const double* const* lap, const double* const* grad, const double* const* d,
                      double* const* out, std::size_t count) {
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    __m256d g = _mm256_loadu_pd(grad[0] + i);
    __m256d g2 = _mm256_mul_pd(g, g);
    for (int q = 1; q < 6; ++q) {
      g = _mm256_loadu_pd(grad[q] + i);
      g2 = _mm256_add_pd(g2, _mm256_mul_pd(g, g));
    }
    for (int c = 0; c < 3; ++c) {
      const __m256d t = _mm256_add_pd(_mm256_loadu_pd(lap[c] + i),
                                      _mm256_mul_pd(g2, _mm256_loadu_pd(d[c] + i)));
      _mm256_storeu_pd(out[c] + i, t);
    }
  }
  for (; i < count; ++i) {
    double g2 = grad[0][i] * grad[0][i];
    for (int q = 1; q < 6; ++q) g2 = g2 + grad[q][i] * grad[q][i];
    for (int c = 0; c < 3; ++c) out[c][i] = lap[c][i] + g2 * d[c][i];
  }
}

double normalize3(double* d0, double* d1, double* d2, std::size_t count) {
  double min_norm = std::numeric_limits<double>::infinity();
  __m256d vmin = _mm256_set1_pd(min_norm);
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    const __m256d a = _mm256_loadu_pd(d0 + i);
    const __m256d b = _mm256_loadu_pd(d1 + i);
    const __m256d c = _mm256_loadu_pd(d2 + i);
    const __m256d r = _mm256_sqrt_pd(
        _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(a, a), _mm256_mul_pd(b, b)), _mm256_mul_pd(c, c)));
    vmin = _mm256_min_pd(r, vmin);
    _mm256_storeu_pd(d0 + i, _mm256_div_pd(a, r));
    _mm256_storeu_pd(d1 + i, _mm256_div_pd(b, r));
    _mm256_storeu_pd(d2 + i, _mm256_div_pd(c, r));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, vmin);
  for (double x : lanes) min_norm = std::min(min_norm, x);
  for (; i < count; ++i) {
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
  const std::size_t n = 2 * count;
  const __m256d vs = _mm256_set1_pd(s);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) _mm256_storeu_pd(p + i, _mm256_mul_pd(_mm256_loadu_pd(p + i), vs));
  for (; i < n; ++i) p[i] = p[i] * s;
}

void implicit_update(const Complex* prev, const Complex* rhs, const double* inv_denom, double keep,
                     double dt, Complex* out, std::size_t count) {
  const auto* a = reinterpret_cast<const double*>(prev);
  const auto* b = reinterpret_cast<const double*>(rhs);
  auto* o = reinterpret_cast<double*>(out);
  const __m256d vk = _mm256_set1_pd(keep);
  const __m256d vdt = _mm256_set1_pd(dt);
  std::size_t i = 0;
  for (; i + 2 <= count; i += 2) {
    const __m256d x = _mm256_add_pd(_mm256_mul_pd(vk, _mm256_loadu_pd(a + 2 * i)),
                                    _mm256_mul_pd(vdt, _mm256_loadu_pd(b + 2 * i)));
    _mm256_storeu_pd(o + 2 * i, _mm256_mul_pd(x, dup_pairs(inv_denom + i)));
  }
  for (; i < count; ++i) {
    o[2 * i] = (keep * a[2 * i] + dt * b[2 * i]) * inv_denom[i];
    o[2 * i + 1] = (keep * a[2 * i + 1] + dt * b[2 * i + 1]) * inv_denom[i];
  }
}

void mul_ik(const Complex* in, const double* k, Complex* out, std::size_t count) {
  const auto* a = reinterpret_cast<const double*>(in);
  auto* o = reinterpret_cast<double*>(out);
  const __m256d sign = _mm256_setr_pd(-0.0, 0.0, -0.0, 0.0);
  std::size_t i = 0;
  for (; i + 2 <= count; i += 2) {
    const __m256d swapped = _mm256_permute_pd(_mm256_loadu_pd(a + 2 * i), 0b0101);
    _mm256_storeu_pd(o + 2 * i, _mm256_xor_pd(sign, _mm256_mul_pd(dup_pairs(k + i), swapped)));
  }
  for (; i < count; ++i) {
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
  std::size_t i = 0;
  for (; i + 2 <= count; i += 2) {
    const __m256d vk1 = dup_pairs(k1 + i);
    const __m256d vk2 = dup_pairs(k2 + i);
    const __m256d va = _mm256_loadu_pd(a + 2 * i);
    const __m256d vb = _mm256_loadu_pd(b + 2 * i);
    const __m256d s = _mm256_mul_pd(_mm256_add_pd(_mm256_mul_pd(vk1, va), _mm256_mul_pd(vk2, vb)),
                                    dup_pairs(inv_k2 + i));
    _mm256_storeu_pd(a + 2 * i, _mm256_sub_pd(va, _mm256_mul_pd(vk1, s)));
    _mm256_storeu_pd(b + 2 * i, _mm256_sub_pd(vb, _mm256_mul_pd(vk2, s)));
  }
  for (; i < count; ++i) {
    for (int part = 0; part < 2; ++part) {
      const std::size_t j = 2 * i + part;
      const double s = (k1[i] * a[j] + k2[i] * b[j]) * inv_k2[i];
      a[j] = a[j] - k1[i] * s;
      b[j] = b[j] - k2[i] * s;
    }
  }
}

void apply_mask(Complex* z, const double* keep, std::size_t count) {
  auto* p = reinterpret_cast<double*>(z);
  const __m256d zero = _mm256_setzero_pd();
  std::size_t i = 0;
  for (; i + 2 <= count; i += 2) {
    const __m256d on = _mm256_cmp_pd(dup_pairs(keep + i), zero, _CMP_NEQ_OQ);
    _mm256_storeu_pd(p + 2 * i, _mm256_and_pd(on, _mm256_loadu_pd(p + 2 * i)));
  }
  for (; i < count; ++i)
    if (keep[i] == 0.0) z[i] = Complex{0.0, 0.0};
}

}  // namespace

const KernelTable* avx2_kernels() {
  static const KernelTable table{
      "avx2",        gl_term,       dot2,   neg_dot3,
      harmonic_tension, normalize3, scale_complex, implicit_update, mul_ik,
      leray,         apply_mask,
  };
  static const bool supported = __builtin_cpu_supports("avx2");
  return supported ? &table : nullptr;
}

}  // namespace glnematic::simd
