#pragma once

// Shared workspace for the explicit right-hand sides of the GL and limit
// solvers. Not part of the public headers.

#include <array>

#include "glnematic/simd.hpp"
#include "glnematic/spectral.hpp"

namespace glnematic::detail {

enum class Tension {
  ginzburg_landau,  // tau = lap d + eps^-2 (1 - |d|^2) d
  harmonic,         // tau = lap d + |grad d|^2 d
};

using RealBuffer = AlignedVector<double>;
using ComplexBuffer = AlignedVector<Complex>;

class ExplicitTerms {
 public:
  explicit ExplicitTerms(const SpectralGrid& grid);

  /// v and d must carry both representations. Fills:
  ///   force_v = P[-(grad d)^T tau - (v.grad) v], zero mode cleared,
  ///   force_d = g - (v.grad) d, with g the GL term (zero for the harmonic tension).
  /// Products are truncated when dealias_on.
  void evaluate(const Field& v, const Field& d, Tension tension, double epsilon, bool dealias_on);

  const Complex* force_v(int i) const { return force_v_[i].data(); }
  const Complex* force_d(int c) const { return force_d_[c].data(); }
  const Complex* gl_hat(int c) const { return gl_hat_[c].data(); }
  const Complex* advection_v_hat(int i) const { return adv_v_hat_[i].data(); }
  const Complex* advection_d_hat(int c) const { return adv_d_hat_[c].data(); }
  const double* tension(int c) const { return tension_[c].data(); }
  /// P[-(grad d)^T tau] alone.
  const Complex* stress_hat(int i) const { return stress_hat_[i].data(); }

  const SpectralGrid& grid() const { return grid_; }

 private:
  void forward_truncated(const double* in, Complex* out, bool dealias_on) const;

  SpectralGrid grid_;
  const simd::KernelTable& k_;
  std::array<RealBuffer, 6> grad_d_;  // index 2*c + j
  std::array<RealBuffer, 4> grad_v_;  // index 2*i + j
  std::array<RealBuffer, 3> tension_;
  std::array<RealBuffer, 3> scratch3_;
  std::array<RealBuffer, 2> scratch2_;
  std::array<ComplexBuffer, 3> gl_hat_;
  std::array<ComplexBuffer, 3> adv_d_hat_;
  std::array<ComplexBuffer, 2> adv_v_hat_;
  std::array<ComplexBuffer, 2> stress_hat_;
  std::array<ComplexBuffer, 2> force_v_;
  std::array<ComplexBuffer, 3> force_d_;
  ComplexBuffer tmp_;
};

}  // namespace glnematic::detail
