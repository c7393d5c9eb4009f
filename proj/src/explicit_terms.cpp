#include "explicit_terms.hpp"

namespace glnematic::detail {

ExplicitTerms::ExplicitTerms(const SpectralGrid& grid)
    : grid_(grid), k_(simd::active_kernels()), tmp_(grid.modes()) {
  const std::size_t nodes = grid.nodes();
  const std::size_t modes = grid.modes();
  for (auto& b : grad_d_) b.resize(nodes);
  for (auto& b : grad_v_) b.resize(nodes);
  for (auto& b : tension_) b.resize(nodes);
  for (auto& b : scratch3_) b.resize(nodes);
  for (auto& b : scratch2_) b.resize(nodes);
  for (auto& b : gl_hat_) b.resize(modes);
  for (auto& b : adv_d_hat_) b.resize(modes);
  for (auto& b : adv_v_hat_) b.resize(modes);
  for (auto& b : stress_hat_) b.resize(modes);
  for (auto& b : force_v_) b.resize(modes);
  for (auto& b : force_d_) b.resize(modes);
}

void ExplicitTerms::forward_truncated(const double* in, Complex* out, bool dealias_on) const {
  fft_forward(grid_, in, out);
  if (dealias_on) k_.apply_mask(out, grid_.dealias_keep().data(), grid_.modes());
}

void ExplicitTerms::evaluate(const Field& v, const Field& d, Tension tension, double epsilon,
                             bool dealias_on) {
  const std::size_t nodes = grid_.nodes();
  const std::size_t modes = grid_.modes();
  const auto ksq = grid_.k_squared();

  for (int c = 0; c < 3; ++c)
    for (int j = 0; j < 2; ++j) spectral_derivative(grid_, d.spectral(c), j, grad_d_[2 * c + j]);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) spectral_derivative(grid_, v.spectral(i), j, grad_v_[2 * i + j]);

  const double* dp[3] = {d.physical(0).data(), d.physical(1).data(), d.physical(2).data()};
  const double* vp[2] = {v.physical(0).data(), v.physical(1).data()};

  if (tension == Tension::ginzburg_landau) {
    const double inv_eps2 = 1.0 / (epsilon * epsilon);
    k_.gl_term(dp[0], dp[1], dp[2], scratch3_[0].data(), scratch3_[1].data(), scratch3_[2].data(),
               nodes, inv_eps2);
    for (int c = 0; c < 3; ++c) {
      forward_truncated(scratch3_[c].data(), gl_hat_[c].data(), dealias_on);
      auto s = d.spectral(c);
      for (std::size_t m = 0; m < modes; ++m) tmp_[m] = gl_hat_[c][m] - ksq[m] * s[m];
      fft_inverse(grid_, tmp_.data(), tension_[c].data());
    }
  } else {
    for (int c = 0; c < 3; ++c) {
      std::fill(gl_hat_[c].begin(), gl_hat_[c].end(), Complex{});
      auto s = d.spectral(c);
      for (std::size_t m = 0; m < modes; ++m) tmp_[m] = -ksq[m] * s[m];
      fft_inverse(grid_, tmp_.data(), scratch3_[c].data());
    }
    const double* lap[3] = {scratch3_[0].data(), scratch3_[1].data(), scratch3_[2].data()};
    const double* grad[6];
    for (int q = 0; q < 6; ++q) grad[q] = grad_d_[q].data();
    double* out[3] = {tension_[0].data(), tension_[1].data(), tension_[2].data()};
    k_.harmonic_tension(lap, grad, dp, out, nodes);
  }

  // Elastic force -(grad d)^T tau, component i pairs d_i d_c with tau_c.
  for (int i = 0; i < 2; ++i) {
    k_.neg_dot3(grad_d_[i].data(), tension_[0].data(), grad_d_[2 + i].data(), tension_[1].data(),
                grad_d_[4 + i].data(), tension_[2].data(), scratch2_[i].data(), nodes);
    forward_truncated(scratch2_[i].data(), stress_hat_[i].data(), dealias_on);
  }
  k_.leray(stress_hat_[0].data(), stress_hat_[1].data(), grid_.k1().data(), grid_.k2().data(),
           grid_.inv_k_squared().data(), modes);
  stress_hat_[0][0] = stress_hat_[1][0] = Complex{};

  for (int i = 0; i < 2; ++i) {
    k_.dot2(vp[0], grad_v_[2 * i].data(), vp[1], grad_v_[2 * i + 1].data(), scratch2_[i].data(),
            nodes);
    forward_truncated(scratch2_[i].data(), adv_v_hat_[i].data(), dealias_on);
  }
  for (int i = 0; i < 2; ++i)
    for (std::size_t m = 0; m < modes; ++m) force_v_[i][m] = -adv_v_hat_[i][m];
  k_.leray(force_v_[0].data(), force_v_[1].data(), grid_.k1().data(), grid_.k2().data(),
           grid_.inv_k_squared().data(), modes);
  for (int i = 0; i < 2; ++i) {
    for (std::size_t m = 0; m < modes; ++m) force_v_[i][m] += stress_hat_[i][m];
    force_v_[i][0] = Complex{};
  }

  for (int c = 0; c < 3; ++c) {
    k_.dot2(vp[0], grad_d_[2 * c].data(), vp[1], grad_d_[2 * c + 1].data(), scratch3_[c].data(),
            nodes);
    forward_truncated(scratch3_[c].data(), adv_d_hat_[c].data(), dealias_on);
    for (std::size_t m = 0; m < modes; ++m) force_d_[c][m] = gl_hat_[c][m] - adv_d_hat_[c][m];
  }
}

}  // namespace glnematic::detail
