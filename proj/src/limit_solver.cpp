#include "glnematic/limit_solver.hpp"

#include <array>
#include <cmath>
#include <string>
#include <sstream>

#include "explicit_terms.hpp"
#include "stepper.hpp"

namespace glnematic {

namespace {

std::string normalization_message(double t, double min_norm) {
  std::ostringstream os;
  os << "normalization singularity at t=" << t << ": predictor norm dropped to " << min_norm;
  return os.str();
}

class LimitStepper final : public detail::Stepper {
 public:
  explicit LimitStepper(const SimParams& params)
      : params_(params),
        grid_(make_grid(params.n)),
        terms_(grid_),
        dt_(params.dt_effective()),
        inv_(grid_.modes()) {
    params_.check();
    const auto ksq = grid_.k_squared();
    for (std::size_t m = 0; m < grid_.modes(); ++m) inv_[m] = 1.0 / (1.0 + dt_ * ksq[m]);
  }

  SimState advance(const SimState& in) override {
    const double dev = unit_norm_deviation(in);
    if (!(dev <= 1e-12))
      throw std::invalid_argument("limit step needs a unit director field, ||d|-1| = " +
                                  std::to_string(dev));
    Field vh, dh;
    const Field& v = with_both(in.v, vh);
    const Field& d = with_both(in.d, dh);
    terms_.evaluate(v, d, detail::Tension::harmonic, params_.epsilon, params_.dealias_on);

    const auto& k = simd::active_kernels();
    SimState out{detail::next_time(in, dt_), in.step + 1, Field(grid_, 2), Field(grid_, 3)};
    for (int i = 0; i < 2; ++i)
      k.implicit_update(v.spectral(i).data(), terms_.force_v(i), inv_.data(), 1.0, dt_,
                        out.v.spectral_mut(i).data(), grid_.modes());
    for (int c = 0; c < 3; ++c)
      k.implicit_update(d.spectral(c).data(), terms_.force_d(c), inv_.data(), 1.0, dt_,
                        out.d.spectral_mut(c).data(), grid_.modes());
    out.v.to_physical();
    out.d.to_physical();
    detail::check_finite(in, out);

    auto d0 = out.d.physical_mut(0), d1 = out.d.physical_mut(1), d2 = out.d.physical_mut(2);
    const double min_norm = k.normalize3(d0.data(), d1.data(), d2.data(), grid_.nodes());
    if (!(min_norm >= 1e-8)) throw NormalizationError(out.t, min_norm);
    out.d.to_spectral();
    return out;
  }

 private:
  SimParams params_;
  SpectralGrid grid_;
  detail::ExplicitTerms terms_;
  double dt_;
  AlignedVector<double> inv_;
};

std::array<double, 3> cross(const double a[3], const double b[3]) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

}  // namespace

NormalizationError::NormalizationError(double t_, double min_norm_)
    : std::runtime_error(normalization_message(t_, min_norm_)), t(t_), min_norm(min_norm_) {}

SimState step_limit(const SimState& state, const SimParams& params) {
  LimitStepper stepper(params);
  return stepper.advance(state);
}

RunResult run_limit(const SimParams& params, const SimState& init, long sample_every,
                    const RunObserver& observer) {
  LimitStepper stepper(params);
  return detail::run_with(stepper, params, init, sample_every, observer);
}

ResidualTable wedge_residual(const SimState& prev, const SimState& curr, int k_max) {
  Field vh, dh, ph;
  const Field& v = with_both(curr.v, vh);
  const Field& d = with_both(curr.d, dh);
  const Field& dp = with_both(prev.d, ph);
  const auto& grid = d.grid();
  const std::size_t nodes = grid.nodes();
  const double dt = curr.t - prev.t;

  AlignedVector<double> g(6 * nodes);
  for (int c = 0; c < 3; ++c)
    for (int j = 0; j < 2; ++j)
      spectral_derivative(grid, d.spectral(c), j, {g.data() + (2 * c + j) * nodes, nodes});

  // a = d ^ (dt_d + (v.grad)d),  b_j = d ^ d_j d
  Field a(grid, 3), b0(grid, 3), b1(grid, 3);
  {
    double* ap[3] = {a.physical_mut(0).data(), a.physical_mut(1).data(), a.physical_mut(2).data()};
    double* bp[2][3] = {
        {b0.physical_mut(0).data(), b0.physical_mut(1).data(), b0.physical_mut(2).data()},
        {b1.physical_mut(0).data(), b1.physical_mut(1).data(), b1.physical_mut(2).data()}};
    auto v0 = v.physical(0), v1 = v.physical(1);
    for (std::size_t q = 0; q < nodes; ++q) {
      double dd[3], w[3];
      for (int c = 0; c < 3; ++c) {
        dd[c] = d.physical(c)[q];
        const double dtd = dt > 0.0 ? (dd[c] - dp.physical(c)[q]) / dt : 0.0;
        w[c] = dtd + v0[q] * g[(2 * c) * nodes + q] + v1[q] * g[(2 * c + 1) * nodes + q];
      }
      const auto aw = cross(dd, w);
      for (int c = 0; c < 3; ++c) ap[c][q] = aw[c];
      for (int j = 0; j < 2; ++j) {
        const double dj[3] = {g[j * nodes + q], g[(2 + j) * nodes + q], g[(4 + j) * nodes + q]};
        const auto bw = cross(dd, dj);
        for (int c = 0; c < 3; ++c) bp[j][c][q] = bw[c];
      }
    }
  }
  a.to_spectral();
  b0.to_spectral();
  b1.to_spectral();

  const double area = kTwoPi * kTwoPi;
  const Complex I{0.0, 1.0};
  ResidualTable table;
  for (int k1 = -k_max; k1 <= k_max; ++k1) {
    for (int k2 = -k_max; k2 <= k_max; ++k2) {
      for (int alpha = 0; alpha < 3; ++alpha) {
        const Complex r = std::conj(mode_value(a, alpha, k1, k2)) +
                          I * static_cast<double>(k1) * std::conj(mode_value(b0, alpha, k1, k2)) +
                          I * static_cast<double>(k2) * std::conj(mode_value(b1, alpha, k1, k2));
        const double mag = area * std::abs(r);
        table.entries.push_back({k1, k2, alpha, mag});
        table.max = std::max(table.max, mag);
      }
    }
  }
  return table;
}

}  // namespace glnematic
