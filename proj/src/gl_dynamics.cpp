#include "glnematic/gl_dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "explicit_terms.hpp"
#include "stepper.hpp"

namespace glnematic {

namespace {

std::string blow_up_message(double t, long step, double max_v, double max_d) {
  std::ostringstream os;
  os << "blow-up: non-finite field at t=" << t << " (step " << step
     << "); last finite state had max|v|=" << max_v << ", max|d|=" << max_d;
  return os.str();
}

Field field_from_spectral(const SpectralGrid& grid, int components,
                          const std::function<const Complex*(int)>& source) {
  Field out(grid, components);
  for (int c = 0; c < components; ++c) {
    auto dst = out.spectral_mut(c);
    std::copy(source(c), source(c) + grid.modes(), dst.begin());
  }
  out.to_physical();
  return out;
}

// div(grad d (.) grad d), assembled from the truncated stress tensor S_ij = d_i d . d_j d.
Field elastic_divergence(const Field& d_in, bool dealias_on) {
  Field dh;
  const Field& d = with_both(d_in, dh);
  const auto& grid = d.grid();
  const std::size_t nodes = grid.nodes();
  AlignedVector<double> g(6 * nodes);
  for (int c = 0; c < 3; ++c)
    for (int j = 0; j < 2; ++j)
      spectral_derivative(grid, d.spectral(c), j, {g.data() + (2 * c + j) * nodes, nodes});

  Field out(grid, 2);
  for (int i = 0; i < 2; ++i) {
    auto oi = out.spectral_mut(i);
    std::fill(oi.begin(), oi.end(), Complex{});
  }
  Field sij(grid, 1);
  AlignedVector<Complex> tmp(grid.modes());
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      auto s = sij.physical_mut(0);
      for (std::size_t q = 0; q < nodes; ++q) {
        double acc = 0.0;
        for (int c = 0; c < 3; ++c) acc += g[(2 * c + i) * nodes + q] * g[(2 * c + j) * nodes + q];
        s[q] = acc;
      }
      sij.to_spectral();
      const Field st = dealias_on ? dealias(sij) : sij;
      simd::active_kernels().mul_ik(st.spectral(0).data(),
                                    j == 0 ? grid.k1().data() : grid.k2().data(), tmp.data(),
                                    grid.modes());
      auto oi = out.spectral_mut(i);
      for (std::size_t m = 0; m < grid.modes(); ++m) oi[m] += tmp[m];
    }
  }
  out.to_physical();
  return out;
}

}  // namespace

BlowUpError::BlowUpError(double t_, long step_, double max_v_, double max_d_)
    : std::runtime_error(blow_up_message(t_, step_, max_v_, max_d_)),
      t(t_),
      step(step_),
      max_v(max_v_),
      max_d(max_d_) {}

namespace detail {

bool finite(const Field& f) {
  for (int c = 0; c < f.components(); ++c)
    for (double x : f.physical(c))
      if (!std::isfinite(x)) return false;
  return true;
}

void check_finite(const SimState& before, const SimState& after) {
  if (finite(after.v) && finite(after.d)) return;
  throw BlowUpError(after.t, after.step, max_abs(before.v), max_director_norm(before));
}

double next_time(const SimState& s, double dt) {
  const double offset = s.t - static_cast<double>(s.step) * dt;
  return static_cast<double>(s.step + 1) * dt + offset;
}

ImexStepper::ImexStepper(const SimParams& params)
    : params_(params),
      grid_(make_grid(params.n)),
      terms_(grid_),
      dt_(params.dt_effective()),
      inv_v_(grid_.modes()),
      inv_d_(grid_.modes()) {
  params_.check();
  const auto ksq = grid_.k_squared();
  const double stab = params_.stabilization / (params_.epsilon * params_.epsilon);
  keep_d_ = 1.0 + dt_ * stab;
  for (std::size_t m = 0; m < grid_.modes(); ++m) {
    inv_v_[m] = 1.0 / (1.0 + dt_ * ksq[m]);
    inv_d_[m] = 1.0 / (1.0 + dt_ * ksq[m] + dt_ * stab);
  }
}

SimState ImexStepper::advance(const SimState& in) {
  Field vh, dh;
  const Field& v = with_both(in.v, vh);
  const Field& d = with_both(in.d, dh);
  terms_.evaluate(v, d, Tension::ginzburg_landau, params_.epsilon, params_.dealias_on);

  const auto& k = simd::active_kernels();
  SimState out{next_time(in, dt_), in.step + 1, Field(grid_, 2), Field(grid_, 3)};
  for (int i = 0; i < 2; ++i)
    k.implicit_update(v.spectral(i).data(), terms_.force_v(i), inv_v_.data(), 1.0, dt_,
                      out.v.spectral_mut(i).data(), grid_.modes());
  for (int c = 0; c < 3; ++c)
    k.implicit_update(d.spectral(c).data(), terms_.force_d(c), inv_d_.data(), keep_d_, dt_,
                      out.d.spectral_mut(c).data(), grid_.modes());
  out.v.to_physical();
  out.d.to_physical();
  check_finite(in, out);
  return out;
}

Rk4Stepper::Rk4Stepper(const SimParams& params)
    : params_(params), grid_(make_grid(params.n)), terms_(grid_), dt_(params.dt_effective()) {
  params_.check();
}

void Rk4Stepper::rhs(const Field& v, const Field& d, Field& dv, Field& dd) {
  terms_.evaluate(v, d, Tension::ginzburg_landau, params_.epsilon, params_.dealias_on);
  const auto ksq = grid_.k_squared();
  for (int i = 0; i < 2; ++i) {
    auto src = v.spectral(i);
    auto dst = dv.spectral_mut(i);
    const Complex* f = terms_.force_v(i);
    for (std::size_t m = 0; m < grid_.modes(); ++m) dst[m] = f[m] - ksq[m] * src[m];
  }
  for (int c = 0; c < 3; ++c) {
    auto src = d.spectral(c);
    auto dst = dd.spectral_mut(c);
    const Complex* f = terms_.force_d(c);
    for (std::size_t m = 0; m < grid_.modes(); ++m) dst[m] = f[m] - ksq[m] * src[m];
  }
}

SimState Rk4Stepper::advance(const SimState& in) {
  Field vh, dh;
  const Field& v0 = with_both(in.v, vh);
  const Field& d0 = with_both(in.d, dh);

  auto combine = [&](const Field& base, const Field& slope, double w) {
    Field out(grid_, base.components());
    for (int c = 0; c < base.components(); ++c) {
      auto b = base.spectral(c);
      auto s = slope.spectral(c);
      auto o = out.spectral_mut(c);
      for (std::size_t m = 0; m < grid_.modes(); ++m) o[m] = b[m] + w * s[m];
    }
    out.to_physical();
    return out;
  };

  std::array<Field, 4> kv, kd;
  for (int s = 0; s < 4; ++s) {
    kv[s] = Field(grid_, 2);
    kd[s] = Field(grid_, 3);
  }
  rhs(v0, d0, kv[0], kd[0]);
  Field v1 = combine(v0, kv[0], 0.5 * dt_), d1 = combine(d0, kd[0], 0.5 * dt_);
  rhs(v1, d1, kv[1], kd[1]);
  Field v2 = combine(v0, kv[1], 0.5 * dt_), d2 = combine(d0, kd[1], 0.5 * dt_);
  rhs(v2, d2, kv[2], kd[2]);
  Field v3 = combine(v0, kv[2], dt_), d3 = combine(d0, kd[2], dt_);
  rhs(v3, d3, kv[3], kd[3]);

  SimState out{next_time(in, dt_), in.step + 1, Field(grid_, 2), Field(grid_, 3)};
  auto finish = [&](const Field& base, std::array<Field, 4>& slopes, Field& target) {
    for (int c = 0; c < base.components(); ++c) {
      auto b = base.spectral(c);
      auto o = target.spectral_mut(c);
      auto s0 = slopes[0].spectral(c), s1 = slopes[1].spectral(c);
      auto s2 = slopes[2].spectral(c), s3 = slopes[3].spectral(c);
      for (std::size_t m = 0; m < grid_.modes(); ++m)
        o[m] = b[m] + (dt_ / 6.0) * (s0[m] + 2.0 * s1[m] + 2.0 * s2[m] + s3[m]);
    }
    target.to_physical();
  };
  finish(v0, kv, out.v);
  finish(d0, kd, out.d);
  check_finite(in, out);
  return out;
}

}  // namespace detail

// ---------------------------------------------------------------------------

Field gl_term(const Field& d_in, double epsilon, bool dealias_on) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (d_in.components() != 3) throw std::invalid_argument("gl_term expects a director field");
  Field dh;
  const Field& d = with_both(d_in, dh);
  Field out(d.grid(), 3);
  const double* dp[3] = {d.physical(0).data(), d.physical(1).data(), d.physical(2).data()};
  {
    auto o0 = out.physical_mut(0), o1 = out.physical_mut(1), o2 = out.physical_mut(2);
    simd::active_kernels().gl_term(dp[0], dp[1], dp[2], o0.data(), o1.data(), o2.data(),
                                   d.grid().nodes(), 1.0 / (epsilon * epsilon));
  }
  if (!dealias_on) {
    out.to_spectral();
    return out;
  }
  return dealias(out);
}

Field stress_force(const Field& d_in, double epsilon, bool dealias_on) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  Field dh;
  const Field& d = with_both(d_in, dh);
  const Field v(d.grid(), 2);
  detail::ExplicitTerms terms(d.grid());
  terms.evaluate(v, d, detail::Tension::ginzburg_landau, epsilon, dealias_on);
  return field_from_spectral(d.grid(), 2, [&](int i) { return terms.stress_hat(i); });
}

Field stress_force_divergence_form(const Field& d_in, bool dealias_on) {
  Field force = elastic_divergence(d_in, dealias_on);
  for (int i = 0; i < 2; ++i)
    for (Complex& z : force.spectral_mut(i)) z = -z;
  force.to_physical();
  Field out = leray_project(force);
  out.spectral_mut(0)[0] = Complex{};
  out.spectral_mut(1)[0] = Complex{};
  out.to_physical();
  return out;
}

Field advect(const Field& v_in, const Field& f_in, bool dealias_on) {
  if (v_in.components() != 2) throw std::invalid_argument("advect expects a 2-component velocity");
  Field vh, fh;
  const Field& v = with_both(v_in, vh);
  const Field& f = with_both(f_in, fh);
  const auto& grid = f.grid();
  const std::size_t nodes = grid.nodes();
  AlignedVector<double> g0(nodes), g1(nodes);
  Field out(grid, f.components());
  for (int c = 0; c < f.components(); ++c) {
    spectral_derivative(grid, f.spectral(c), 0, g0);
    spectral_derivative(grid, f.spectral(c), 1, g1);
    auto o = out.physical_mut(c);
    simd::active_kernels().dot2(v.physical(0).data(), g0.data(), v.physical(1).data(), g1.data(),
                                o.data(), nodes);
  }
  if (!dealias_on) {
    out.to_spectral();
    return out;
  }
  return dealias(out);
}

ForceDecomposition decompose_forces(const SimState& state, const SimParams& params) {
  Field vh, dh;
  const Field& v = with_both(state.v, vh);
  const Field& d = with_both(state.d, dh);
  const auto& grid = d.grid();
  detail::ExplicitTerms terms(grid);
  terms.evaluate(v, d, detail::Tension::ginzburg_landau, params.epsilon, params.dealias_on);

  ForceDecomposition out;
  out.tension = Field(grid, 3);
  for (int c = 0; c < 3; ++c) {
    auto dst = out.tension.physical_mut(c);
    std::copy(terms.tension(c), terms.tension(c) + grid.nodes(), dst.begin());
  }
  out.tension.to_spectral();
  out.stress_force = field_from_spectral(grid, 2, [&](int i) { return terms.stress_hat(i); });
  out.advection_v = field_from_spectral(grid, 2, [&](int i) { return terms.advection_v_hat(i); });
  out.advection_d = field_from_spectral(grid, 3, [&](int c) { return terms.advection_d_hat(c); });
  return out;
}

SimState step_imex(const SimState& state, const SimParams& params) {
  detail::ImexStepper stepper(params);
  return stepper.advance(state);
}

SimState step_rk4(const SimState& state, const SimParams& params) {
  detail::Rk4Stepper stepper(params);
  return stepper.advance(state);
}

SimState step(const SimState& state, const SimParams& params) {
  return params.scheme == Scheme::imex1 ? step_imex(state, params) : step_rk4(state, params);
}

namespace detail {

RunResult run_with(Stepper& stepper, const SimParams& params, const SimState& init,
                   long sample_every, const RunObserver& observer) {
  params.check();
  if (sample_every < 1) throw std::invalid_argument("sample_every must be >= 1");
  RunResult result{init, {}};
  if (params.t_end <= 0.0) return result;

  std::vector<double> snaps = observer.snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  std::size_t next_snap = 0;
  const double dt = params.dt_effective();
  auto visit = [&](const SimState& s, bool sample) {
    while (next_snap < snaps.size() && s.t >= snaps[next_snap] - 1e-9 * dt) {
      if (observer.on_snapshot) observer.on_snapshot(s);
      ++next_snap;
    }
    if (!sample) return;
    EnergySample e = energy(s, params.epsilon);
    if (observer.on_sample) observer.on_sample(s, e);
    result.trajectory.push_back(e);
  };

  SimState current = init;
  current.v.to_spectral().to_physical();
  current.d.to_spectral().to_physical();
  visit(current, true);
  const long steps = params.steps_to_end();
  for (long s = 1; s <= steps; ++s) {
    SimState next = stepper.advance(current);
    if (observer.on_step) observer.on_step(current, next);
    current = std::move(next);
    visit(current, s % sample_every == 0 || s == steps);
  }
  result.final_state = std::move(current);
  return result;
}

}  // namespace detail

RunResult run(const SimParams& params, const SimState& init, long sample_every,
              const RunObserver& observer) {
  params.check();
  if (params.scheme == Scheme::imex1) {
    detail::ImexStepper stepper(params);
    return detail::run_with(stepper, params, init, sample_every, observer);
  }
  detail::Rk4Stepper stepper(params);
  return detail::run_with(stepper, params, init, sample_every, observer);
}

Field recover_pressure(const SimState& state, bool dealias_on) {
  Field vh, dh;
  const Field& v = with_both(state.v, vh);
  const Field& d = with_both(state.d, dh);
  const auto& grid = v.grid();
  // N = (v.grad)v + div(grad d (.) grad d)
  Field n = advect(v, v, dealias_on);
  const Field elastic = elastic_divergence(d, dealias_on);
  for (int i = 0; i < 2; ++i) {
    auto ni = n.spectral_mut(i);
    auto ei = elastic.spectral(i);
    for (std::size_t m = 0; m < grid.modes(); ++m) ni[m] += ei[m];
  }

  // |k|^2 p_hat = i k . N_hat
  Field p(grid, 1);
  auto ph = p.spectral_mut(0);
  auto n0 = n.spectral(0), n1 = n.spectral(1);
  auto k1 = grid.k1(), k2 = grid.k2(), inv = grid.inv_k_squared();
  const Complex I{0.0, 1.0};
  for (std::size_t m = 0; m < grid.modes(); ++m) ph[m] = I * (k1[m] * n0[m] + k2[m] * n1[m]) * inv[m];
  ph[0] = Complex{};
  p.to_physical();
  return p;
}

}  // namespace glnematic
