#pragma once

// Time integration of the Ginzburg-Landau relaxed nematic flow
//
//   v_t + (v.grad)v + grad p - lap v = -div(grad d (.) grad d),   div v = 0,
//   d_t + (v.grad)d = lap d + eps^-2 (1 - |d|^2) d.
//
// Products are formed on the grid and truncated with the 2/3 rule. The elastic
// force enters through the identity div(grad d (.) grad d) = grad(|grad d|^2/2)
// + (grad d)^T lap d: after Leray projection only -(grad d)^T tau survives, with
// tau = lap d + eps^-2 (1 - |d|^2) d the tension field.

#include <functional>
#include <stdexcept>
#include <vector>

#include "glnematic/diagnostics.hpp"
#include "glnematic/state.hpp"

namespace glnematic {

/// Raised when a step produces NaN or Inf. Carries the last finite state's data.
class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(double t, long step, double max_v, double max_d);
  double t;
  long step;
  double max_v;
  double max_d;
};

struct ForceDecomposition {
  Field tension;       // 3 components
  Field stress_force;  // P[-(grad d)^T tau], divergence free, zero mean
  Field advection_v;   // (v.grad) v, dealiased
  Field advection_d;   // (v.grad) d, dealiased
};

/// eps^-2 (1 - |d|^2) d, truncated when dealias_on.
Field gl_term(const Field& d, double epsilon, bool dealias_on = true);

/// P[-(grad d)^T tau] with tau the GL tension.
Field stress_force(const Field& d, double epsilon, bool dealias_on = true);

/// P[-div(grad d (.) grad d)] assembled directly from the stress tensor.
Field stress_force_divergence_form(const Field& d, bool dealias_on = true);

/// sum_j v_j d_j f, componentwise.
Field advect(const Field& v, const Field& f, bool dealias_on = true);

ForceDecomposition decompose_forces(const SimState& state, const SimParams& params);

/// One first-order IMEX step: implicit diffusion, explicit transport, stress and penalty.
SimState step_imex(const SimState& state, const SimParams& params);

/// One classical RK4 step of the same semi-discrete system; small-grid oracle only.
SimState step_rk4(const SimState& state, const SimParams& params);

/// Dispatches on params.scheme.
SimState step(const SimState& state, const SimParams& params);

struct RunObserver {
  /// Called with every recorded sample.
  std::function<void(const SimState&, const EnergySample&)> on_sample;
  /// Called once per requested snapshot time, on the first state with t >= time.
  std::vector<double> snapshot_times;
  std::function<void(const SimState&)> on_snapshot;
  /// Called after every step with the previous and the new state.
  std::function<void(const SimState&, const SimState&)> on_step;
};

struct RunResult {
  SimState final_state;
  std::vector<EnergySample> trajectory;
};

/// Steps until t >= t_end, sampling at step 0, every sample_every steps and at the end.
RunResult run(const SimParams& params, const SimState& init, long sample_every = 1,
              const RunObserver& observer = {});

/// Solves -lap p = div[(v.grad)v + div(grad d (.) grad d)], zero mean.
Field recover_pressure(const SimState& state, bool dealias_on = true);

}  // namespace glnematic
