#pragma once

// Comparison solver for the sharp-constraint limit |d| = 1:
//   d_t + (v.grad)d = lap d + |grad d|^2 d,
// coupled to the same momentum equation. The |grad d|^2 d term is not evaluated
// in the director update; a predictor without it is renormalized pointwise.

#include <stdexcept>

#include "glnematic/diagnostics.hpp"
#include "glnematic/gl_dynamics.hpp"
#include "glnematic/state.hpp"

namespace glnematic {

/// Raised when the predictor nearly vanishes somewhere (|d*| < 1e-8).
class NormalizationError : public std::runtime_error {
 public:
  NormalizationError(double t, double min_norm);
  double t;
  double min_norm;
};

/// One projection step. Requires ||d| - 1| <= 1e-12 on entry.
SimState step_limit(const SimState& state, const SimParams& params);

/// Runs the limit solver with the same dt and sampling rules as run().
/// Samples use energy() with params.epsilon, whose penalty part vanishes for unit d.
RunResult run_limit(const SimParams& params, const SimState& init, long sample_every = 1,
                    const RunObserver& observer = {});

/// Weak wedge-form residual of the director equation against xi = e_alpha exp(i k.x),
/// |k|_inf <= k_max:
///   R(xi) = int (d ^ (dt_d + (v.grad)d)) . xi + sum_j (d ^ d_j d) . d_j xi,
/// evaluated at curr with dt_d the backward difference from prev.
ResidualTable wedge_residual(const SimState& prev, const SimState& curr, int k_max);

}  // namespace glnematic
