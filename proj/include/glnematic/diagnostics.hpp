#pragma once

// Energy law, a-priori norms, polar decomposition and weak-form residuals.
//
// Energy convention: total = 1/2 int |v|^2 + 1/2 int |grad d|^2
//                          + 1/(4 eps^2) int (1 - |d|^2)^2,
// so the usual "2 E_0" normalization of the energy identity is 2 * total.

#include <utility>
#include <vector>

#include "glnematic/state.hpp"

namespace glnematic {

struct EnergySample {
  double t = 0.0;
  double kinetic = 0.0;
  double dirichlet = 0.0;
  double penalty = 0.0;
  double total = 0.0;
  double diss_v = 0.0;      // int |grad v|^2
  double diss_d = 0.0;      // int |tau|^2, tau = lap d + eps^-2 (1 - |d|^2) d
  double l4_v = 0.0;        // ||v||_{L^4}
  double max_d = 0.0;
  double penalty_l2 = 0.0;  // ||1 - |d|^2||_{L^2}
};

EnergySample energy(const SimState& state, double epsilon);

/// How sampled dissipation rates are integrated between samples.
enum class DissipationRule {
  right_endpoint,  // rate at the later sample, the implicit-Euler energy identity
  trapezoid,
};

struct EnergyAudit {
  bool passed = false;
  bool monotone = false;
  bool cumulative = false;
  /// max over steps of (E_{m+1} - E_m) / E_0 in the 2*total convention (<= 1e-8 to pass).
  double worst_step_increase = 0.0;
  std::size_t worst_step_index = 0;
  /// max over m of [E_m + 2 sum dt D] / E_0 - 1 (<= 1e-6 to pass); 0 when E_0 = 0.
  double worst_cumulative_excess = 0.0;
  std::size_t worst_cumulative_index = 0;
  double dissipated = 0.0;  // 2 * sum dt (diss_v + diss_d) over the whole trajectory
};

/// Checks per-step monotonicity within 1e-8 E_0 and the cumulative energy inequality
/// E(t) + 2 sum dt (diss_v + diss_d) <= E_0 (1 + 1e-6), with E = 2 * total.
/// Step lengths are taken from the sample times. Needs >= 2 samples.
EnergyAudit energy_audit(const std::vector<EnergySample>& trajectory,
                         DissipationRule rule = DissipationRule::right_endpoint);

/// Least-squares slope of log(value) against log(epsilon).
double penalty_scaling_fit(const std::vector<std::pair<double, double>>& runs);

struct PolarSample {
  double region_fraction = 0.0;  // share of nodes with |d| >= 1/2
  double grad_rho_l2sq = 0.0;    // int over region of |grad |d||^2
  double grad_psi_l4 = 0.0;      // ||grad (d/|d|)||_{L^4} over the region
};

PolarSample polar_sample(const Field& d);

struct ResidualEntry {
  int k1 = 0;
  int k2 = 0;
  int component = 0;  // director component for wedge tables, 0 for momentum
  double magnitude = 0.0;
};

struct ResidualTable {
  std::vector<ResidualEntry> entries;
  double max = 0.0;
};

/// Weak momentum residual against phi = perp_grad exp(i k.x), 1 <= |k|_inf <= k_max:
///   R(k) = int dt_v.phi - (v (x) v):grad phi + grad v:grad phi - (grad d (.) grad d):grad phi,
/// with dt_v the backward difference (curr - prev) / (t_curr - t_prev), evaluated at curr.
ResidualTable momentum_weak_residual(const SimState& prev, const SimState& curr, int k_max);

}  // namespace glnematic
