#pragma once

// Local energy in periodic balls, a fixed-epsilon surrogate of the singular set
// Sigma_t, its cardinality bound ceil(E / eps0^2), and a cross-epsilon estimate
// of the defect measure in the elastic stress.

#include <utility>
#include <vector>

#include "glnematic/spectral.hpp"

namespace glnematic {

struct BallSpec {
  double x1 = 0.0;
  double x2 = 0.0;
  double radius = 1.0;  // must lie in (0, pi)
};

/// Periodic distance on the torus.
double torus_distance(double ax, double ay, double bx, double by);

/// Pointwise 1/2 |grad d|^2 + (1 - |d|^2)^2 / (4 eps^2).
Field energy_density(const Field& d, double epsilon);

/// Rectangle-rule integral of the energy density over nodes within radius of the center.
double local_energy(const Field& d, double epsilon, const BallSpec& ball);

struct ConcentrationPoint {
  double x1 = 0.0;
  double x2 = 0.0;
  double peak_energy = 0.0;        // largest ball energy among the cluster's nodes
  double attributed_energy = 0.0;  // energy of the disjoint region credited to the cluster
  int nodes = 0;                   // marked nodes in the cluster
};

struct ConcentrationReport {
  double t = 0.0;
  double epsilon = 0.0;
  double eps0_sq = 0.0;
  double radius = 0.0;
  double total_energy = 0.0;  // dirichlet + penalty of the snapshot
  std::vector<ConcentrationPoint> points;
  int count = 0;
  long k_bound = 0;
  bool passed = false;
};

/// ceil(total_energy / eps0_sq). Rejects eps0_sq <= 0.
long count_bound(double total_energy, double eps0_sq);

/// Ball energies at every node (via a spectral convolution with the ball indicator),
/// threshold at eps0_sq, single-linkage clustering with periodic distance <= radius,
/// and disjoint attribution of energy to clusters: every grid node is credited to
/// the nearest cluster peak within radius, and clusters whose credited energy does
/// not exceed eps0_sq are dropped (repeated until stable). Reported clusters thus
/// carry > eps0_sq from pairwise disjoint node sets, so count <= k_bound always.
ConcentrationReport detect_sigma(const Field& d, double epsilon, double radius, double eps0_sq,
                                 double t = 0.0);

/// Ball energy at every grid node, same layout as the physical samples.
std::vector<double> ball_energies(const Field& d, double epsilon, double radius);

struct DefectPairing {
  int k1 = 0;
  int k2 = 0;
  Complex value;
};

struct DefectEstimate {
  double t = 0.0;
  int test_k_max = 0;
  std::vector<double> epsilons;                     // as given
  std::vector<std::vector<DefectPairing>> pairings;  // [epsilon][k]
  std::vector<DefectPairing> eta_estimate;          // one per k
};

/// int (grad d (.) grad d) : grad phi_k for phi_k = perp_grad exp(i k.x), 1 <= |k|_inf <= k_max.
std::vector<DefectPairing> stress_pairings(const Field& d, int k_max);

/// Needs >= 3 snapshots on a common grid. eta_estimate is the finest-epsilon pairing
/// minus the straight line through the two coarsest entries, evaluated at the finest
/// epsilon (zero for identical data or data linear in epsilon).
DefectEstimate defect_estimate(const std::vector<std::pair<double, Field>>& snapshots, int k_max,
                               double t = 0.0);

}  // namespace glnematic
