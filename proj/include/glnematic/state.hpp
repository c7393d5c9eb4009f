#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "glnematic/spectral.hpp"

namespace glnematic {

enum class Scheme { imex1, rk4_reference };

/// Problem and discretization parameters. All physical constants are one.
struct SimParams {
  double epsilon = 0.1;
  int n = 64;
  double dt_requested = 1e-3;
  double t_end = 0.5;
  Scheme scheme = Scheme::imex1;
  double stabilization = 0.0;
  /// Concentration threshold; unset means 0.05 * initial (dirichlet + penalty).
  std::optional<double> eps0_sq;
  /// Ball radius for concentration analysis; unset means min(16 h, pi/2).
  std::optional<double> ball_radius;
  bool dealias_on = true;
  std::uint64_t seed = 0;
  /// Cap dt at epsilon^2 / 4 when stabilization is 0. Only disabled to provoke blow-up.
  bool enforce_dt_guard = true;

  /// Largest admissible step: min(dt_requested, eps^2/4) under the guard.
  double dt_limit() const;
  /// Step actually used: dt_limit shrunk so that an integer number of steps lands on t_end.
  double dt_effective() const;
  /// Number of steps needed to reach t_end.
  long steps_to_end() const;
  double default_ball_radius() const { return std::min(16.0 * kTwoPi / n, kTwoPi / 4); }

  /// Throws std::invalid_argument on out-of-range values.
  void check() const;
};

const char* scheme_name(Scheme s);
Scheme parse_scheme(const std::string& name);

/// Evolving (v, d) pair. v has 2 components, d has 3; both carry physical and
/// spectral data after every solver step. Pressure is recovered on demand.
struct SimState {
  double t = 0.0;
  long step = 0;
  Field v;
  Field d;
};

/// Zero velocity, director (0, 0, 1).
SimState make_state(const SpectralGrid& grid);

enum class DirectorMode { ginzburg_landau, limit };

struct InvariantCheck {
  std::string name;
  bool passed = false;
  double value = 0.0;
  double limit = 0.0;
};

struct ValidationReport {
  std::vector<InvariantCheck> checks;
  bool passed() const;
  const InvariantCheck* find(const std::string& name) const;
};

/// Checks the standing invariants of a state; never throws for bad data.
ValidationReport validate(const SimState& state, const SimParams& params,
                          DirectorMode mode = DirectorMode::ginzburg_landau);

double max_director_norm(const SimState& state);
/// max ||d| - 1| over the grid.
double unit_norm_deviation(const SimState& state);

}  // namespace glnematic
