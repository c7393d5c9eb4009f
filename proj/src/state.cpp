#include "glnematic/state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace glnematic {

double SimParams::dt_limit() const {
  double dt = dt_requested;
  if (enforce_dt_guard && stabilization == 0.0) dt = std::min(dt, 0.25 * epsilon * epsilon);
  return dt;
}

long SimParams::steps_to_end() const {
  if (t_end <= 0.0) return 0;
  return std::max(1L, static_cast<long>(std::ceil(t_end / dt_limit() - 1e-9)));
}

double SimParams::dt_effective() const {
  const long steps = steps_to_end();
  return steps == 0 ? dt_limit() : t_end / static_cast<double>(steps);
}

void SimParams::check() const {
  if (!(epsilon > 0.0 && epsilon <= 1.0))
    throw std::invalid_argument("epsilon must lie in (0, 1]");
  if (n < 8 || n % 2 != 0) throw std::invalid_argument("n must be even and >= 8");
  if (!(dt_requested > 0.0)) throw std::invalid_argument("dt_requested must be positive");
  if (!(t_end >= 0.0)) throw std::invalid_argument("t_end must be non-negative");
  if (!(stabilization >= 0.0)) throw std::invalid_argument("stabilization must be >= 0");
  if (eps0_sq && !(*eps0_sq > 0.0)) throw std::invalid_argument("eps0_sq must be positive");
  if (ball_radius && !(*ball_radius > 0.0 && *ball_radius < kTwoPi / 2))
    throw std::invalid_argument("ball_radius must lie in (0, pi)");
}

const char* scheme_name(Scheme s) { return s == Scheme::imex1 ? "imex1" : "rk4_reference"; }

Scheme parse_scheme(const std::string& name) {
  if (name == "imex1") return Scheme::imex1;
  if (name == "rk4_reference") return Scheme::rk4_reference;
  throw std::invalid_argument("unknown scheme '" + name + "'");
}

SimState make_state(const SpectralGrid& grid) {
  SimState s{0.0, 0, Field(grid, 2), Field(grid, 3)};
  for (double& x : s.d.physical_mut(2)) x = 1.0;
  s.d.to_spectral();
  return s;
}

bool ValidationReport::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const auto& c) { return c.passed; });
}

const InvariantCheck* ValidationReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

double max_director_norm(const SimState& state) {
  Field d = state.d;
  d.to_physical();
  auto a = d.physical(0), b = d.physical(1), c = d.physical(2);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::sqrt(a[i] * a[i] + b[i] * b[i] + c[i] * c[i]));
  return worst;
}

double unit_norm_deviation(const SimState& state) {
  Field d = state.d;
  d.to_physical();
  auto a = d.physical(0), b = d.physical(1), c = d.physical(2);
  double worst = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    worst = std::max(worst, std::abs(std::sqrt(a[i] * a[i] + b[i] * b[i] + c[i] * c[i]) - 1.0));
  return worst;
}

namespace {

bool all_finite(const Field& f_in) {
  Field f = f_in;
  f.to_physical();
  for (int c = 0; c < f.components(); ++c)
    for (double x : f.physical(c))
      if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace

ValidationReport validate(const SimState& state, const SimParams& params, DirectorMode mode) {
  ValidationReport r;
  auto add = [&](std::string name, double value, double limit, bool ok) {
    r.checks.push_back({std::move(name), ok, value, limit});
  };

  add("epsilon_range", params.epsilon, 1.0, params.epsilon > 0.0 && params.epsilon <= 1.0);

  const bool finite = all_finite(state.v) && all_finite(state.d);
  add("finite", finite ? 0.0 : 1.0, 0.0, finite);
  if (!finite) return r;

  const double div = spectral_divergence_max(state.v);
  add("divergence", div, 1e-12, div <= 1e-12);

  Field v = state.v;
  v.to_spectral();
  const double mean = std::max(std::abs(v.spectral(0)[0]), std::abs(v.spectral(1)[0]));
  add("mean_velocity", mean, 1e-13, mean <= 1e-13);

  if (mode == DirectorMode::ginzburg_landau) {
    const double m = max_director_norm(state);
    add("max_principle", m, 1.0 + 1e-8, m <= 1.0 + 1e-8);
  } else {
    const double dev = unit_norm_deviation(state);
    add("unit_norm", dev, 1e-12, dev <= 1e-12);
  }

  const double dt = params.dt_effective();
  const double expected_t = static_cast<double>(state.step) * dt;
  const double drift = std::abs(state.t - expected_t);
  const double tol = 1e-12 * std::max({std::abs(state.t), dt, 1e-300});
  add("time_consistency", drift, tol, drift <= tol);

  if (params.scheme == Scheme::imex1 && params.stabilization == 0.0 && params.enforce_dt_guard) {
    const double guard = 0.25 * params.epsilon * params.epsilon;
    add("dt_guard", dt, guard, dt <= guard);
  }
  return r;
}

}  // namespace glnematic
