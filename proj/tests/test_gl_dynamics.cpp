#include <doctest.h>

#include <array>

#include "glnematic/gl_dynamics.hpp"
#include "glnematic/io.hpp"
#include "oracles.hpp"

using namespace glnematic;
using oracle::kPi;

namespace {

SimState taylor_green(int n) {
  return generate_initial("smooth-wave", {{"beta0", 0.0}, {"a", 0.0}, {"b", 0.0}, {"amplitude", 1.0}},
                          make_grid(n), 0);
}

Field equator(const SpectralGrid& g) {
  Field d(g, 3);
  const double h = g.spacing();
  for (int a = 0; a < g.n(); ++a)
    for (int b = 0; b < g.n(); ++b) {
      d.at(0, a, b) = std::cos(a * h);
      d.at(1, a, b) = std::sin(a * h);
      d.at(2, a, b) = 0.0;
    }
  d.to_spectral();
  return d;
}

Field band_limited_director(const SpectralGrid& g, int band, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return oracle::sample(g, {oracle::random_poly(rng, band, 0.3), oracle::random_poly(rng, band, 0.3),
                            oracle::random_poly(rng, band, 0.3, 0.8)});
}

Field rotate(const Field& d, const std::array<std::array<double, 3>, 3>& r) {
  Field out(d.grid(), 3);
  for (int c = 0; c < 3; ++c) {
    auto o = out.physical_mut(c);
    for (std::size_t q = 0; q < o.size(); ++q)
      o[q] = r[c][0] * d.physical(0)[q] + r[c][1] * d.physical(1)[q] + r[c][2] * d.physical(2)[q];
  }
  out.to_spectral();
  return out;
}

std::array<std::array<double, 3>, 3> rotation(double a, double b) {
  // R_z(a) * R_x(b)
  const double ca = std::cos(a), sa = std::sin(a), cb = std::cos(b), sb = std::sin(b);
  return {{{ca, -sa * cb, sa * sb}, {sa, ca * cb, -ca * sb}, {0.0, sb, cb}}};
}

}  // namespace

TEST_CASE("GL term examples") {
  auto g = make_grid(16);
  CHECK(oracle::max_abs_phys(gl_term(equator(g), 0.1)) < 1e-10);
  Field zero(g, 3);
  CHECK(oracle::max_abs_phys(gl_term(zero, 0.1)) == 0.0);
  Field half(g, 3);
  for (auto& x : half.physical_mut(0)) x = 0.5;
  Field out = gl_term(half, 0.5);
  out.to_physical();
  for (double x : out.physical(0)) CHECK(x == doctest::Approx(1.5).epsilon(1e-14));
  for (double x : out.physical(1)) CHECK(x == 0.0);
  CHECK_THROWS_AS(gl_term(half, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(gl_term(half, -1.0), std::invalid_argument);
}

TEST_CASE("stress force vanishes on constant and equator directors") {
  auto g = make_grid(32);
  SimState s = make_state(g);
  CHECK(oracle::max_abs_phys(stress_force(s.d, 0.1)) == 0.0);
  CHECK(oracle::max_abs_phys(stress_force(equator(g), 0.1)) <= 1e-12);
  CHECK(oracle::max_abs_phys(stress_force_divergence_form(equator(g))) <= 1e-12);
}

TEST_CASE("identity-form stress force equals the projected divergence of the stress tensor") {
  auto g = make_grid(32);
  // band 2 keeps every product below the 2/3 cutoff, band 3 below the Nyquist limit
  Field d2 = band_limited_director(g, 2, 5);
  for (double eps : {1.0, 0.3}) {
    Field a = stress_force(d2, eps, true);
    Field b = stress_force_divergence_form(d2, true);
    CHECK(oracle::max_diff(a, b) <= 1e-10);
    CHECK(oracle::max_abs_phys(a) > 1e-3);
  }
  Field d3 = band_limited_director(g, 3, 6);
  CHECK(oracle::max_diff(stress_force(d3, 0.5, false), stress_force_divergence_form(d3, false)) <= 1e-10);
}

TEST_CASE("stress force is solenoidal with zero mean") {
  auto g = make_grid(32);
  SimState s = generate_initial("random-smooth", {}, g, 8);
  Field f = stress_force(s.d, 0.2);
  CHECK(spectral_divergence_max(f) <= 1e-12);
  CHECK(std::abs(mode_value(f, 0, 0, 0)) == 0.0);
  CHECK(std::abs(mode_value(f, 1, 0, 0)) == 0.0);
}

TEST_CASE("advection examples") {
  auto g = make_grid(16);
  std::mt19937_64 rng(2);
  Field f = oracle::white_noise(g, 3, rng);
  Field v0(g, 2);
  CHECK(oracle::max_abs_phys(advect(v0, f)) == 0.0);
  Field c(g, 1);
  for (auto& x : c.physical_mut(0)) x = 2.5;
  c.to_spectral();
  Field v = oracle::white_noise(g, 2, rng);
  CHECK(oracle::max_abs_phys(advect(v, c)) <= 1e-14);
  Field e1(g, 2), s(g, 1), cosx(g, 1);
  const double h = g.spacing();
  for (auto& x : e1.physical_mut(0)) x = 1.0;
  for (int a = 0; a < 16; ++a)
    for (int b = 0; b < 16; ++b) {
      s.at(0, a, b) = std::sin(a * h);
      cosx.at(0, a, b) = std::cos(a * h);
    }
  e1.to_spectral();
  s.to_spectral();
  cosx.to_spectral();
  CHECK(oracle::max_diff(advect(e1, s), cosx) <= 1e-14);
}

TEST_CASE("constant director at rest is a fixed point") {
  SimParams p;
  p.n = 16;
  p.epsilon = 0.1;
  SimState s = generate_initial("constant", {{"d1", 1.0}, {"d2", 2.0}, {"d3", 2.0}}, make_grid(16), 0);
  SimState next = s;
  for (int i = 0; i < 10; ++i) next = step_imex(next, p);
  CHECK(oracle::max_diff(next.d, s.d) <= 1e-14);
  CHECK(oracle::max_abs_phys(next.v) <= 1e-14);
  CHECK(next.step == 10);
  CHECK(next.t == doctest::Approx(10 * p.dt_effective()));
}

TEST_CASE("Taylor-Green vortex decays like exp(-2t)") {
  SimParams p;
  p.n = 32;
  p.epsilon = 0.5;
  p.dt_requested = 1e-4;
  p.t_end = 0.1;
  SimState s = taylor_green(32);
  RunResult r = run(p, s, 1000);
  CHECK(r.final_state.t == doctest::Approx(0.1).epsilon(1e-14));
  const double f = std::exp(-2 * r.final_state.t);
  double err = 0.0;
  for (int c = 0; c < 2; ++c)
    for (std::size_t q = 0; q < s.v.physical(c).size(); ++q)
      err = std::max(err, std::abs(r.final_state.v.physical(c)[q] - f * s.v.physical(c)[q]));
  CHECK(err <= 2e-5);
}

TEST_CASE("imex and rk4 agree to first order on a tiny grid") {
  auto g = make_grid(8);
  SimState s = generate_initial("smooth-wave", {}, g, 0);
  std::vector<double> diffs;
  for (double dt : {4e-4, 2e-4}) {
    SimParams p;
    p.n = 8;
    p.epsilon = 0.5;
    p.dt_requested = dt;
    p.t_end = 0.05;
    SimState a = run(p, s, 1 << 20).final_state;
    p.scheme = Scheme::rk4_reference;
    SimState b = run(p, s, 1 << 20).final_state;
    diffs.push_back(std::max(oracle::max_diff(a.v, b.v), oracle::max_diff(a.d, b.d)));
  }
  CHECK(std::log2(diffs[0] / diffs[1]) >= 0.9);
}

TEST_CASE("run with t_end = 0 returns the initial state") {
  SimParams p;
  p.n = 16;
  p.t_end = 0.0;
  SimState s = generate_initial("smooth-wave", {}, make_grid(16), 0);
  RunResult r = run(p, s, 1);
  CHECK(r.trajectory.empty());
  CHECK(r.final_state.t == 0.0);
  CHECK(oracle::max_diff(r.final_state.d, s.d) == 0.0);
}

TEST_CASE("run samples at the start, every k steps and at the end") {
  SimParams p;
  p.n = 16;
  p.epsilon = 0.2;
  p.dt_requested = 1e-3;
  p.t_end = 0.01;
  SimState s = generate_initial("smooth-wave", {}, make_grid(16), 0);
  int sampled = 0, stepped = 0;
  std::vector<double> snaps;
  RunObserver o;
  o.on_sample = [&](const SimState&, const EnergySample&) { ++sampled; };
  o.on_step = [&](const SimState& a, const SimState& b) {
    ++stepped;
    CHECK(b.step == a.step + 1);
  };
  o.snapshot_times = {0.0, 0.0045, 0.01};
  o.on_snapshot = [&](const SimState& st) { snaps.push_back(st.t); };
  RunResult r = run(p, s, 3, o);
  CHECK(stepped == 10);
  CHECK(r.trajectory.size() == 5);  // steps 0, 3, 6, 9, 10
  CHECK(sampled == 5);
  REQUIRE(snaps.size() == 3);
  CHECK(snaps[0] == 0.0);
  CHECK(snaps[1] == doctest::Approx(0.005));
  CHECK(snaps[2] == doctest::Approx(0.01));
}

TEST_CASE("an unstable configuration aborts with a blow-up report") {
  SimParams p;
  p.n = 64;
  p.epsilon = 1e-6;
  p.dt_requested = 1e-2;
  p.t_end = 1.0;
  p.enforce_dt_guard = false;
  SimState s = generate_initial("smooth-wave", {}, make_grid(64), 0);
  bool caught = false;
  try {
    run(p, s, 1);
  } catch (const BlowUpError& e) {
    caught = true;
    CHECK(e.t > 0.0);
    CHECK(e.step >= 1);
    CHECK(std::isfinite(e.max_v));
    CHECK(std::isfinite(e.max_d));
    CHECK(std::string(e.what()).find("blow-up") != std::string::npos);
  }
  CHECK(caught);
}

TEST_CASE("pressure of a resting constant state is zero") {
  SimState s = make_state(make_grid(16));
  CHECK(oracle::max_abs_phys(recover_pressure(s)) == 0.0);
}

TEST_CASE("Taylor-Green pressure solves -lap p = div((v.grad)v)") {
  SimState s = taylor_green(32);
  Field p = recover_pressure(s);
  const double h = s.v.grid().spacing();
  // (v.grad)v = (sin 2x / 2, sin 2y / 2), so div = cos 2x + cos 2y and -lap p = 4 p for p in span(cos 2x, cos 2y)
  double e = 0.0;
  for (int a = 0; a < 32; ++a)
    for (int b = 0; b < 32; ++b) {
      const double x = a * h, y = b * h;
      e = std::max(e, std::abs(p.at(0, a, b) - (std::cos(2 * x) + std::cos(2 * y)) / 4));
    }
  CHECK(e <= 1e-14);
  Field lhs = laplacian(p);
  Field rhs = divergence(advect(s.v, s.v));
  lhs.to_physical();
  rhs.to_physical();
  double r = 0.0;
  for (std::size_t q = 0; q < lhs.physical(0).size(); ++q)
    r = std::max(r, std::abs(-lhs.physical(0)[q] - rhs.physical(0)[q]));
  CHECK(r <= 1e-13);
}

TEST_CASE("pressure gradient is minus the gradient part of the nonlinearity") {
  auto g = make_grid(32);
  SimState s = generate_initial("random-smooth", {}, g, 12);
  Field grad_p = gradient(recover_pressure(s, false));

  // N = (v.grad)v + div S, S_ij = d_i d . d_j d, assembled from plain derivatives
  Field grads[3];
  for (int c = 0; c < 3; ++c) {
    Field comp(g, 1);
    auto o = comp.physical_mut(0);
    std::copy(s.d.physical(c).begin(), s.d.physical(c).end(), o.begin());
    comp.to_spectral();
    grads[c] = gradient(comp);
  }
  Field n = advect(s.v, s.v, false);
  n.to_physical();
  Field total(g, 2);
  for (int i = 0; i < 2; ++i) {
    auto out = total.physical_mut(i);
    std::copy(n.physical(i).begin(), n.physical(i).end(), out.begin());
    for (int j = 0; j < 2; ++j) {
      Field sij(g, 1);
      auto sp = sij.physical_mut(0);
      for (std::size_t q = 0; q < sp.size(); ++q) {
        double acc = 0.0;
        for (int c = 0; c < 3; ++c) acc += grads[c].physical(i)[q] * grads[c].physical(j)[q];
        sp[q] = acc;
      }
      sij.to_spectral();
      Field dsij = gradient(sij);
      for (std::size_t q = 0; q < out.size(); ++q) out[q] += dsij.physical(j)[q];
    }
  }
  total.to_spectral();
  Field proj = leray_project(total);
  double e = 0.0;
  for (int i = 0; i < 2; ++i)
    for (std::size_t q = 0; q < grad_p.physical(i).size(); ++q) {
      const double complement = total.physical(i)[q] - proj.physical(i)[q];
      e = std::max(e, std::abs(grad_p.physical(i)[q] + complement));
    }
  CHECK(e <= 1e-10);
  CHECK(oracle::max_abs_phys(grad_p) > 1e-3);
}

TEST_CASE("steps keep the velocity solenoidal with zero mean") {
  SimParams p;
  p.n = 32;
  p.epsilon = 0.2;
  p.dt_requested = 1e-3;
  SimState s = generate_initial("random-smooth", {}, make_grid(32), 1);
  for (int i = 0; i < 20; ++i) {
    s = step_imex(s, p);
    CHECK(spectral_divergence_max(s.v) <= 1e-12);
    CHECK(std::abs(mode_value(s.v, 0, 0, 0)) <= 1e-13);
    CHECK(std::abs(mode_value(s.v, 1, 0, 0)) <= 1e-13);
  }
}

TEST_CASE("rotating the director commutes with a step") {
  SimParams p;
  p.n = 32;
  p.epsilon = 0.2;
  SimState s = generate_initial("random-smooth", {}, make_grid(32), 3);
  const auto r = rotation(0.7, -1.1);
  SimState rs = s;
  rs.d = rotate(s.d, r);
  for (int i = 0; i < 3; ++i) {
    s = step_imex(s, p);
    rs = step_imex(rs, p);
  }
  CHECK(oracle::max_diff(rotate(s.d, r), rs.d) <= 1e-12);
  CHECK(oracle::max_diff(s.v, rs.v) <= 1e-12);
}

TEST_CASE("force decomposition is consistent with the individual operators") {
  SimParams p;
  p.n = 32;
  p.epsilon = 0.3;
  SimState s = generate_initial("random-smooth", {}, make_grid(32), 9);
  ForceDecomposition f = decompose_forces(s, p);
  Field tension = laplacian(s.d);
  Field pen = gl_term(s.d, p.epsilon, false);
  tension.to_physical();
  pen.to_physical();
  double e = 0.0;
  for (int c = 0; c < 3; ++c)
    for (std::size_t q = 0; q < pen.physical(c).size(); ++q)
      e = std::max(e, std::abs(f.tension.physical(c)[q] - tension.physical(c)[q] - pen.physical(c)[q]));
  CHECK(e <= 1e-10);
  CHECK(oracle::max_diff(f.stress_force, stress_force(s.d, p.epsilon)) <= 1e-14);
  CHECK(oracle::max_diff(f.advection_v, advect(s.v, s.v)) <= 1e-14);
  CHECK(oracle::max_diff(f.advection_d, advect(s.v, s.d)) <= 1e-14);
  CHECK(spectral_divergence_max(f.stress_force) <= 1e-12);
}

TEST_CASE("guarded smooth-wave run dissipates energy and keeps |d| <= 1") {
  SimParams p;
  p.n = 32;
  p.epsilon = 0.2;
  p.dt_requested = 1e-3;
  p.t_end = 0.1;
  SimState s = generate_initial("smooth-wave", {}, make_grid(32), 0);
  RunResult r = run(p, s, 1);
  EnergyAudit a = energy_audit(r.trajectory);
  CHECK(a.passed);
  for (const auto& e : r.trajectory) CHECK(e.max_d <= 1.0 + 1e-8);
}

TEST_CASE("linear stabilization permits steps beyond the explicit guard") {
  SimParams p;
  p.n = 32;
  p.epsilon = 0.05;
  p.dt_requested = 2e-3;  // 3.2 eps^2
  p.t_end = 0.1;
  p.stabilization = 2.0;
  CHECK(p.dt_effective() == doctest::Approx(2e-3));
  SimState s = generate_initial("smooth-wave", {}, make_grid(32), 0);
  RunResult r = run(p, s, 1);
  CHECK(validate(r.final_state, p).passed());
  CHECK(r.trajectory.back().total < r.trajectory.front().total);
}
