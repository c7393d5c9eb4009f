#include <doctest.h>

#include "glnematic/gl_dynamics.hpp"
#include "glnematic/io.hpp"
#include "glnematic/state.hpp"

using namespace glnematic;

namespace {

SimParams small_params() {
  SimParams p;
  p.n = 16;
  p.epsilon = 0.2;
  p.dt_requested = 1e-3;
  p.t_end = 0.1;
  return p;
}

}  // namespace

TEST_CASE("fresh constant state passes every check") {
  auto p = small_params();
  SimState s = generate_initial("constant", {}, make_grid(p.n), 0);
  auto r = validate(s, p);
  CHECK(r.passed());
  for (const char* name : {"epsilon_range", "finite", "divergence", "mean_velocity", "max_principle",
                           "time_consistency", "dt_guard"})
    CHECK(r.find(name) != nullptr);
  CHECK(validate(s, p, DirectorMode::limit).find("unit_norm")->passed);
}

TEST_CASE("injected |d| = 1.1 fails the maximum principle with value 1.1") {
  auto p = small_params();
  SimState s = make_state(make_grid(p.n));
  s.d.physical_mut(2)[17] = 1.1;
  s.d.to_spectral();
  auto r = validate(s, p);
  CHECK_FALSE(r.passed());
  const auto* c = r.find("max_principle");
  REQUIRE(c != nullptr);
  CHECK_FALSE(c->passed);
  CHECK(c->value == doctest::Approx(1.1).epsilon(1e-15));
  CHECK(r.find("divergence")->passed);
}

TEST_CASE("state after 100 imex steps on smooth-wave passes") {
  auto p = small_params();
  p.n = 32;
  p.t_end = 100 * p.dt_limit();
  SimState s = generate_initial("smooth-wave", {}, make_grid(p.n), 0);
  for (int i = 0; i < 100; ++i) s = step(s, p);
  CHECK(s.step == 100);
  auto r = validate(s, p);
  for (const auto& c : r.checks) {
    CAPTURE(c.name);
    CAPTURE(c.value);
    CHECK(c.passed);
  }
}

TEST_CASE("validate is free of side effects") {
  auto p = small_params();
  SimState s = generate_initial("random-smooth", {}, make_grid(p.n), 4);
  auto a = validate(s, p);
  auto b = validate(s, p);
  REQUIRE(a.checks.size() == b.checks.size());
  for (std::size_t i = 0; i < a.checks.size(); ++i) {
    CHECK(a.checks[i].name == b.checks[i].name);
    CHECK(a.checks[i].passed == b.checks[i].passed);
    CHECK(a.checks[i].value == b.checks[i].value);
  }
}

TEST_CASE("non-solenoidal, moving-mean or stale-clock states are flagged") {
  auto p = small_params();
  auto g = make_grid(p.n);
  SimState s = make_state(g);
  for (auto& x : s.v.physical_mut(0)) x = 0.3;
  s.v.to_spectral();
  CHECK_FALSE(validate(s, p).find("mean_velocity")->passed);

  SimState t = make_state(g);
  const double h = g.spacing();
  for (int a = 0; a < p.n; ++a)
    for (int b = 0; b < p.n; ++b) t.v.at(0, a, b) = std::sin(a * h);
  t.v.to_spectral();
  CHECK_FALSE(validate(t, p).find("divergence")->passed);

  SimState u = make_state(g);
  u.step = 3;
  u.t = 3 * p.dt_effective() * (1 + 1e-9);
  CHECK_FALSE(validate(u, p).find("time_consistency")->passed);
}

TEST_CASE("non-finite data short-circuits the report") {
  auto p = small_params();
  SimState s = make_state(make_grid(p.n));
  s.d.physical_mut(0)[0] = std::nan("");
  auto r = validate(s, p);
  CHECK_FALSE(r.find("finite")->passed);
  CHECK_FALSE(r.passed());
}

TEST_CASE("time step respects the guard and lands on t_end") {
  SimParams p;
  p.epsilon = 0.1;
  p.dt_requested = 1e-2;
  p.t_end = 0.5;
  CHECK(p.dt_limit() == doctest::Approx(0.0025));
  CHECK(p.steps_to_end() == 200);
  CHECK(p.dt_effective() * p.steps_to_end() == doctest::Approx(0.5).epsilon(1e-15));
  p.dt_requested = 3e-3;
  p.t_end = 0.01;
  CHECK(p.dt_effective() <= std::min(p.dt_requested, 0.25 * p.epsilon * p.epsilon));
  p.stabilization = 2.0;
  CHECK(p.dt_limit() == 3e-3);
  p.stabilization = 0.0;
  p.enforce_dt_guard = false;
  CHECK(p.dt_limit() == 3e-3);
}

TEST_CASE("parameter ranges are enforced") {
  SimParams p;
  CHECK_NOTHROW(p.check());
  SimParams bad = p;
  bad.epsilon = 1.5;
  CHECK_THROWS_AS(bad.check(), std::invalid_argument);
  bad = p;
  bad.epsilon = 0.0;
  CHECK_THROWS_AS(bad.check(), std::invalid_argument);
  bad = p;
  bad.n = 9;
  CHECK_THROWS_AS(bad.check(), std::invalid_argument);
  bad = p;
  bad.dt_requested = 0.0;
  CHECK_THROWS_AS(bad.check(), std::invalid_argument);
  bad = p;
  bad.ball_radius = 3.2;
  CHECK_THROWS_AS(bad.check(), std::invalid_argument);
  bad = p;
  bad.eps0_sq = -1.0;
  CHECK_THROWS_AS(bad.check(), std::invalid_argument);
  bad = p;
  bad.stabilization = -1.0;
  CHECK_THROWS_AS(bad.check(), std::invalid_argument);
  CHECK(parse_scheme("rk4_reference") == Scheme::rk4_reference);
  CHECK(std::string(scheme_name(Scheme::imex1)) == "imex1");
  CHECK_THROWS_AS(parse_scheme("euler"), std::invalid_argument);
}

TEST_CASE("default ball radius is 16 cells, capped at pi/2") {
  SimParams p;
  p.n = 128;
  CHECK(p.default_ball_radius() == doctest::Approx(16 * kTwoPi / 128));
  p.n = 64;
  CHECK(p.default_ball_radius() == doctest::Approx(kTwoPi / 4));
  p.n = 16;
  CHECK(p.default_ball_radius() == doctest::Approx(kTwoPi / 4));
}
