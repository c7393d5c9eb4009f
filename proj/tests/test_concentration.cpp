#include <doctest.h>

#include <random>

#include "glnematic/concentration.hpp"
#include "glnematic/diagnostics.hpp"
#include "glnematic/io.hpp"
#include "oracles.hpp"

using namespace glnematic;
using oracle::kPi;

namespace {

struct Spike {
  double x, y, amp, width;
};

// d = (0, sin theta, cos theta), theta = sum of Gaussian bumps; each isolated bump carries pi A^2 / 2.
Field spike_field(int n, const std::vector<Spike>& spikes) {
  auto g = make_grid(n);
  Field d(g, 3);
  const double h = g.spacing();
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double theta = 0.0;
      for (const auto& s : spikes) {
        const double r = torus_distance(a * h, b * h, s.x, s.y);
        theta += s.amp * std::exp(-r * r / (s.width * s.width));
      }
      d.at(1, a, b) = std::sin(theta);
      d.at(2, a, b) = std::cos(theta);
    }
  d.to_spectral();
  return d;
}

Field equator(int n) {
  auto g = make_grid(n);
  Field d(g, 3);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      d.at(0, a, b) = std::cos(a * g.spacing());
      d.at(1, a, b) = std::sin(a * g.spacing());
    }
  d.to_spectral();
  return d;
}

Field rotate(const Field& d, const double m[3][3]) {
  Field out(d.grid(), 3);
  for (std::size_t q = 0; q < d.physical(0).size(); ++q)
    for (int i = 0; i < 3; ++i) {
      double acc = 0.0;
      for (int j = 0; j < 3; ++j) acc += m[i][j] * d.physical(j)[q];
      out.physical_mut(i)[q] = acc;
    }
  out.to_spectral();
  return out;
}

}  // namespace

TEST_CASE("count bound examples") {
  CHECK(count_bound(0.0, 1.0) == 0);
  CHECK(count_bound(2 * kPi * kPi, 1.0) == 20);
  CHECK(count_bound(1.0, 0.25) == 4);
  CHECK(count_bound(1.0 + 1e-9, 0.25) == 5);
  CHECK_THROWS_AS(count_bound(1.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(count_bound(1.0, -1.0), std::invalid_argument);
}

TEST_CASE("local energy of constant and equator maps") {
  auto g = make_grid(64);
  SimState s = make_state(g);
  for (double r : {0.1, 1.0, 3.0}) CHECK(local_energy(s.d, 0.1, {1.0, 2.0, r}) <= 1e-25);
  const double h = g.spacing();
  Field e = equator(64);
  for (double r : {0.5, 1.0, 2.0}) {
    const double v = local_energy(e, 0.1, {1.3, 4.0, r});
    CAPTURE(r);
    CHECK(std::abs(v - kPi * r * r / 2) <= 2 * kPi * r * h);
  }
  CHECK_THROWS_AS(local_energy(e, 0.1, {0.0, 0.0, kPi}), std::invalid_argument);
  CHECK_THROWS_AS(local_energy(e, 0.1, {0.0, 0.0, 0.0}), std::invalid_argument);
}

TEST_CASE("local energy agrees with a Monte-Carlo quadrature") {
  std::mt19937_64 rng(11);
  std::vector<oracle::TrigPoly> comps;
  for (int c = 0; c < 3; ++c) comps.push_back(oracle::random_poly(rng, 2, 0.2, c == 2 ? 0.9 : 0.0));
  const int n = 128;
  Field d = oracle::sample(make_grid(n), comps);
  const double eps = 0.5;
  auto density = [&](double x, double y) {
    double g2 = 0.0, m = 0.0;
    for (const auto& p : comps) {
      g2 += p.d(0, x, y) * p.d(0, x, y) + p.d(1, x, y) * p.d(1, x, y);
      m += p(x, y) * p(x, y);
    }
    return 0.5 * g2 + (1 - m) * (1 - m) / (4 * eps * eps);
  };
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const BallSpec ball : {BallSpec{1.0, 2.0, 1.0}, BallSpec{6.0, 0.3, 1.5}}) {
    double acc = 0.0;
    const int samples = 1000000;
    for (int i = 0; i < samples; ++i) {
      const double r = ball.radius * std::sqrt(u(rng)), phi = 2 * kPi * u(rng);
      acc += density(ball.x1 + r * std::cos(phi), ball.x2 + r * std::sin(phi));
    }
    const double mc = kPi * ball.radius * ball.radius * acc / samples;
    const double v = local_energy(d, eps, ball);
    CAPTURE(mc);
    CAPTURE(v);
    CHECK(std::abs(v - mc) <= 0.01 * mc);
  }
}

TEST_CASE("local energy is monotone in radius and translation equivariant") {
  SimState s = generate_initial("random-smooth", {}, make_grid(64), 4);
  Field& d = s.d;
  double prev = 0.0;
  for (double r = 0.05; r < 3.1; r += 0.05) {
    const double v = local_energy(d, 0.2, {2.0, 3.0, r});
    CHECK(v >= prev);
    prev = v;
  }
  const int n = 64;
  const double h = make_grid(n).spacing();
  Field sh(d.grid(), 3);
  const int da = 9, db = 50;
  for (int c = 0; c < 3; ++c)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) sh.at(c, (a + da) % n, (b + db) % n) = d.at(c, a, b);
  sh.to_spectral();
  const double base = local_energy(d, 0.2, {10 * h, 20 * h, 0.7});
  const double moved = local_energy(sh, 0.2, {19 * h, 70 * h, 0.7});
  CHECK(moved == doctest::Approx(base).epsilon(1e-12));
}

TEST_CASE("ball energies match local energy at every node") {
  SimState s = generate_initial("random-smooth", {}, make_grid(32), 8);
  const auto balls = ball_energies(s.d, 0.3, 0.9);
  const double h = s.d.grid().spacing();
  for (int a = 0; a < 32; a += 5)
    for (int b = 0; b < 32; b += 3) {
      const double direct = local_energy(s.d, 0.3, {a * h, b * h, 0.9});
      CHECK(std::abs(balls[a * 32 + b] - direct) <= 1e-12 * (1 + direct));
    }
}

TEST_CASE("detector finds nothing on low-energy data") {
  auto g = make_grid(64);
  SimState s = generate_initial("smooth-wave", {{"a", 0.05}, {"b", 0.05}, {"amplitude", 0.0}}, g, 0);
  const EnergySample e = energy(s, 0.1);
  const double total = e.dirichlet + e.penalty;
  ConcentrationReport r = detect_sigma(s.d, 0.1, 0.5, total);
  CHECK(r.points.empty());
  CHECK(r.count == 0);
  CHECK(r.total_energy == doctest::Approx(total).epsilon(1e-12));
  CHECK(r.k_bound == 1);
  CHECK(r.passed);

  ConcentrationReport c = detect_sigma(make_state(g).d, 0.1, 0.5, 1e-6);
  CHECK(c.count == 0);
  CHECK(c.k_bound == 0);
  CHECK(c.passed);
}

TEST_CASE("detector isolates a single spike") {
  const int n = 128;
  const double radius = 16 * kTwoPi / n;
  for (const Spike sp : {Spike{2.0, 4.1, 1.2, 0.12}, Spike{0.05, 6.2, 0.8, 0.1}}) {
    Field d = spike_field(n, {sp});
    const double inner = local_energy(d, 0.05, {sp.x, sp.y, radius / 2});
    CHECK(inner == doctest::Approx(kPi * sp.amp * sp.amp / 2).epsilon(1e-3));
    const double eps0_sq = inner / 2;
    ConcentrationReport r = detect_sigma(d, 0.05, radius, eps0_sq);
    REQUIRE(r.count == 1);
    CHECK(torus_distance(r.points[0].x1, r.points[0].x2, sp.x, sp.y) <= radius);
    CHECK(r.points[0].peak_energy >= inner * (1 - 1e-12));
    CHECK(r.points[0].attributed_energy > eps0_sq);
    CHECK(r.count <= r.k_bound);
  }
}

TEST_CASE("detector separates distant spikes and respects the bound") {
  const int n = 128;
  const double radius = 0.5;
  Field d = spike_field(n, {{1.0, 1.0, 1.0, 0.12}, {4.5, 1.5, 1.0, 0.12}, {3.0, 5.0, 1.0, 0.12}});
  ConcentrationReport r = detect_sigma(d, 0.05, radius, 0.6);
  CHECK(r.count == 3);
  CHECK(r.count <= r.k_bound);
  for (int i = 0; i < r.count; ++i)
    for (int j = i + 1; j < r.count; ++j)
      CHECK(torus_distance(r.points[i].x1, r.points[i].x2, r.points[j].x1, r.points[j].x2) > radius);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<Spike> spikes;
    const int count = 1 + static_cast<int>(6 * u(rng));
    for (int i = 0; i < count; ++i)
      spikes.push_back({kTwoPi * u(rng), kTwoPi * u(rng), 0.3 + 1.5 * u(rng), 0.08 + 0.2 * u(rng)});
    Field f = spike_field(64, spikes);
    const double eps0_sq = 0.05 + u(rng);
    ConcentrationReport c = detect_sigma(f, 0.1, 0.3 + 1.0 * u(rng), eps0_sq);
    double credited = 0.0;
    for (const auto& p : c.points) {
      CHECK(p.attributed_energy > eps0_sq);
      credited += p.attributed_energy;
    }
    CHECK(credited <= c.total_energy * (1 + 1e-12));
    CHECK(c.count <= c.k_bound);
  }
}

TEST_CASE("detector is invariant under target rotations") {
  Field d = spike_field(64, {{1.0, 2.0, 1.3, 0.2}, {4.0, 4.0, 0.9, 0.15}});
  const double a = 0.7, b = -1.1;
  const double rz[3][3] = {{std::cos(a), -std::sin(a), 0}, {std::sin(a), std::cos(a), 0}, {0, 0, 1}};
  const double rx[3][3] = {{1, 0, 0}, {0, std::cos(b), -std::sin(b)}, {0, std::sin(b), std::cos(b)}};
  Field r = rotate(rotate(d, rz), rx);
  ConcentrationReport p = detect_sigma(d, 0.1, 0.6, 0.3);
  ConcentrationReport q = detect_sigma(r, 0.1, 0.6, 0.3);
  REQUIRE(p.count == q.count);
  CHECK(p.count == 2);
  for (int i = 0; i < p.count; ++i) {
    CHECK(std::abs(p.points[i].x1 - q.points[i].x1) <= 1e-12);
    CHECK(std::abs(p.points[i].x2 - q.points[i].x2) <= 1e-12);
    CHECK(std::abs(p.points[i].peak_energy - q.points[i].peak_energy) <= 1e-12);
    CHECK(std::abs(p.points[i].attributed_energy - q.points[i].attributed_energy) <= 1e-12);
  }
  CHECK_THROWS_AS(detect_sigma(d, 0.1, 0.6, 0.0), std::invalid_argument);
}

TEST_CASE("stress pairings of the equator map") {
  // grad d (.) grad d = e1 (x) e1, constant, so every pairing vanishes
  auto pairs = stress_pairings(equator(32), 4);
  CHECK(pairs.size() == 80u);
  for (const auto& p : pairs) CHECK(std::abs(p.value) <= 1e-12);

  // f = sin y: S = cos^2 y e2 (x) e2 lives on k1 = 0, where c_2 = i k1 vanishes
  auto g = make_grid(32);
  Field d(g, 3);
  for (int a = 0; a < 32; ++a)
    for (int b = 0; b < 32; ++b) {
      const double f = std::sin(b * g.spacing());
      d.at(0, a, b) = std::cos(f);
      d.at(1, a, b) = std::sin(f);
    }
  d.to_spectral();
  for (const auto& p : stress_pairings(d, 3)) CHECK(std::abs(p.value) <= 1e-11);
}

TEST_CASE("stress pairings against a direct quadrature") {
  std::mt19937_64 rng(21);
  std::vector<oracle::TrigPoly> comps;
  for (int c = 0; c < 3; ++c) comps.push_back(oracle::random_poly(rng, 2, 0.3));
  const int n = 32;
  Field d = oracle::sample(make_grid(n), comps);
  const double h = kTwoPi / n;
  for (const auto& p : stress_pairings(d, 2)) {
    // phi = perp_grad e^{ik.x} = (-i k2, i k1) e^{ik.x}; grad phi_ij = c_i i k_j e^{ik.x}
    const Complex I{0, 1};
    const Complex c[2] = {-I * double(p.k2), I * double(p.k1)};
    const double k[2] = {double(p.k1), double(p.k2)};
    Complex acc{};
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const double x = a * h, y = b * h;
        const Complex e = std::polar(1.0, p.k1 * x + p.k2 * y);
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            double s = 0.0;
            for (const auto& q : comps) s += q.d(i, x, y) * q.d(j, x, y);
            acc += s * c[i] * I * k[j] * e;
          }
      }
    acc *= h * h;
    CHECK(std::abs(p.value - acc) <= 1e-10);
  }
}

TEST_CASE("defect estimate vanishes on identical and linear data") {
  SimState s = generate_initial("random-smooth", {}, make_grid(32), 1);
  std::vector<std::pair<double, Field>> same = {{0.2, s.d}, {0.1, s.d}, {0.05, s.d}};
  DefectEstimate e = defect_estimate(same, 3);
  CHECK(e.test_k_max == 3);
  CHECK(e.pairings.size() == 3u);
  CHECK(e.eta_estimate.size() == 48u);
  for (const auto& p : e.eta_estimate) CHECK(std::abs(p.value) == 0.0);

  // Scaling d by sqrt(alpha + beta eps) makes every pairing affine in eps.
  auto scaled = [&](double eps) {
    Field f = s.d;
    const double m = std::sqrt(0.5 + 3.0 * eps);
    for (int c = 0; c < 3; ++c)
      for (auto& x : f.physical_mut(c)) x *= m;
    f.to_spectral();
    return std::pair<double, Field>{eps, f};
  };
  DefectEstimate lin = defect_estimate({scaled(0.2), scaled(0.1), scaled(0.05), scaled(0.025)}, 4);
  double scale = 0.0;
  for (const auto& p : lin.pairings.back()) scale = std::max(scale, std::abs(p.value));
  CHECK(scale > 1e-3);
  for (const auto& p : lin.eta_estimate) CHECK(std::abs(p.value) <= 1e-12);

  CHECK_THROWS_AS(defect_estimate({{0.2, s.d}, {0.1, s.d}}, 3), std::invalid_argument);
  CHECK_THROWS_AS(defect_estimate({{0.2, s.d}, {0.1, s.d}, {0.05, make_state(make_grid(16)).d}}, 3),
                  std::invalid_argument);
}
