#include "glnematic/concentration.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace glnematic {

namespace {

constexpr double kPi = kTwoPi / 2;
// relative slack on squared grid distances at the ball boundary
constexpr double kBoundarySlack = 1e-12;

double wrap_cells(double delta, int n) {
  double x = std::fmod(delta, static_cast<double>(n));
  if (x < -0.5 * n) x += n;
  if (x >= 0.5 * n) x -= n;
  return x;
}

void check_radius(double radius) {
  if (!(radius > 0.0 && radius < kPi))
    throw std::invalid_argument("ball radius must lie in (0, pi)");
}

struct DisjointSets {
  explicit DisjointSets(std::size_t count) : parent(count) {
    std::iota(parent.begin(), parent.end(), std::size_t{0});
  }
  std::size_t find(std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent[b] = a;
  }
  std::vector<std::size_t> parent;
};

}  // namespace

double torus_distance(double ax, double ay, double bx, double by) {
  auto axis = [](double a, double b) {
    double d = std::fmod(std::abs(a - b), kTwoPi);
    return std::min(d, kTwoPi - d);
  };
  return std::hypot(axis(ax, bx), axis(ay, by));
}

Field energy_density(const Field& d_in, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  Field dh;
  const Field& d = with_both(d_in, dh);
  const auto& grid = d.grid();
  const std::size_t nodes = grid.nodes();
  AlignedVector<double> g(6 * nodes);
  for (int c = 0; c < 3; ++c)
    for (int j = 0; j < 2; ++j)
      spectral_derivative(grid, d.spectral(c), j, {g.data() + (2 * c + j) * nodes, nodes});
  Field out(grid, 1);
  auto o = out.physical_mut(0);
  auto d0 = d.physical(0), d1 = d.physical(1), d2 = d.physical(2);
  const double w = 1.0 / (4.0 * epsilon * epsilon);
  for (std::size_t q = 0; q < nodes; ++q) {
    double g2 = 0.0;
    for (int k = 0; k < 6; ++k) g2 += g[k * nodes + q] * g[k * nodes + q];
    const double defect = 1.0 - (d0[q] * d0[q] + d1[q] * d1[q] + d2[q] * d2[q]);
    o[q] = 0.5 * g2 + w * defect * defect;
  }
  return out;
}

double local_energy(const Field& d, double epsilon, const BallSpec& ball) {
  check_radius(ball.radius);
  const Field rho = energy_density(d, epsilon);
  const int n = rho.n();
  const double h = rho.grid().spacing();
  const double r_cells = ball.radius / h;
  const double limit = r_cells * r_cells * (1.0 + kBoundarySlack);
  const double u1 = ball.x1 / h;
  const double u2 = ball.x2 / h;
  auto p = rho.physical(0);
  double sum = 0.0;
  for (int a = 0; a < n; ++a) {
    const double da = wrap_cells(a - u1, n);
    for (int b = 0; b < n; ++b) {
      const double db = wrap_cells(b - u2, n);
      if (da * da + db * db <= limit) sum += p[static_cast<std::size_t>(a) * n + b];
    }
  }
  return h * h * sum;
}

long count_bound(double total_energy, double eps0_sq) {
  if (!(eps0_sq > 0.0)) throw std::invalid_argument("eps0_sq must be positive");
  if (!(total_energy > 0.0)) return 0;
  return static_cast<long>(std::ceil(total_energy / eps0_sq));
}

namespace {

std::vector<double> ball_energies_from_density(const Field& rho, double radius) {
  const auto& grid = rho.grid();
  const int n = grid.n();
  const double h = grid.spacing();
  const double r_cells = radius / h;
  const double limit = r_cells * r_cells * (1.0 + kBoundarySlack);

  Field indicator(grid, 1);
  {
    auto ind = indicator.physical_mut(0);
    for (int a = 0; a < n; ++a) {
      const int da = std::min(a, n - a);
      for (int b = 0; b < n; ++b) {
        const int db = std::min(b, n - b);
        ind[static_cast<std::size_t>(a) * n + b] =
            static_cast<double>(da * da + db * db) <= limit ? 1.0 : 0.0;
      }
    }
  }
  indicator.to_spectral();
  Field r = rho;
  r.to_spectral();
  Field conv(grid, 1);
  auto c = conv.spectral_mut(0);
  auto rs = r.spectral(0), is = indicator.spectral(0);
  // h^2 sum_y rho(y) I(x - y) = (2 pi)^2 * IFFT(rho_hat I_hat) under the mean normalization.
  for (std::size_t m = 0; m < grid.modes(); ++m) c[m] = kTwoPi * kTwoPi * rs[m] * is[m];
  conv.to_physical();
  auto p = conv.physical(0);
  return {p.begin(), p.end()};
}

std::vector<std::pair<int, int>> ball_offsets(double r_cells) {
  const double limit = r_cells * r_cells * (1.0 + kBoundarySlack);
  const int reach = static_cast<int>(std::floor(r_cells)) + 1;
  std::vector<std::pair<int, int>> out;
  for (int a = -reach; a <= reach; ++a)
    for (int b = -reach; b <= reach; ++b)
      if (static_cast<double>(a * a + b * b) <= limit) out.emplace_back(a, b);
  return out;
}

}  // namespace

std::vector<double> ball_energies(const Field& d, double epsilon, double radius) {
  check_radius(radius);
  return ball_energies_from_density(energy_density(d, epsilon), radius);
}

ConcentrationReport detect_sigma(const Field& d, double epsilon, double radius, double eps0_sq,
                                 double t) {
  check_radius(radius);
  if (!(eps0_sq > 0.0)) throw std::invalid_argument("eps0_sq must be positive");
  const Field rho = energy_density(d, epsilon);
  const auto& grid = rho.grid();
  const int n = grid.n();
  const std::size_t nodes = grid.nodes();
  const double h = grid.spacing();
  const double r_cells = radius / h;
  const double limit = r_cells * r_cells * (1.0 + kBoundarySlack);
  const auto density = rho.physical(0);

  ConcentrationReport report;
  report.t = t;
  report.epsilon = epsilon;
  report.eps0_sq = eps0_sq;
  report.radius = radius;
  double total = 0.0;
  for (double x : density) total += x;
  report.total_energy = h * h * total;
  report.k_bound = count_bound(report.total_energy, eps0_sq);

  const std::vector<double> ball = ball_energies_from_density(rho, radius);
  std::vector<char> marked(nodes, 0);
  for (std::size_t q = 0; q < nodes; ++q) marked[q] = ball[q] > eps0_sq ? 1 : 0;

  // Single linkage over marked nodes within one radius (periodic).
  DisjointSets sets(nodes);
  const auto offsets = ball_offsets(r_cells);
  auto wrap = [n](int x) { return ((x % n) + n) % n; };
  for (int a = 0; a < n; ++a) {
    for (int b = 0; b < n; ++b) {
      const std::size_t q = static_cast<std::size_t>(a) * n + b;
      if (!marked[q]) continue;
      for (const auto& [oa, ob] : offsets) {
        const std::size_t p = static_cast<std::size_t>(wrap(a + oa)) * n + wrap(b + ob);
        if (marked[p]) sets.unite(q, p);
      }
    }
  }

  struct Cluster {
    std::size_t root;
    std::size_t peak;
    double sx = 0, sy = 0, cx = 0, cy = 0;
    int members = 0;
    double credited = 0.0;
    bool alive = true;
  };
  std::vector<Cluster> clusters;
  std::vector<int> cluster_of(nodes, -1);
  for (std::size_t q = 0; q < nodes; ++q) {
    if (!marked[q]) continue;
    const std::size_t root = sets.find(q);
    if (cluster_of[root] < 0) {
      cluster_of[root] = static_cast<int>(clusters.size());
      clusters.push_back({root, q});
    }
    Cluster& c = clusters[cluster_of[root]];
    if (ball[q] > ball[c.peak]) c.peak = q;
    const double w = ball[q];
    const double ax = static_cast<double>(q / n) * h;
    const double ay = static_cast<double>(q % n) * h;
    c.sx += w * std::sin(ax);
    c.cx += w * std::cos(ax);
    c.sy += w * std::sin(ay);
    c.cy += w * std::cos(ay);
    ++c.members;
  }

  // Credit each node to the nearest surviving peak within one radius; drop clusters
  // that end up with no more than eps0_sq and repeat.
  bool changed = true;
  while (changed) {
    changed = false;
    for (auto& c : clusters) c.credited = 0.0;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        int best = -1;
        double best_d2 = 0.0;
        for (std::size_t ci = 0; ci < clusters.size(); ++ci) {
          const Cluster& c = clusters[ci];
          if (!c.alive) continue;
          const int pa = static_cast<int>(c.peak / n);
          const int pb = static_cast<int>(c.peak % n);
          int da = std::abs(a - pa), db = std::abs(b - pb);
          da = std::min(da, n - da);
          db = std::min(db, n - db);
          const double d2 = static_cast<double>(da * da + db * db);
          if (d2 > limit) continue;
          if (best < 0 || d2 < best_d2) {
            best = static_cast<int>(ci);
            best_d2 = d2;
          }
        }
        if (best >= 0) clusters[best].credited += density[static_cast<std::size_t>(a) * n + b];
      }
    }
    for (auto& c : clusters) {
      if (c.alive && !(h * h * c.credited > eps0_sq)) {
        c.alive = false;
        changed = true;
      }
    }
  }

  for (const auto& c : clusters) {
    if (!c.alive) continue;
    ConcentrationPoint p;
    auto angle = [](double s, double co) {
      double x = std::atan2(s, co);
      return x < 0 ? x + kTwoPi : x;
    };
    p.x1 = angle(c.sx, c.cx);
    p.x2 = angle(c.sy, c.cy);
    p.peak_energy = ball[c.peak];
    p.attributed_energy = h * h * c.credited;
    p.nodes = c.members;
    report.points.push_back(p);
  }
  report.count = static_cast<int>(report.points.size());
  report.passed = report.count <= report.k_bound;
  return report;
}

std::vector<DefectPairing> stress_pairings(const Field& d_in, int k_max) {
  Field dh;
  const Field& d = with_both(d_in, dh);
  const auto& grid = d.grid();
  const std::size_t nodes = grid.nodes();
  AlignedVector<double> g(6 * nodes);
  for (int c = 0; c < 3; ++c)
    for (int j = 0; j < 2; ++j)
      spectral_derivative(grid, d.spectral(c), j, {g.data() + (2 * c + j) * nodes, nodes});
  Field s[2] = {Field(grid, 2), Field(grid, 2)};  // s[i] holds S_i0, S_i1
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      auto out = s[i].physical_mut(j);
      for (std::size_t q = 0; q < nodes; ++q) {
        double acc = 0.0;
        for (int c = 0; c < 3; ++c) acc += g[(2 * c + i) * nodes + q] * g[(2 * c + j) * nodes + q];
        out[q] = acc;
      }
    }
    s[i].to_spectral();
  }
  const Complex I{0.0, 1.0};
  std::vector<DefectPairing> out;
  for (int k1 = -k_max; k1 <= k_max; ++k1) {
    for (int k2 = -k_max; k2 <= k_max; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      const Complex c[2] = {-I * static_cast<double>(k2), I * static_cast<double>(k1)};
      const double kk[2] = {static_cast<double>(k1), static_cast<double>(k2)};
      Complex sum{};
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) sum += c[i] * I * kk[j] * std::conj(mode_value(s[i], j, k1, k2));
      out.push_back({k1, k2, kTwoPi * kTwoPi * sum});
    }
  }
  return out;
}

DefectEstimate defect_estimate(const std::vector<std::pair<double, Field>>& snapshots, int k_max,
                               double t) {
  if (snapshots.size() < 3) throw std::invalid_argument("defect estimate needs >= 3 snapshots");
  const int n = snapshots.front().second.n();
  for (const auto& [eps, f] : snapshots) {
    if (f.n() != n) throw std::invalid_argument("defect estimate snapshots must share one grid");
    if (!(eps > 0.0)) throw std::invalid_argument("epsilon must be positive");
  }
  DefectEstimate est;
  est.t = t;
  est.test_k_max = k_max;
  for (const auto& [eps, f] : snapshots) {
    est.epsilons.push_back(eps);
    est.pairings.push_back(stress_pairings(f, k_max));
  }
  std::vector<std::size_t> order(snapshots.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return est.epsilons[a] > est.epsilons[b]; });
  const std::size_t c1 = order[0], c2 = order[1], fine = order.back();
  const double e1 = est.epsilons[c1], e2 = est.epsilons[c2], ef = est.epsilons[fine];
  for (std::size_t k = 0; k < est.pairings[fine].size(); ++k) {
    const Complex p1 = est.pairings[c1][k].value;
    const Complex p2 = est.pairings[c2][k].value;
    const Complex line = p1 + (ef - e1) * (p2 - p1) / (e2 - e1);
    est.eta_estimate.push_back(
        {est.pairings[fine][k].k1, est.pairings[fine][k].k2, est.pairings[fine][k].value - line});
  }
  return est;
}

}  // namespace glnematic
