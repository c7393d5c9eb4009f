#include <cmath>
#include <random>
#include <set>
#include <stdexcept>

#include "glnematic/concentration.hpp"
#include "glnematic/io.hpp"

namespace glnematic {

namespace {

constexpr double kPi = kTwoPi / 2;

class ParamReader {
 public:
  ParamReader(const std::string& generator, const GeneratorParams& params)
      : generator_(generator), params_(params) {}

  double get(const std::string& key, double fallback) {
    used_.insert(key);
    auto it = params_.find(key);
    if (it == params_.end()) return fallback;
    if (!std::isfinite(it->second))
      throw std::invalid_argument(generator_ + ": parameter '" + key + "' is not finite");
    return it->second;
  }

  void finish() const {
    for (const auto& [key, value] : params_)
      if (!used_.count(key))
        throw std::invalid_argument(generator_ + ": unknown parameter '" + key + "'");
  }

 private:
  std::string generator_;
  const GeneratorParams& params_;
  std::set<std::string> used_;
};

double wrap_angle(double x) {
  x = std::fmod(x + kPi, kTwoPi);
  if (x < 0) x += kTwoPi;
  return x - kPi;
}

void finalize(SimState& s) {
  s.v.to_spectral();
  s.d.to_spectral();
}

SimState constant(const SpectralGrid& grid, ParamReader& p) {
  const double e[3] = {p.get("d1", 0.0), p.get("d2", 0.0), p.get("d3", 1.0)};
  const double norm = std::sqrt(e[0] * e[0] + e[1] * e[1] + e[2] * e[2]);
  if (!(norm > 0.0)) throw std::invalid_argument("constant: director must be nonzero");
  SimState s = make_state(grid);
  for (int c = 0; c < 3; ++c) {
    auto d = s.d.physical_mut(c);
    for (auto& x : d) x = e[c] / norm;
  }
  finalize(s);
  return s;
}

SimState smooth_wave(const SpectralGrid& grid, ParamReader& p) {
  const double beta0 = p.get("beta0", 0.8);
  const double a = p.get("a", 0.6);
  const double b = p.get("b", 0.5);
  const double amplitude = p.get("amplitude", 0.5);
  const int n = grid.n();
  const double h = grid.spacing();
  SimState s = make_state(grid);
  auto d0 = s.d.physical_mut(0), d1 = s.d.physical_mut(1), d2 = s.d.physical_mut(2);
  auto v0 = s.v.physical_mut(0), v1 = s.v.physical_mut(1);
  for (int i = 0; i < n; ++i) {
    const double x = i * h;
    for (int j = 0; j < n; ++j) {
      const double y = j * h;
      const std::size_t q = static_cast<std::size_t>(i) * n + j;
      const double beta = beta0 + a * std::sin(x) * std::sin(y);
      const double gamma = b * (std::sin(x) + std::cos(y));
      d0[q] = std::sin(beta) * std::cos(gamma);
      d1[q] = std::sin(beta) * std::sin(gamma);
      d2[q] = std::cos(beta);
      v0[q] = amplitude * std::sin(x) * std::cos(y);
      v1[q] = -amplitude * std::cos(x) * std::sin(y);
    }
  }
  s.v = leray_project(s.v);
  s.v.to_physical();
  finalize(s);
  return s;
}

SimState defect_pair(const SpectralGrid& grid, ParamReader& p) {
  const double sigma = p.get("sigma", 0.5);
  const double cx[2] = {p.get("x1", kPi / 2), p.get("x2", 3 * kPi / 2)};
  const double cy[2] = {p.get("y1", kPi), p.get("y2", kPi)};
  const int winding[2] = {1, -1};
  if (!(sigma > 0.0 && sigma < kPi / 2))
    throw std::invalid_argument("defect-pair: sigma must lie in (0, pi/2)");
  if (torus_distance(cx[0], cy[0], cx[1], cy[1]) < 2 * sigma)
    throw std::invalid_argument("defect-pair: disks overlap");
  const int n = grid.n();
  const double h = grid.spacing();
  SimState s = make_state(grid);
  auto d0 = s.d.physical_mut(0), d1 = s.d.physical_mut(1), d2 = s.d.physical_mut(2);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const std::size_t q = static_cast<std::size_t>(i) * n + j;
      d0[q] = 0.0;
      d1[q] = 0.0;
      d2[q] = 1.0;
      for (int k = 0; k < 2; ++k) {
        const double dx = wrap_angle(i * h - cx[k]);
        const double dy = wrap_angle(j * h - cy[k]);
        const double rho = std::hypot(dx, dy);
        if (rho >= sigma) continue;
        const double theta = std::atan2(dy, dx);
        const double polar = kPi * (1.0 - smooth_step(rho / sigma));
        d0[q] = std::sin(polar) * std::cos(winding[k] * theta);
        d1[q] = std::sin(polar) * std::sin(winding[k] * theta);
        d2[q] = std::cos(polar);
      }
    }
  }
  finalize(s);
  return s;
}

// Sum of random Fourier modes with |k|_inf <= band, amplitude decaying like 1/(1+|k|^2).
AlignedVector<double> random_band(const SpectralGrid& grid, int band, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  const int n = grid.n();
  const double h = grid.spacing();
  AlignedVector<double> out(grid.nodes(), 0.0);
  for (int k1 = 0; k1 <= band; ++k1) {
    for (int k2 = -band; k2 <= band; ++k2) {
      if (k1 == 0 && k2 <= 0) continue;
      const double decay = 1.0 / (1.0 + k1 * k1 + k2 * k2);
      const double ca = normal(rng) * decay;
      const double sa = normal(rng) * decay;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const double phase = (k1 * i + k2 * j) * h;
          out[static_cast<std::size_t>(i) * n + j] += ca * std::cos(phase) + sa * std::sin(phase);
        }
    }
  }
  return out;
}

double max_abs_of(const AlignedVector<double>& x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

SimState random_smooth(const SpectralGrid& grid, ParamReader& p, std::uint64_t seed) {
  const double band_value = p.get("band", 3);
  const double v_amp = p.get("v_amplitude", 0.5);
  const double d_amp = p.get("d_amplitude", 0.4);
  const int band = static_cast<int>(band_value);
  if (band != band_value || band < 1 || band > grid.n() / 3)
    throw std::invalid_argument("random-smooth: band must be an integer in [1, n/3]");
  if (!(d_amp >= 0.0 && d_amp < 0.5))
    throw std::invalid_argument("random-smooth: d_amplitude must lie in [0, 0.5)");
  if (!(v_amp >= 0.0)) throw std::invalid_argument("random-smooth: v_amplitude must be >= 0");

  std::mt19937_64 rng(seed);
  SimState s = make_state(grid);

  Field g(grid, 1);
  {
    auto r = random_band(grid, band, rng);
    auto gp = g.physical_mut(0);
    std::copy(r.begin(), r.end(), gp.begin());
  }
  Field v = leray_project(perp_gradient(g));
  v.to_physical();
  const double vmax = max_abs(v);
  for (int c = 0; c < 2; ++c) {
    auto src = v.physical(c);
    auto dst = s.v.physical_mut(c);
    for (std::size_t q = 0; q < dst.size(); ++q) dst[q] = vmax > 0 ? v_amp * src[q] / vmax : 0.0;
  }
  s.v = leray_project(s.v);
  s.v.to_physical();

  AlignedVector<double> pert[3];
  for (auto& x : pert) {
    x = random_band(grid, band, rng);
    const double m = max_abs_of(x);
    for (auto& y : x) y = m > 0 ? y / m : 0.0;
  }
  auto d0 = s.d.physical_mut(0), d1 = s.d.physical_mut(1), d2 = s.d.physical_mut(2);
  for (std::size_t q = 0; q < grid.nodes(); ++q) {
    const double a = d_amp * pert[0][q];
    const double b = d_amp * pert[1][q];
    const double c = 1.0 + d_amp * pert[2][q];
    const double norm = std::sqrt(a * a + b * b + c * c);
    d0[q] = a / norm;
    d1[q] = b / norm;
    d2[q] = c / norm;
  }
  finalize(s);
  return s;
}

}  // namespace

double smooth_step(double s) {
  auto psi = [](double x) { return x > 0.0 ? std::exp(-1.0 / x) : 0.0; };
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  const double a = psi(s);
  return a / (a + psi(1.0 - s));
}

const std::vector<std::string>& generator_names() {
  static const std::vector<std::string> names = {"constant", "smooth-wave", "defect-pair",
                                                 "random-smooth"};
  return names;
}

SimState generate_initial(const std::string& name, const GeneratorParams& params,
                          const SpectralGrid& grid, std::uint64_t seed) {
  ParamReader reader(name, params);
  SimState s;
  if (name == "constant") {
    s = constant(grid, reader);
  } else if (name == "smooth-wave") {
    s = smooth_wave(grid, reader);
  } else if (name == "defect-pair") {
    s = defect_pair(grid, reader);
  } else if (name == "random-smooth") {
    s = random_smooth(grid, reader, seed);
  } else {
    throw std::invalid_argument("unknown generator '" + name + "'");
  }
  reader.finish();
  return s;
}

}  // namespace glnematic
