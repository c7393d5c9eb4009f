#pragma once

// Reference computations that avoid the library's transforms.

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "glnematic/spectral.hpp"

namespace oracle {

using glnematic::Complex;
using glnematic::Field;
using glnematic::SpectralGrid;
constexpr double kPi = glnematic::kTwoPi / 2;

// Direct O(n^4) DFT with the mean normalization; k1, k2 in [-n/2+1, n/2].
inline Complex dft_mode(const std::vector<double>& f, int n, int k1, int k2) {
  const double h = 2 * kPi / n;
  Complex s{};
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      s += f[a * n + b] * std::polar(1.0, -(k1 * a + k2 * b) * h);
  return s / static_cast<double>(n * n);
}

// Real trigonometric polynomial sum_k (c_k cos k.x + s_k sin k.x) over a half plane of modes.
struct TrigPoly {
  struct Term {
    int k1, k2;
    double c, s;
  };
  std::vector<Term> terms;
  double mean = 0.0;

  double operator()(double x, double y) const {
    double v = mean;
    for (const auto& t : terms) {
      const double ph = t.k1 * x + t.k2 * y;
      v += t.c * std::cos(ph) + t.s * std::sin(ph);
    }
    return v;
  }
  // derivative along axis (0 -> x, 1 -> y)
  double d(int axis, double x, double y) const {
    double v = 0.0;
    for (const auto& t : terms) {
      const double ph = t.k1 * x + t.k2 * y;
      const double k = axis == 0 ? t.k1 : t.k2;
      v += k * (-t.c * std::sin(ph) + t.s * std::cos(ph));
    }
    return v;
  }
  double lap(double x, double y) const {
    double v = 0.0;
    for (const auto& t : terms) {
      const double ph = t.k1 * x + t.k2 * y;
      v -= (t.k1 * t.k1 + t.k2 * t.k2) * (t.c * std::cos(ph) + t.s * std::sin(ph));
    }
    return v;
  }
};

inline TrigPoly random_poly(std::mt19937_64& rng, int band, double amplitude = 1.0,
                            double mean = 0.0) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  TrigPoly p;
  p.mean = mean;
  for (int k1 = 0; k1 <= band; ++k1)
    for (int k2 = -band; k2 <= band; ++k2) {
      if (k1 == 0 && k2 <= 0) continue;
      p.terms.push_back({k1, k2, amplitude * u(rng), amplitude * u(rng)});
    }
  return p;
}

// Sample polynomials onto a field, one per component.
inline Field sample(const SpectralGrid& grid, const std::vector<TrigPoly>& comps) {
  Field f(grid, static_cast<int>(comps.size()));
  const int n = grid.n();
  const double h = grid.spacing();
  for (std::size_t c = 0; c < comps.size(); ++c) {
    auto p = f.physical_mut(static_cast<int>(c));
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) p[a * n + b] = comps[c](a * h, b * h);
  }
  f.to_spectral();
  return f;
}

// Random physical samples, white noise with zero mean removed optional.
inline Field white_noise(const SpectralGrid& grid, int comps, std::mt19937_64& rng) {
  std::normal_distribution<double> g(0.0, 1.0);
  Field f(grid, comps);
  for (int c = 0; c < comps; ++c)
    for (auto& x : f.physical_mut(c)) x = g(rng);
  f.to_spectral();
  return f;
}

inline double max_diff(const Field& a, const Field& b) {
  Field ah = a, bh = b;
  ah.to_physical();
  bh.to_physical();
  double e = 0.0;
  for (int c = 0; c < a.components(); ++c) {
    auto x = ah.physical(c), y = bh.physical(c);
    for (std::size_t q = 0; q < x.size(); ++q) e = std::max(e, std::abs(x[q] - y[q]));
  }
  return e;
}

inline double max_abs_phys(const Field& a) {
  Field ah = a;
  ah.to_physical();
  double e = 0.0;
  for (int c = 0; c < a.components(); ++c)
    for (double x : ah.physical(c)) e = std::max(e, std::abs(x));
  return e;
}

}  // namespace oracle
