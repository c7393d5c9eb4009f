#pragma once

// Fourier-side primitives on the 2-torus (R / 2 pi Z)^2.
//
// Grid nodes are x_ab = (a h, b h), h = 2 pi / n, stored row-major with b
// fastest. Spectral coefficients use the "mean" normalization
//
//     f_hat(k) = (1 / n^2) sum_ab f(x_ab) exp(-i k . x_ab),
//
// so f_hat(0) is the mean of f and Parseval reads (2 pi)^2 sum_k |f_hat|^2 =
// h^2 sum_ab |f|^2. Real fields keep only the half spectrum k2 in [0, n/2];
// the other half follows from f_hat(-k) = conj(f_hat(k)).

#include <cstddef>
#include <memory>
#include <span>
#include <vector>

#include "glnematic/aligned.hpp"

namespace glnematic {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

struct GridTables;

/// Square periodic grid with its wavenumber tables. Cheap to copy: the tables
/// are immutable and shared.
class SpectralGrid {
 public:
  int n() const;
  double spacing() const;
  /// Number of stored (half-spectrum) modes, n * (n/2 + 1).
  std::size_t modes() const;
  std::size_t nodes() const;
  int half() const { return n() / 2 + 1; }

  /// Integer wavenumber of row i (k1) in {-n/2+1, ..., n/2}.
  int wavenumber(int index) const;

  /// Per-mode tables, indexed by i * half() + j.
  std::span<const double> k1() const;           // derivative wavenumber, Nyquist -> 0
  std::span<const double> k2() const;
  std::span<const double> k_squared() const;    // |k|^2 with Nyquist retained
  std::span<const double> inv_k_squared() const;  // 1 / (k1^2 + k2^2), 0 where that vanishes
  std::span<const double> dealias_keep() const;   // 1.0 iff max(|k1|,|k2|) <= n/3

  bool dealias_kept(int k1, int k2) const;

  bool operator==(const SpectralGrid& other) const;

 private:
  friend SpectralGrid make_grid(int n);
  std::shared_ptr<const GridTables> tables_;
};

/// Rejects odd n and n < 8 with std::invalid_argument.
SpectralGrid make_grid(int n);

enum class Repr : unsigned { none = 0, physical = 1, spectral = 2, both = 3 };

/// m-component real periodic field with physical samples and half-spectrum
/// coefficients. Mutating one representation through the *_mut accessors
/// marks the other one stale.
class Field {
 public:
  Field() = default;
  /// Zero field, both representations valid.
  Field(SpectralGrid grid, int components);

  const SpectralGrid& grid() const { return grid_; }
  int components() const { return components_; }
  int n() const { return grid_.n(); }
  Repr repr() const { return repr_; }
  bool has_physical() const { return (static_cast<unsigned>(repr_) & 1u) != 0; }
  bool has_spectral() const { return (static_cast<unsigned>(repr_) & 2u) != 0; }

  std::span<const double> physical(int c) const;
  std::span<const Complex> spectral(int c) const;
  std::span<double> physical_mut(int c);
  std::span<Complex> spectral_mut(int c);

  /// Fill in the missing representation (no-op when already valid).
  Field& to_spectral();
  Field& to_physical();
  /// Keep only the spectral data (e.g. after editing it in place through spectral_mut).
  void mark_spectral_only() { repr_ = Repr::spectral; }
  void mark_physical_only() { repr_ = Repr::physical; }

  double& at(int c, int a, int b);
  double at(int c, int a, int b) const;

 private:
  SpectralGrid grid_;
  int components_ = 0;
  std::size_t phys_stride_ = 0;
  std::size_t spec_stride_ = 0;
  AlignedVector<double> phys_;
  AlignedVector<Complex> spec_;
  Repr repr_ = Repr::none;
};

// Raw transforms on single components; the FFT plans are cached per n.
void fft_forward(const SpectralGrid& grid, const double* in, Complex* out);
void fft_inverse(const SpectralGrid& grid, const Complex* in, double* out);

/// Physical samples of d_axis f for one spectral component (axis 0 -> x1, 1 -> x2).
void spectral_derivative(const SpectralGrid& grid, std::span<const Complex> in, int axis,
                         std::span<double> out);

/// Returns f when both representations are valid, otherwise fills holder and returns it.
const Field& with_both(const Field& f, Field& holder);

/// Full-spectrum coefficient f_hat(k1, k2) of a real field, any k in the stored range.
Complex mode_value(const Field& f, int c, int k1, int k2);

Field forward_transform(const Field& f);
Field inverse_transform(const Field& f);

Field gradient(const Field& scalar);       // 2 components
Field laplacian(const Field& f);
Field perp_gradient(const Field& scalar);  // (-d2 g, d1 g)
Field divergence(const Field& vec);        // scalar
Field leray_project(const Field& u);
Field dealias(const Field& f);

/// Largest |k . u_hat(k)| over all modes; the spectral divergence size.
double spectral_divergence_max(const Field& u);

/// Rectangle rule h^2 sum f(x_ab) over component c.
double integrate(const Field& f, int c = 0);

/// (2 pi)^2 sum_k |f_hat(k)|^2 over the full spectrum, summed over components.
double parseval_sum(const Field& f);

double max_abs(const Field& f);

}  // namespace glnematic
