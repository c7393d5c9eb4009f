#include "glnematic/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>

#include "glnematic/simd.hpp"

namespace glnematic {

struct GridTables {
  int n = 0;
  int half = 0;
  double h = 0.0;
  std::vector<int> wave;
  AlignedVector<double> k1, k2, k_sq, inv_k_sq, keep;
};

namespace {

class FftPlans {
 public:
  explicit FftPlans(int n) : n_(n) {
    const std::size_t nodes = static_cast<std::size_t>(n) * n;
    const std::size_t modes = static_cast<std::size_t>(n) * (n / 2 + 1);
    AlignedVector<double> real(nodes);
    AlignedVector<Complex> cplx(modes);
    auto* c = reinterpret_cast<fftw_complex*>(cplx.data());
    forward_ = fftw_plan_dft_r2c_2d(n, n, real.data(), c, FFTW_ESTIMATE);
    inverse_ = fftw_plan_dft_c2r_2d(n, n, c, real.data(), FFTW_ESTIMATE);
    if (forward_ == nullptr || inverse_ == nullptr)
      throw std::runtime_error("fftw planning failed for n=" + std::to_string(n));
  }
  FftPlans(const FftPlans&) = delete;
  FftPlans& operator=(const FftPlans&) = delete;
  ~FftPlans() {
    fftw_destroy_plan(forward_);
    fftw_destroy_plan(inverse_);
  }

  void forward(const double* in, Complex* out) const {
    fftw_execute_dft_r2c(forward_, const_cast<double*>(in), reinterpret_cast<fftw_complex*>(out));
  }
  // c2r overwrites its input.
  void inverse(Complex* scratch, double* out) const {
    fftw_execute_dft_c2r(inverse_, reinterpret_cast<fftw_complex*>(scratch), out);
  }
  int n() const { return n_; }

 private:
  int n_;
  fftw_plan forward_ = nullptr;
  fftw_plan inverse_ = nullptr;
};

// FFTW's planner is not thread safe; execution on distinct arrays is.
const FftPlans& plans_for(int n) {
  static std::mutex mutex;
  static std::map<int, std::unique_ptr<FftPlans>> cache;
  std::lock_guard lock(mutex);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<FftPlans>(n);
  return *slot;
}

std::size_t round_up(std::size_t value, std::size_t multiple) {
  return (value + multiple - 1) / multiple * multiple;
}

}  // namespace

SpectralGrid make_grid(int n) {
  if (n < 8 || n % 2 != 0)
    throw std::invalid_argument("grid size must be even and >= 8, got " + std::to_string(n));
  auto t = std::make_shared<GridTables>();
  t->n = n;
  t->half = n / 2 + 1;
  t->h = kTwoPi / n;
  t->wave.resize(n);
  for (int i = 0; i < n; ++i) t->wave[i] = i <= n / 2 ? i : i - n;

  const std::size_t modes = static_cast<std::size_t>(n) * t->half;
  t->k1.resize(modes);
  t->k2.resize(modes);
  t->k_sq.resize(modes);
  t->inv_k_sq.resize(modes);
  t->keep.resize(modes);
  const int nyq = n / 2;
  const int cut = n / 3;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < t->half; ++j) {
      const std::size_t m = static_cast<std::size_t>(i) * t->half + j;
      const int w1 = t->wave[i];
      const int w2 = j;
      // Odd derivatives of the Nyquist mode are not representable for real data.
      const double d1 = w1 == nyq ? 0.0 : w1;
      const double d2 = w2 == nyq ? 0.0 : w2;
      t->k1[m] = d1;
      t->k2[m] = d2;
      t->k_sq[m] = static_cast<double>(w1) * w1 + static_cast<double>(w2) * w2;
      const double kd = d1 * d1 + d2 * d2;
      t->inv_k_sq[m] = kd > 0.0 ? 1.0 / kd : 0.0;
      t->keep[m] = (std::abs(w1) <= cut && std::abs(w2) <= cut) ? 1.0 : 0.0;
    }
  }
  SpectralGrid grid;
  grid.tables_ = std::move(t);
  plans_for(n);
  return grid;
}

int SpectralGrid::n() const { return tables_ ? tables_->n : 0; }
double SpectralGrid::spacing() const { return tables_->h; }
std::size_t SpectralGrid::modes() const {
  return static_cast<std::size_t>(tables_->n) * tables_->half;
}
std::size_t SpectralGrid::nodes() const {
  return static_cast<std::size_t>(tables_->n) * tables_->n;
}
int SpectralGrid::wavenumber(int index) const { return tables_->wave.at(index); }
std::span<const double> SpectralGrid::k1() const { return tables_->k1; }
std::span<const double> SpectralGrid::k2() const { return tables_->k2; }
std::span<const double> SpectralGrid::k_squared() const { return tables_->k_sq; }
std::span<const double> SpectralGrid::inv_k_squared() const { return tables_->inv_k_sq; }
std::span<const double> SpectralGrid::dealias_keep() const { return tables_->keep; }

bool SpectralGrid::dealias_kept(int k1, int k2) const {
  const int cut = n() / 3;
  return std::abs(k1) <= cut && std::abs(k2) <= cut;
}

bool SpectralGrid::operator==(const SpectralGrid& other) const { return n() == other.n(); }

void fft_forward(const SpectralGrid& grid, const double* in, Complex* out) {
  const auto& p = plans_for(grid.n());
  p.forward(in, out);
  simd::active_kernels().scale_complex(out, grid.modes(), 1.0 / static_cast<double>(grid.nodes()));
}

void fft_inverse(const SpectralGrid& grid, const Complex* in, double* out) {
  thread_local AlignedVector<Complex> scratch;
  scratch.assign(in, in + grid.modes());
  plans_for(grid.n()).inverse(scratch.data(), out);
}

// ---------------------------------------------------------------------------
// Field

Field::Field(SpectralGrid grid, int components)
    : grid_(std::move(grid)),
      components_(components),
      phys_stride_(round_up(grid_.nodes(), 8)),
      spec_stride_(round_up(grid_.modes(), 4)),
      phys_(phys_stride_ * components, 0.0),
      spec_(spec_stride_ * components, Complex{}),
      repr_(Repr::both) {
  if (components < 1 || components > 3)
    throw std::invalid_argument("field component count must be 1, 2 or 3");
}

std::span<const double> Field::physical(int c) const {
  if (!has_physical()) throw std::logic_error("physical representation not available");
  return {phys_.data() + c * phys_stride_, grid_.nodes()};
}
std::span<const Complex> Field::spectral(int c) const {
  if (!has_spectral()) throw std::logic_error("spectral representation not available");
  return {spec_.data() + c * spec_stride_, grid_.modes()};
}
std::span<double> Field::physical_mut(int c) {
  if (!has_physical()) throw std::logic_error("physical representation not available");
  repr_ = Repr::physical;
  return {phys_.data() + c * phys_stride_, grid_.nodes()};
}
std::span<Complex> Field::spectral_mut(int c) {
  if (!has_spectral()) throw std::logic_error("spectral representation not available");
  repr_ = Repr::spectral;
  return {spec_.data() + c * spec_stride_, grid_.modes()};
}

Field& Field::to_spectral() {
  if (has_spectral()) return *this;
  if (!has_physical()) throw std::logic_error("field has no valid representation");
  for (int c = 0; c < components_; ++c)
    fft_forward(grid_, phys_.data() + c * phys_stride_, spec_.data() + c * spec_stride_);
  repr_ = Repr::both;
  return *this;
}

Field& Field::to_physical() {
  if (has_physical()) return *this;
  if (!has_spectral()) throw std::logic_error("field has no valid representation");
  for (int c = 0; c < components_; ++c)
    fft_inverse(grid_, spec_.data() + c * spec_stride_, phys_.data() + c * phys_stride_);
  repr_ = Repr::both;
  return *this;
}

double& Field::at(int c, int a, int b) {
  if (!has_physical()) throw std::logic_error("physical representation not available");
  repr_ = Repr::physical;
  return phys_[c * phys_stride_ + static_cast<std::size_t>(a) * n() + b];
}
double Field::at(int c, int a, int b) const {
  return physical(c)[static_cast<std::size_t>(a) * n() + b];
}

void spectral_derivative(const SpectralGrid& grid, std::span<const Complex> in, int axis,
                         std::span<double> out) {
  thread_local AlignedVector<Complex> tmp;
  tmp.resize(grid.modes());
  const double* k = axis == 0 ? grid.k1().data() : grid.k2().data();
  simd::active_kernels().mul_ik(in.data(), k, tmp.data(), grid.modes());
  fft_inverse(grid, tmp.data(), out.data());
}

const Field& with_both(const Field& f, Field& holder) {
  if (f.repr() == Repr::both) return f;
  holder = f;
  holder.to_spectral();
  holder.to_physical();
  return holder;
}

Complex mode_value(const Field& f, int c, int k1, int k2) {
  const int n = f.n();
  const int half = f.grid().half();
  auto wrap = [n](int k) { return ((k % n) + n) % n; };
  auto s = f.spectral(c);
  if (k2 < 0) {
    const Complex z = s[static_cast<std::size_t>(wrap(-k1)) * half + (-k2)];
    return std::conj(z);
  }
  return s[static_cast<std::size_t>(wrap(k1)) * half + k2];
}

// ---------------------------------------------------------------------------
// Operations

namespace {

Field spectral_copy(const Field& f) {
  Field g = f;
  g.to_spectral();
  return g;
}

Field spectral_result(const SpectralGrid& grid, int components) {
  Field out(grid, components);
  out.mark_spectral_only();
  return out;
}

}  // namespace

Field forward_transform(const Field& f) { return spectral_copy(f); }

Field inverse_transform(const Field& f) {
  Field g = f;
  g.to_physical();
  return g;
}

Field gradient(const Field& scalar) {
  if (scalar.components() != 1) throw std::invalid_argument("gradient expects a scalar field");
  const Field f = spectral_copy(scalar);
  const auto& grid = f.grid();
  const auto& k = simd::active_kernels();
  Field out = spectral_result(grid, 2);
  k.mul_ik(f.spectral(0).data(), grid.k1().data(), out.spectral_mut(0).data(), grid.modes());
  k.mul_ik(f.spectral(0).data(), grid.k2().data(), out.spectral_mut(1).data(), grid.modes());
  out.to_physical();
  return out;
}

Field perp_gradient(const Field& scalar) {
  Field g = gradient(scalar);
  const auto& grid = g.grid();
  Field out = spectral_result(grid, 2);
  auto o0 = out.spectral_mut(0);
  auto o1 = out.spectral_mut(1);
  auto g0 = g.spectral(0);
  auto g1 = g.spectral(1);
  for (std::size_t m = 0; m < grid.modes(); ++m) {
    o0[m] = -g1[m];
    o1[m] = g0[m];
  }
  out.to_physical();
  return out;
}

Field laplacian(const Field& f_in) {
  const Field f = spectral_copy(f_in);
  const auto& grid = f.grid();
  const auto ksq = grid.k_squared();
  Field out = spectral_result(grid, f.components());
  for (int c = 0; c < f.components(); ++c) {
    auto src = f.spectral(c);
    auto dst = out.spectral_mut(c);
    for (std::size_t m = 0; m < grid.modes(); ++m) dst[m] = -ksq[m] * src[m];
  }
  out.to_physical();
  return out;
}

Field divergence(const Field& vec) {
  if (vec.components() != 2) throw std::invalid_argument("divergence expects 2 components");
  const Field u = spectral_copy(vec);
  const auto& grid = u.grid();
  const auto& k = simd::active_kernels();
  Field out = spectral_result(grid, 1);
  AlignedVector<Complex> tmp(grid.modes());
  k.mul_ik(u.spectral(0).data(), grid.k1().data(), out.spectral_mut(0).data(), grid.modes());
  k.mul_ik(u.spectral(1).data(), grid.k2().data(), tmp.data(), grid.modes());
  auto o = out.spectral_mut(0);
  for (std::size_t m = 0; m < grid.modes(); ++m) o[m] += tmp[m];
  out.to_physical();
  return out;
}

Field leray_project(const Field& u_in) {
  if (u_in.components() != 2) throw std::invalid_argument("leray_project expects 2 components");
  Field u = spectral_copy(u_in);
  const auto& grid = u.grid();
  auto u0 = u.spectral_mut(0);
  auto u1 = u.spectral_mut(1);
  simd::active_kernels().leray(u0.data(), u1.data(), grid.k1().data(), grid.k2().data(),
                               grid.inv_k_squared().data(), grid.modes());
  u.to_physical();
  return u;
}

Field dealias(const Field& f_in) {
  Field f = spectral_copy(f_in);
  const auto& grid = f.grid();
  for (int c = 0; c < f.components(); ++c)
    simd::active_kernels().apply_mask(f.spectral_mut(c).data(), grid.dealias_keep().data(),
                                      grid.modes());
  f.to_physical();
  return f;
}

double spectral_divergence_max(const Field& vec) {
  const Field u = spectral_copy(vec);
  const auto& grid = u.grid();
  auto k1 = grid.k1();
  auto k2 = grid.k2();
  auto u0 = u.spectral(0);
  auto u1 = u.spectral(1);
  double worst = 0.0;
  for (std::size_t m = 0; m < grid.modes(); ++m)
    worst = std::max(worst, std::abs(k1[m] * u0[m] + k2[m] * u1[m]));
  return worst;
}

double integrate(const Field& f_in, int c) {
  const Field* f = &f_in;
  Field copy;
  if (!f_in.has_physical()) {
    copy = inverse_transform(f_in);
    f = &copy;
  }
  double sum = 0.0;
  for (double x : f->physical(c)) sum += x;
  const double h = f->grid().spacing();
  return h * h * sum;
}

double parseval_sum(const Field& f_in) {
  const Field f = spectral_copy(f_in);
  const int n = f.n();
  const int half = f.grid().half();
  double sum = 0.0;
  for (int c = 0; c < f.components(); ++c) {
    auto s = f.spectral(c);
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < half; ++j) {
        const double weight = (j == 0 || j == n / 2) ? 1.0 : 2.0;
        sum += weight * std::norm(s[static_cast<std::size_t>(i) * half + j]);
      }
    }
  }
  return kTwoPi * kTwoPi * sum;
}

double max_abs(const Field& f_in) {
  Field f = f_in;
  f.to_physical();
  double worst = 0.0;
  for (int c = 0; c < f.components(); ++c)
    for (double x : f.physical(c)) worst = std::max(worst, std::abs(x));
  return worst;
}

}  // namespace glnematic
