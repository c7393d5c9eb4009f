#include "glnematic/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace glnematic {

namespace {

using Buffer = AlignedVector<double>;

}  // namespace

EnergySample energy(const SimState& state, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  Field vh, dh;
  const Field& v = with_both(state.v, vh);
  const Field& d = with_both(state.d, dh);
  const auto& grid = d.grid();
  const std::size_t nodes = grid.nodes();
  const double h2 = grid.spacing() * grid.spacing();
  const double inv_eps2 = 1.0 / (epsilon * epsilon);

  Buffer gv(4 * nodes), gd(6 * nodes), lap(3 * nodes);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      spectral_derivative(grid, v.spectral(i), j, {gv.data() + (2 * i + j) * nodes, nodes});
  for (int c = 0; c < 3; ++c)
    for (int j = 0; j < 2; ++j)
      spectral_derivative(grid, d.spectral(c), j, {gd.data() + (2 * c + j) * nodes, nodes});
  {
    AlignedVector<Complex> tmp(grid.modes());
    const auto ksq = grid.k_squared();
    for (int c = 0; c < 3; ++c) {
      auto s = d.spectral(c);
      for (std::size_t m = 0; m < grid.modes(); ++m) tmp[m] = -ksq[m] * s[m];
      fft_inverse(grid, tmp.data(), lap.data() + c * nodes);
    }
  }

  auto v0 = v.physical(0), v1 = v.physical(1);
  auto d0 = d.physical(0), d1 = d.physical(1), d2 = d.physical(2);
  double kin = 0, dir = 0, pen = 0, dv = 0, dd = 0, l4 = 0, maxd = 0;
  for (std::size_t i = 0; i < nodes; ++i) {
    const double vsq = v0[i] * v0[i] + v1[i] * v1[i];
    kin += vsq;
    l4 += vsq * vsq;
    double g2 = 0.0;
    for (int q = 0; q < 6; ++q) g2 += gd[q * nodes + i] * gd[q * nodes + i];
    dir += g2;
    double gv2 = 0.0;
    for (int q = 0; q < 4; ++q) gv2 += gv[q * nodes + i] * gv[q * nodes + i];
    dv += gv2;
    const double dsq = d0[i] * d0[i] + d1[i] * d1[i] + d2[i] * d2[i];
    const double defect = 1.0 - dsq;
    pen += defect * defect;
    maxd = std::max(maxd, std::sqrt(dsq));
    const double s = inv_eps2 * defect;
    const double t0 = lap[i] + s * d0[i];
    const double t1 = lap[nodes + i] + s * d1[i];
    const double t2 = lap[2 * nodes + i] + s * d2[i];
    dd += t0 * t0 + t1 * t1 + t2 * t2;
  }

  EnergySample e;
  e.t = state.t;
  e.kinetic = 0.5 * h2 * kin;
  e.dirichlet = 0.5 * h2 * dir;
  e.penalty = 0.25 * inv_eps2 * h2 * pen;
  e.total = e.kinetic + e.dirichlet + e.penalty;
  e.diss_v = h2 * dv;
  e.diss_d = h2 * dd;
  e.l4_v = std::pow(h2 * l4, 0.25);
  e.max_d = maxd;
  e.penalty_l2 = std::sqrt(h2 * pen);
  return e;
}

EnergyAudit energy_audit(const std::vector<EnergySample>& traj, DissipationRule rule) {
  if (traj.size() < 2) throw std::invalid_argument("energy audit needs at least two samples");
  EnergyAudit a;
  const double e0 = 2.0 * traj.front().total;
  double dissipated = 0.0;
  for (std::size_t m = 0; m + 1 < traj.size(); ++m) {
    const auto& p = traj[m];
    const auto& q = traj[m + 1];
    const double dt = q.t - p.t;
    const double rate_q = q.diss_v + q.diss_d;
    const double rate_p = p.diss_v + p.diss_d;
    const double rate = rule == DissipationRule::right_endpoint ? rate_q : 0.5 * (rate_p + rate_q);
    dissipated += 2.0 * dt * rate;

    const double increase = 2.0 * (q.total - p.total);
    const double rel_inc = e0 > 0.0 ? increase / e0 : (increase > 0.0 ? increase : 0.0);
    if (m == 0 || rel_inc > a.worst_step_increase) {
      a.worst_step_increase = rel_inc;
      a.worst_step_index = m + 1;
    }
    const double lhs = 2.0 * q.total + dissipated;
    const double excess = e0 > 0.0 ? lhs / e0 - 1.0 : lhs;
    if (m == 0 || excess > a.worst_cumulative_excess) {
      a.worst_cumulative_excess = excess;
      a.worst_cumulative_index = m + 1;
    }
  }
  a.dissipated = dissipated;
  a.monotone = a.worst_step_increase <= 1e-8;
  a.cumulative = a.worst_cumulative_excess <= 1e-6;
  a.passed = a.monotone && a.cumulative;
  return a;
}

double penalty_scaling_fit(const std::vector<std::pair<double, double>>& runs) {
  std::set<double> distinct;
  for (const auto& [eps, value] : runs) {
    if (!(eps > 0.0) || !(value > 0.0))
      throw std::invalid_argument("penalty scaling fit needs positive epsilon and values");
    distinct.insert(eps);
  }
  if (distinct.size() < 3) throw std::invalid_argument("penalty scaling fit needs >= 3 distinct epsilons");
  const double count = static_cast<double>(runs.size());
  double mx = 0, my = 0;
  for (const auto& [eps, value] : runs) {
    mx += std::log(eps);
    my += std::log(value);
  }
  mx /= count;
  my /= count;
  double sxy = 0, sxx = 0;
  for (const auto& [eps, value] : runs) {
    const double x = std::log(eps) - mx;
    sxy += x * (std::log(value) - my);
    sxx += x * x;
  }
  return sxy / sxx;
}

PolarSample polar_sample(const Field& d_in) {
  Field dh;
  const Field& d = with_both(d_in, dh);
  const auto& grid = d.grid();
  const std::size_t nodes = grid.nodes();
  const double h2 = grid.spacing() * grid.spacing();
  auto d0 = d.physical(0), d1 = d.physical(1), d2 = d.physical(2);

  std::size_t inside = 0;
  for (std::size_t i = 0; i < nodes; ++i)
    if (std::sqrt(d0[i] * d0[i] + d1[i] * d1[i] + d2[i] * d2[i]) >= 0.5) ++inside;
  PolarSample out;
  out.region_fraction = static_cast<double>(inside) / static_cast<double>(nodes);
  if (inside == 0) return out;

  // grad rho = psi . grad d, grad psi = (grad d - psi (x) grad rho) / rho
  Buffer g(6 * nodes);
  for (int c = 0; c < 3; ++c)
    for (int j = 0; j < 2; ++j)
      spectral_derivative(grid, d.spectral(c), j, {g.data() + (2 * c + j) * nodes, nodes});

  double rho_sum = 0.0, psi_sum = 0.0;
  for (std::size_t i = 0; i < nodes; ++i) {
    const double dv[3] = {d0[i], d1[i], d2[i]};
    const double norm = std::sqrt(dv[0] * dv[0] + dv[1] * dv[1] + dv[2] * dv[2]);
    if (norm < 0.5) continue;
    double q = 0.0;
    for (int j = 0; j < 2; ++j) {
      double gr = 0.0;
      for (int c = 0; c < 3; ++c) gr += dv[c] * g[(2 * c + j) * nodes + i];
      gr /= norm;
      rho_sum += gr * gr;
      for (int c = 0; c < 3; ++c) {
        const double gp = (g[(2 * c + j) * nodes + i] - dv[c] / norm * gr) / norm;
        q += gp * gp;
      }
    }
    psi_sum += q * q;
  }
  out.grad_rho_l2sq = h2 * rho_sum;
  out.grad_psi_l4 = std::pow(h2 * psi_sum, 0.25);
  return out;
}

ResidualTable momentum_weak_residual(const SimState& prev, const SimState& curr, int k_max) {
  Field vh, dh, ph;
  const Field& v = with_both(curr.v, vh);
  const Field& d = with_both(curr.d, dh);
  const Field& vp = with_both(prev.v, ph);
  const auto& grid = v.grid();
  const std::size_t nodes = grid.nodes();
  const double dt = curr.t - prev.t;

  // Time derivative and the 2x2 flux Y_ij = -v_i v_j + d_j v_i - S_ij, all transformed.
  Field dvdt(grid, 2);
  for (int i = 0; i < 2; ++i) {
    auto out = dvdt.physical_mut(i);
    auto a = v.physical(i), b = vp.physical(i);
    for (std::size_t q = 0; q < nodes; ++q) out[q] = dt > 0.0 ? (a[q] - b[q]) / dt : 0.0;
  }
  dvdt.to_spectral();

  Buffer gv(4 * nodes), gd(6 * nodes);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      spectral_derivative(grid, v.spectral(i), j, {gv.data() + (2 * i + j) * nodes, nodes});
  for (int c = 0; c < 3; ++c)
    for (int j = 0; j < 2; ++j)
      spectral_derivative(grid, d.spectral(c), j, {gd.data() + (2 * c + j) * nodes, nodes});

  Field flux_row0(grid, 2), flux_row1(grid, 2);
  Field* rows[2] = {&flux_row0, &flux_row1};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      auto out = rows[i]->physical_mut(j);
      auto vi = v.physical(i), vj = v.physical(j);
      for (std::size_t q = 0; q < nodes; ++q) {
        double s = 0.0;
        for (int c = 0; c < 3; ++c) s += gd[(2 * c + i) * nodes + q] * gd[(2 * c + j) * nodes + q];
        out[q] = -vi[q] * vj[q] + gv[(2 * i + j) * nodes + q] - s;
      }
    }
    rows[i]->to_spectral();
  }

  const double area = kTwoPi * kTwoPi;
  const Complex I{0.0, 1.0};
  ResidualTable table;
  for (int k1 = -k_max; k1 <= k_max; ++k1) {
    for (int k2 = -k_max; k2 <= k_max; ++k2) {
      if (k1 == 0 && k2 == 0) continue;
      const Complex c[2] = {-I * static_cast<double>(k2), I * static_cast<double>(k1)};
      const double kk[2] = {static_cast<double>(k1), static_cast<double>(k2)};
      Complex r{0.0, 0.0};
      for (int i = 0; i < 2; ++i) {
        Complex term = std::conj(mode_value(dvdt, i, k1, k2));
        for (int j = 0; j < 2; ++j) term += I * kk[j] * std::conj(mode_value(*rows[i], j, k1, k2));
        r += c[i] * term;
      }
      const double mag = area * std::abs(r);
      table.entries.push_back({k1, k2, 0, mag});
      table.max = std::max(table.max, mag);
    }
  }
  return table;
}

}  // namespace glnematic
