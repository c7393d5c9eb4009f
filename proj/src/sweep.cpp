#include "glnematic/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <set>
#include <thread>

#include <json.hpp>

#include "glnematic/gl_dynamics.hpp"
#include "glnematic/limit_solver.hpp"

namespace glnematic {

namespace fs = std::filesystem;

namespace {
// Below this the energy is rounding noise of an exactly unit, constant director.
constexpr double kEnergyFloor = 1e-12;
}  // namespace

unsigned available_threads() {
  unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  if (const char* env = std::getenv("GLNEMATIC_THREADS")) {
    char* end = nullptr;
    const long cap = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && cap >= 1) hw = std::min(hw, static_cast<unsigned>(cap));
  }
  return hw;
}

double sweep_probe_time(const RunConfig& config) {
  for (double t : config.snapshot_times)
    if (t > 0.0) return t;
  return config.params.t_end;
}

namespace {

std::string eps_dir_name(double eps) { return "eps_" + format_real(eps); }

SweepEntry run_one(const RunConfig& config, double eps, const SimState& init, int k_max,
                   bool write_outputs) {
  SweepEntry e;
  e.epsilon = eps;
  SimParams p = config.params;
  p.epsilon = eps;
  e.dt = p.dt_effective();
  e.steps = p.steps_to_end();
  e.probe_t = sweep_probe_time(config);
  const double tol = 1e-12 * std::max(1.0, e.probe_t);
  bool captured = false;
  RunObserver obs;
  obs.on_step = [&](const SimState& prev, const SimState& curr) {
    if (captured || curr.t < e.probe_t - tol) return;
    captured = true;
    e.probe_t = curr.t;
    e.probe = curr;
    e.grad_rho_l2sq = polar_sample(curr.d).grad_rho_l2sq;
    e.wedge_residual_max = wedge_residual(prev, curr, k_max).max;
    e.momentum_residual_max = momentum_weak_residual(prev, curr, k_max).max;
  };
  try {
    RunResult r = run(p, init, config.sample_every, obs);
    for (const auto& s : r.trajectory) {
      e.sup_penalty_l2 = std::max(e.sup_penalty_l2, s.penalty_l2);
      e.max_d = std::max(e.max_d, s.max_d);
    }
    e.audit_passed = r.trajectory.size() >= 2 && energy_audit(r.trajectory).passed;
    if (write_outputs) {
      const fs::path dir = fs::path(config.output_dir) / eps_dir_name(eps);
      fs::create_directories(dir);
      write_energy_csv((dir / "energy.csv").string(), r.trajectory);
    }
    if (!captured) {
      e.probe = r.final_state;
      e.probe_t = r.final_state.t;
      e.grad_rho_l2sq = polar_sample(r.final_state.d).grad_rho_l2sq;
    }
  } catch (const BlowUpError& err) {
    e.blew_up = true;
    e.error = err.what();
  } catch (const std::exception& err) {
    e.error = err.what();
  }
  return e;
}

}  // namespace

SweepResult run_sweep(const RunConfig& config, const std::vector<double>& epsilons,
                      const SweepOptions& options) {
  if (epsilons.empty()) throw std::invalid_argument("sweep needs at least one epsilon");
  for (double eps : epsilons) {
    SimParams p = config.params;
    p.epsilon = eps;
    p.check();
  }
  const SimState init = initial_state(config);
  SweepResult result;
  result.entries.resize(epsilons.size());

  unsigned threads = options.threads ? options.threads : available_threads();
  threads = std::min<unsigned>(threads, static_cast<unsigned>(epsilons.size()));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < epsilons.size(); i = next++)
      result.entries[i] =
          run_one(config, epsilons[i], init, options.k_max, options.write_outputs);
  };
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }

  std::vector<std::pair<double, double>> fit;
  std::set<double> distinct;
  bool all_ok = true;
  for (const auto& e : result.entries) {
    if (!e.error.empty()) {
      all_ok = false;
      continue;
    }
    fit.emplace_back(e.epsilon, e.sup_penalty_l2);
    distinct.insert(e.epsilon);
  }
  bool positive = std::all_of(fit.begin(), fit.end(), [](auto& x) { return x.second > 0.0; });
  if (distinct.size() >= 3 && positive) result.slope = penalty_scaling_fit(fit);
  if (all_ok && distinct.size() >= 3 && distinct.size() == result.entries.size()) {
    std::vector<std::pair<double, Field>> snaps;
    for (const auto& e : result.entries) snaps.emplace_back(e.epsilon, e.probe.d);
    result.defect = defect_estimate(snaps, options.k_max, result.entries.front().probe_t);
  }

  if (options.write_outputs) {
    fs::create_directories(config.output_dir);
    write_text_file((fs::path(config.output_dir) / "scaling.csv").string(), scaling_csv(result));
    write_text_file((fs::path(config.output_dir) / "sweep.json").string(), sweep_json(result));
  }
  return result;
}

const char* const kScalingCsvHeader = "epsilon,sup_penalty_l2,grad_rho_l2sq,wedge_residual_max";

std::string scaling_csv(const SweepResult& result) {
  std::string text = std::string(kScalingCsvHeader) + "\n";
  for (const auto& e : result.entries) {
    text += format_real(e.epsilon) + "," + format_real(e.sup_penalty_l2) + "," +
            format_real(e.grad_rho_l2sq) + "," + format_real(e.wedge_residual_max) + "\n";
  }
  return text;
}

std::string sweep_json(const SweepResult& result) {
  using nlohmann::json;
  json j;
  j["slope"] = result.slope ? json(*result.slope) : json(nullptr);
  json runs = json::array();
  for (const auto& e : result.entries) {
    runs.push_back({{"epsilon", e.epsilon},
                    {"dt", e.dt},
                    {"steps", e.steps},
                    {"sup_penalty_l2", e.sup_penalty_l2},
                    {"max_d", e.max_d},
                    {"probe_t", e.probe_t},
                    {"grad_rho_l2sq", e.grad_rho_l2sq},
                    {"wedge_residual_max", e.wedge_residual_max},
                    {"momentum_residual_max", e.momentum_residual_max},
                    {"energy_audit_passed", e.audit_passed},
                    {"blew_up", e.blew_up},
                    {"error", e.error}});
  }
  j["runs"] = runs;
  if (result.defect) {
    json eta = json::array();
    double worst = 0.0;
    for (const auto& p : result.defect->eta_estimate) {
      eta.push_back({{"k1", p.k1}, {"k2", p.k2}, {"re", p.value.real()}, {"im", p.value.imag()}});
      worst = std::max(worst, std::abs(p.value));
    }
    j["defect_estimate"] = {{"t", result.defect->t},
                            {"k_max", result.defect->test_k_max},
                            {"max_abs", worst},
                            {"modes", eta}};
  }
  return j.dump(2) + "\n";
}

namespace {

double l2_distance(const Field& a, const Field& b) {
  Field ah, bh;
  const Field& x = with_both(a, ah);
  const Field& y = with_both(b, bh);
  const double h = x.grid().spacing();
  double sum = 0.0;
  for (int c = 0; c < x.components(); ++c) {
    auto p = x.physical(c), q = y.physical(c);
    for (std::size_t i = 0; i < p.size(); ++i) sum += (p[i] - q[i]) * (p[i] - q[i]);
  }
  return std::sqrt(h * h * sum);
}

}  // namespace

std::vector<CompareRow> compare_runs(const RunConfig& config) {
  std::vector<double> times;
  for (double t : config.snapshot_times)
    if (t > 0.0) times.push_back(t);
  if (times.empty())
    for (int k = 1; k <= 10; ++k) times.push_back(config.params.t_end * k / 10.0);
  std::sort(times.begin(), times.end());

  const SimState init = initial_state(config);
  std::vector<SimState> gl_states, limit_states;
  RunObserver gl_obs;
  gl_obs.snapshot_times = times;
  gl_obs.on_snapshot = [&](const SimState& s) { gl_states.push_back(s); };
  RunObserver limit_obs = gl_obs;
  limit_obs.on_snapshot = [&](const SimState& s) { limit_states.push_back(s); };

  const long every = std::max<long>(1, config.params.steps_to_end());
  run(config.params, init, every, gl_obs);
  run_limit(config.params, init, every, limit_obs);

  std::vector<CompareRow> rows;
  const std::size_t count = std::min(gl_states.size(), limit_states.size());
  for (std::size_t i = 0; i < count; ++i) {
    const auto& g = gl_states[i];
    const auto& l = limit_states[i];
    CompareRow r;
    r.t_gl = g.t;
    r.t_limit = l.t;
    r.dist_v = l2_distance(g.v, l.v);
    r.dist_d = l2_distance(g.d, l.d);
    r.energy_gl = energy(g, config.params.epsilon).total;
    r.energy_limit = energy(l, config.params.epsilon).total;
    r.max_d_gl = max_director_norm(g);
    rows.push_back(r);
  }
  return rows;
}

const char* const kCompareCsvHeader = "t_gl,t_limit,dist_v,dist_d,energy_gl,energy_limit,max_d_gl";

std::string compare_csv(const std::vector<CompareRow>& rows) {
  std::string text = std::string(kCompareCsvHeader) + "\n";
  for (const auto& r : rows) {
    const double cols[] = {r.t_gl,      r.t_limit,      r.dist_v,  r.dist_d,
                           r.energy_gl, r.energy_limit, r.max_d_gl};
    for (std::size_t i = 0; i < std::size(cols); ++i) {
      if (i) text += ',';
      text += format_real(cols[i]);
    }
    text += '\n';
  }
  return text;
}

ConcentrationReport analyze_director(const Field& d, double epsilon, double t,
                                     std::optional<double> eps0_sq, std::optional<double> radius) {
  const double r = radius ? *radius : std::min(16.0 * d.grid().spacing(), kTwoPi / 4);
  if (!eps0_sq) {
    const double total = integrate(energy_density(d, epsilon));
    if (!(total > kEnergyFloor)) {
      ConcentrationReport empty;
      empty.t = t;
      empty.epsilon = epsilon;
      empty.radius = r;
      empty.passed = true;
      return empty;
    }
    eps0_sq = 0.05 * total;
  }
  return detect_sigma(d, epsilon, r, *eps0_sq, t);
}

}  // namespace glnematic
