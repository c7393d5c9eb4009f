#include "glnematic/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "glnematic/gl_dynamics.hpp"
#include "glnematic/limit_solver.hpp"
#include "glnematic/sweep.hpp"

namespace glnematic {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr double kMaxPrincipleSlack = 1e-8;

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

RunConfig config_or_usage(const std::string& path) {
  try {
    return load_config(path);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
}

json report_json(const ConcentrationReport& r) {
  json pts = json::array();
  for (const auto& p : r.points)
    pts.push_back({{"x1", p.x1},
                   {"x2", p.x2},
                   {"peak_energy", p.peak_energy},
                   {"attributed_energy", p.attributed_energy},
                   {"nodes", p.nodes}});
  return {{"t", r.t},          {"epsilon", r.epsilon},         {"eps0_sq", r.eps0_sq},
          {"radius", r.radius}, {"total_energy", r.total_energy}, {"count", r.count},
          {"k_bound", r.k_bound}, {"passed", r.passed},          {"points", pts}};
}

std::string indexed_name(const char* stem, int index, const char* ext) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s_%03d%s", stem, index, ext);
  return buf;
}

int cmd_run(const std::string& config_path, std::ostream& out, std::ostream& err) {
  const RunConfig config = config_or_usage(config_path);
  const fs::path dir(config.output_dir);
  fs::create_directories(dir);
  const SimState init = initial_state(config);
  const double eps = config.params.epsilon;

  RunObserver obs;
  obs.snapshot_times = config.snapshot_times;
  int snapshot_index = 0;
  obs.on_snapshot = [&](const SimState& s) {
    write_snapshot(s, eps, (dir / indexed_name("snapshot", snapshot_index, ".elgl")).string());
    if (config.emit_plots_data)
      write_field_csv((dir / indexed_name("field", snapshot_index, ".csv")).string(), s, eps);
    ++snapshot_index;
  };

  RunResult r;
  try {
    r = run(config.params, init, config.sample_every, obs);
  } catch (const BlowUpError& e) {
    err << "blow-up: " << e.what() << "\n";
    return kExitBlowUp;
  }
  write_energy_csv((dir / "energy.csv").string(), r.trajectory);

  json report;
  report["epsilon"] = eps;
  report["dt"] = config.params.dt_effective();
  report["steps"] = config.params.steps_to_end();
  report["t_final"] = r.final_state.t;
  bool ok = true;
  if (r.trajectory.size() >= 2) {
    const EnergyAudit a = energy_audit(r.trajectory);
    report["energy_audit"] = {{"passed", a.passed},
                              {"monotone", a.monotone},
                              {"cumulative", a.cumulative},
                              {"worst_step_increase", a.worst_step_increase},
                              {"worst_step_index", a.worst_step_index},
                              {"worst_cumulative_excess", a.worst_cumulative_excess},
                              {"worst_cumulative_index", a.worst_cumulative_index},
                              {"dissipated", a.dissipated}};
    ok = ok && a.passed;
  } else {
    report["energy_audit"] = {{"passed", true}, {"note", "fewer than two samples"}};
  }
  double max_d = 0.0;
  for (const auto& s : r.trajectory) max_d = std::max(max_d, s.max_d);
  const bool max_ok = max_d <= 1.0 + kMaxPrincipleSlack;
  report["max_principle"] = {{"passed", max_ok}, {"max_d", max_d}, {"limit", 1.0 + kMaxPrincipleSlack}};
  ok = ok && max_ok;

  json checks = json::array();
  for (const auto& c : validate(r.final_state, config.params).checks)
    checks.push_back({{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"limit", c.limit}});
  report["final_state_checks"] = checks;
  const double e0 = r.trajectory.empty() ? 0.0 : r.trajectory.front().dirichlet + r.trajectory.front().penalty;
  const std::optional<double> eps0 = config.params.eps0_sq ? config.params.eps0_sq
                                     : e0 > 0.0             ? std::optional<double>(0.05 * e0)
                                                            : std::nullopt;
  report["concentration"] = report_json(
      analyze_director(r.final_state.d, eps, r.final_state.t, eps0, config.params.ball_radius));
  report["passed"] = ok;
  write_text_file((dir / "report.json").string(), report.dump(2) + "\n");

  out << "run finished at t=" << format_real(r.final_state.t) << ", "
      << r.trajectory.size() << " samples, " << (ok ? "audits passed" : "AUDIT FAILED") << "\n";
  if (!ok) err << "audit failure, see " << (dir / "report.json").string() << "\n";
  return ok ? kExitOk : kExitAuditFailure;
}

int cmd_sweep(const std::string& config_path, const std::vector<double>& eps, std::ostream& out,
              std::ostream& err) {
  const RunConfig config = config_or_usage(config_path);
  if (eps.empty()) throw UsageError("--eps needs at least one value");
  for (double e : eps) {
    SimParams p = config.params;
    p.epsilon = e;
    try {
      p.check();
    } catch (const std::exception& ex) {
      throw UsageError(ex.what());
    }
  }
  const SweepResult r = run_sweep(config, eps);
  out << scaling_csv(r);
  if (r.slope)
    out << "slope " << format_real(*r.slope) << "\n";
  else
    out << "slope unavailable (needs three distinct epsilons with positive penalty)\n";
  int code = kExitOk;
  for (const auto& e : r.entries) {
    if (e.blew_up) {
      err << "epsilon " << format_real(e.epsilon) << ": " << e.error << "\n";
      code = kExitBlowUp;
    } else if (!e.error.empty()) {
      err << "epsilon " << format_real(e.epsilon) << ": " << e.error << "\n";
      if (code == kExitOk) code = kExitAuditFailure;
    } else if (!e.audit_passed) {
      err << "epsilon " << format_real(e.epsilon) << ": energy audit failed\n";
      if (code == kExitOk) code = kExitAuditFailure;
    }
  }
  return code;
}

int cmd_analyze(const std::string& path, std::optional<double> eps0_sq,
                std::optional<double> radius, std::ostream& out) {
  Snapshot snap;
  try {
    snap = read_snapshot(path);
  } catch (const SnapshotError& e) {
    throw UsageError(e.what());
  }
  ConcentrationReport r;
  try {
    r = analyze_director(snap.state.d, snap.epsilon, snap.state.t, eps0_sq, radius);
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  out << r.count << " concentration points\n";
  out << "energy " << format_real(r.total_energy) << ", eps0_sq " << format_real(r.eps0_sq)
      << ", radius " << format_real(r.radius) << ", bound " << r.k_bound << "\n";
  for (const auto& p : r.points)
    out << "  (" << format_real(p.x1) << ", " << format_real(p.x2)
        << ") attributed energy " << format_real(p.attributed_energy) << "\n";
  return r.passed ? kExitOk : kExitAuditFailure;
}

int cmd_compare(const std::string& config_path, std::ostream& out, std::ostream& err) {
  const RunConfig config = config_or_usage(config_path);
  std::vector<CompareRow> rows;
  try {
    rows = compare_runs(config);
  } catch (const BlowUpError& e) {
    err << "blow-up: " << e.what() << "\n";
    return kExitBlowUp;
  } catch (const NormalizationError& e) {
    err << "limit solver: " << e.what() << "\n";
    return kExitBlowUp;
  }
  fs::create_directories(config.output_dir);
  const std::string csv = compare_csv(rows);
  write_text_file((fs::path(config.output_dir) / "compare.csv").string(), csv);
  out << csv;
  return kExitOk;
}

}  // namespace

int cli_main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ginzburg-Landau nematic flow on the torus"};
  app.require_subcommand(1);

  std::string run_config;
  auto* run_cmd = app.add_subcommand("run", "single simulation");
  run_cmd->add_option("--config", run_config, "JSON run configuration")->required();

  std::string sweep_config;
  std::vector<double> sweep_eps;
  auto* sweep_cmd = app.add_subcommand("sweep", "one run per epsilon, scaling table");
  sweep_cmd->add_option("--config", sweep_config, "JSON run configuration")->required();
  sweep_cmd->add_option("--eps", sweep_eps, "comma separated epsilons")->required()->delimiter(',');

  std::string snapshot_path;
  std::optional<double> eps0_sq, radius;
  auto* analyze_cmd = app.add_subcommand("analyze", "concentration report of a snapshot");
  analyze_cmd->add_option("--snapshot", snapshot_path, "snapshot file")->required();
  analyze_cmd->add_option("--eps0-sq", eps0_sq, "energy threshold");
  analyze_cmd->add_option("--radius", radius, "ball radius");

  std::string compare_config;
  auto* compare_cmd = app.add_subcommand("compare", "GL flow against the limit solver");
  compare_cmd->add_option("--config", compare_config, "JSON run configuration")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*run_cmd) return cmd_run(run_config, out, err);
    if (*sweep_cmd) return cmd_sweep(sweep_config, sweep_eps, out, err);
    if (*analyze_cmd) return cmd_analyze(snapshot_path, eps0_sq, radius, out);
    if (*compare_cmd) return cmd_compare(compare_config, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitAuditFailure;
  }
  return kExitUsage;
}

}  // namespace glnematic
