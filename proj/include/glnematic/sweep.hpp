#pragma once

// Epsilon sweeps and the Ginzburg-Landau versus limit-solver comparison.

#include <optional>
#include <string>
#include <vector>

#include "glnematic/concentration.hpp"
#include "glnematic/io.hpp"

namespace glnematic {

/// min(hardware threads, GLNEMATIC_THREADS when set), at least 1.
unsigned available_threads();

struct SweepEntry {
  double epsilon = 0.0;
  double dt = 0.0;
  long steps = 0;
  double sup_penalty_l2 = 0.0;  // over recorded samples
  double max_d = 0.0;           // over recorded samples
  double probe_t = 0.0;
  double grad_rho_l2sq = 0.0;   // at the probe time
  double wedge_residual_max = 0.0;
  double momentum_residual_max = 0.0;
  bool audit_passed = false;
  bool blew_up = false;
  std::string error;
  SimState probe;  // state at the probe time
};

struct SweepResult {
  std::vector<SweepEntry> entries;  // input order
  std::optional<double> slope;      // needs >= 3 distinct epsilons
  std::optional<DefectEstimate> defect;
};

struct SweepOptions {
  int k_max = 4;
  unsigned threads = 0;  // 0 -> min(#eps, available_threads())
  bool write_outputs = true;
};

/// Probe time: the first positive snapshot time, otherwise t_end.
double sweep_probe_time(const RunConfig& config);

/// Runs one simulation per epsilon (concurrently). With write_outputs, each run writes
/// <output_dir>/eps_<epsilon>/energy.csv and the sweep writes scaling.csv and sweep.json.
SweepResult run_sweep(const RunConfig& config, const std::vector<double>& epsilons,
                      const SweepOptions& options = {});

extern const char* const kScalingCsvHeader;
std::string scaling_csv(const SweepResult& result);
std::string sweep_json(const SweepResult& result);

struct CompareRow {
  double t_gl = 0.0;
  double t_limit = 0.0;
  double dist_v = 0.0;  // L2 distance of velocities
  double dist_d = 0.0;  // L2 distance of directors
  double energy_gl = 0.0;
  double energy_limit = 0.0;
  double max_d_gl = 0.0;
};

/// Runs the GL flow with config.params and the limit solver from the same initial data
/// and compares them at the positive snapshot times (ten equal stages of t_end if none).
std::vector<CompareRow> compare_runs(const RunConfig& config);

extern const char* const kCompareCsvHeader;
std::string compare_csv(const std::vector<CompareRow>& rows);

/// Concentration report with the defaults of SimParams: eps0_sq = 0.05 * energy and
/// radius = min(16 h, pi/2). Without an explicit threshold, a field whose energy is at most 1e-12
/// has no points.
ConcentrationReport analyze_director(const Field& d, double epsilon, double t,
                                     std::optional<double> eps0_sq,
                                     std::optional<double> radius);

}  // namespace glnematic
