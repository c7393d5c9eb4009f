#pragma once

// Initial data, run configuration, field snapshots and CSV output.

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "glnematic/diagnostics.hpp"
#include "glnematic/state.hpp"

namespace glnematic {

using GeneratorParams = std::map<std::string, double>;

/// "constant", "smooth-wave", "defect-pair", "random-smooth".
const std::vector<std::string>& generator_names();

/// Builds (v0, d0) with |d0| = 1 and div v0 = 0. Unknown names or parameters, and
/// parameters that break the construction, raise std::invalid_argument.
///
///   constant:      d1, d2, d3 (default 0, 0, 1; normalized)
///   smooth-wave:   beta0 = 0.8, a = 0.6, b = 0.5, amplitude = 0.5
///   defect-pair:   sigma = 0.5, x1 = pi/2, y1 = pi, x2 = 3pi/2, y2 = pi
///   random-smooth: band = 3, v_amplitude = 0.5, d_amplitude = 0.4
SimState generate_initial(const std::string& name, const GeneratorParams& params,
                          const SpectralGrid& grid, std::uint64_t seed);

/// C-infinity step from 0 on [0, 0] to 1 on [1, inf).
double smooth_step(double s);

struct RunConfig {
  SimParams params;
  std::string init_name = "smooth-wave";
  GeneratorParams init_params;
  std::string output_dir = "out";
  long sample_every = 1;
  std::vector<double> snapshot_times;
  bool emit_plots_data = false;

  /// Throws std::invalid_argument when an invariant is broken.
  void check() const;
};

RunConfig parse_config(const std::string& json_text);
RunConfig load_config(const std::string& path);
std::string config_to_json(const RunConfig& config);

SimState initial_state(const RunConfig& config);

class SnapshotError : public std::runtime_error {
 public:
  enum class Kind { io, bad_magic, bad_header, truncated, mismatch };
  SnapshotError(Kind kind, const std::string& what, std::size_t missing_bytes = 0);
  Kind kind;
  std::size_t missing_bytes;
};

struct Snapshot {
  SimState state;  // step is not stored and reads back as 0
  double epsilon = 0.0;
};

std::string encode_snapshot(const SimState& state, double epsilon);
Snapshot decode_snapshot(const std::string& bytes);
void write_snapshot(const SimState& state, double epsilon, const std::string& path);
Snapshot read_snapshot(const std::string& path);

/// 17 significant digits, shortest exponent form of printf %.17g.
std::string format_real(double x);

extern const char* const kEnergyCsvHeader;
std::string energy_csv_row(const EnergySample& s);
void write_energy_csv(const std::string& path, const std::vector<EnergySample>& trajectory);

/// x1, x2, v1, v2, d1, d2, d3, energy_density per node.
void write_field_csv(const std::string& path, const SimState& state, double epsilon);

void write_text_file(const std::string& path, const std::string& text);
std::string read_text_file(const std::string& path);

}  // namespace glnematic
