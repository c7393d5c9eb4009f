#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "glnematic/io.hpp"

namespace glnematic {

using nlohmann::json;

namespace {

const char* const kKnownKeys[] = {"epsilon",      "n",           "dt_requested",   "t_end",
                                  "scheme",       "stabilization", "eps0_sq",      "ball_radius",
                                  "dealias_on",   "seed",        "enforce_dt_guard", "init",
                                  "output_dir",   "sample_every", "snapshot_times", "emit_plots_data"};

template <class T>
void read_opt(const json& j, const char* key, T& out) {
  if (j.contains(key)) out = j.at(key).get<T>();
}

}  // namespace

void RunConfig::check() const {
  params.check();
  const auto& names = generator_names();
  if (std::find(names.begin(), names.end(), init_name) == names.end())
    throw std::invalid_argument("unknown generator '" + init_name + "'");
  if (sample_every < 1) throw std::invalid_argument("sample_every must be >= 1");
  for (double t : snapshot_times)
    if (!(t >= 0.0 && t <= params.t_end))
      throw std::invalid_argument("snapshot time " + format_real(t) + " outside [0, t_end]");
  if (output_dir.empty()) throw std::invalid_argument("output_dir must not be empty");
}

RunConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("config must be a JSON object");
  for (const auto& [key, value] : j.items()) {
    if (std::find_if(std::begin(kKnownKeys), std::end(kKnownKeys),
                     [&](const char* k) { return key == k; }) == std::end(kKnownKeys))
      throw std::invalid_argument("unknown config key '" + key + "'");
  }
  RunConfig c;
  try {
    auto& p = c.params;
    read_opt(j, "epsilon", p.epsilon);
    read_opt(j, "n", p.n);
    read_opt(j, "dt_requested", p.dt_requested);
    read_opt(j, "t_end", p.t_end);
    if (j.contains("scheme")) p.scheme = parse_scheme(j.at("scheme").get<std::string>());
    read_opt(j, "stabilization", p.stabilization);
    if (j.contains("eps0_sq") && !j.at("eps0_sq").is_null()) p.eps0_sq = j.at("eps0_sq").get<double>();
    if (j.contains("ball_radius") && !j.at("ball_radius").is_null())
      p.ball_radius = j.at("ball_radius").get<double>();
    read_opt(j, "dealias_on", p.dealias_on);
    read_opt(j, "seed", p.seed);
    read_opt(j, "enforce_dt_guard", p.enforce_dt_guard);
    if (j.contains("init")) {
      const json& init = j.at("init");
      if (init.is_string()) {
        c.init_name = init.get<std::string>();
      } else {
        c.init_name = init.at("name").get<std::string>();
        if (init.contains("params"))
          for (const auto& [k, v] : init.at("params").items()) c.init_params[k] = v.get<double>();
      }
    }
    read_opt(j, "output_dir", c.output_dir);
    read_opt(j, "sample_every", c.sample_every);
    read_opt(j, "snapshot_times", c.snapshot_times);
    read_opt(j, "emit_plots_data", c.emit_plots_data);
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config has a field of the wrong type: ") + e.what());
  }
  c.check();
  return c;
}

RunConfig load_config(const std::string& path) { return parse_config(read_text_file(path)); }

std::string config_to_json(const RunConfig& c) {
  const auto& p = c.params;
  json j;
  j["epsilon"] = p.epsilon;
  j["n"] = p.n;
  j["dt_requested"] = p.dt_requested;
  j["t_end"] = p.t_end;
  j["scheme"] = scheme_name(p.scheme);
  j["stabilization"] = p.stabilization;
  j["eps0_sq"] = p.eps0_sq ? json(*p.eps0_sq) : json(nullptr);
  j["ball_radius"] = p.ball_radius ? json(*p.ball_radius) : json(nullptr);
  j["dealias_on"] = p.dealias_on;
  j["seed"] = p.seed;
  j["enforce_dt_guard"] = p.enforce_dt_guard;
  j["init"] = {{"name", c.init_name}, {"params", c.init_params}};
  j["output_dir"] = c.output_dir;
  j["sample_every"] = c.sample_every;
  j["snapshot_times"] = c.snapshot_times;
  j["emit_plots_data"] = c.emit_plots_data;
  return j.dump(2) + "\n";
}

SimState initial_state(const RunConfig& config) {
  return generate_initial(config.init_name, config.init_params, make_grid(config.params.n),
                          config.params.seed);
}

}  // namespace glnematic
