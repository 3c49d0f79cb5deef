#pragma once

#include <string>
#include <vector>

#include "reflect/config.hpp"
#include "reflect/diagnostics.hpp"
#include "reflect/engine.hpp"
#include "reflect/homogenize.hpp"
#include "reflect/weights.hpp"

namespace reflect {

// Config files: {"kernel": "laplace"|"yukawa"|"stokes", "xi": number|null,
// "particles": [{"c": [x,y,z], "r": R}, ...]}. null xi means infinite.
ParticleConfig read_config(const std::string& path);
ParticleConfig parse_config(const std::string& json_text);
std::string config_to_json(const ParticleConfig& config, const std::vector<std::string>& args);
void write_config(const std::string& path, const ParticleConfig& config,
                  const std::vector<std::string>& args);

std::string strengths_to_json(const ParticleConfig& config, const Strengths& s,
                              const IterationTrace& trace, const std::vector<std::string>& args);

std::string report_to_json(const DiagnosticsReport& report, const std::vector<std::string>& args);

// CSV traces: a "# reflect <version> <args>" header line, then
// step,residual_max,residual_rms,correction_norm.
std::string trace_to_csv(const IterationTrace& trace, const std::vector<std::string>& args);

// CSV: d,r,mu,n_particles,probe_rms_error,max_error,iters,seconds.
std::string sweep_to_csv(const SweepReport& report, const std::vector<std::string>& args);
// JSON sidecar with the probe-level values.
std::string sweep_to_json(const SweepReport& report, const std::vector<std::string>& args);

std::string weights_to_csv(const WeightTable& table, const std::vector<std::string>& args);

void write_text(const std::string& path, const std::string& text);

}  // namespace reflect
