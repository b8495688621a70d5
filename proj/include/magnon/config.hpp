// config.hpp — Run configuration: JSON document with sections `params`,
// `params2`, `full_params`, `axes`, `output`, `compute`; flag overrides; and
// the deterministic serialization used for output echoes and round-trips.

#pragma once

#include <magnon/experiments.hpp>

#include <nlohmann/json_fwd.hpp>

#include <optional>
#include <string>
#include <vector>

namespace magnon {

class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct AxisConfig {
    std::string name{"delta1"};
    double min{-1.0};
    double max{1.0};
    int count{161};
};

struct OutputConfig {
    std::string path{"magnon_output"};
    bool csv{true};
    bool json{true};
    bool svg{false};
};

struct ComputeConfig {
    std::string channel{"both"};
    int workers{0};  // 0 resolves to MAGNON_SIM_WORKERS or hardware concurrency
    int truncation{4};
    int cavity_truncation{2};
    double search_lo{-1.0};
    double search_hi{1.0};
    double t_min_mk{0.0};
    double t_max_mk{10.0};
    double t_step_mk{0.25};
    std::vector<int> truncations{3, 4, 6};
    std::vector<double> detunings{0.0, 0.05, 0.1, 0.15, 0.2};
};

struct RunConfig {
    std::string subcommand;
    EffectiveParams params;      // kappa-unit parameter block (paper defaults)
    double kappa_hz{0.0};        // absolute-unit section
    double omega1_hz{0.0};
    double omega2_hz{0.0};
    EffectiveParams params2;     // second optimum for the thermal sweep
    FullModelParams full_params;
    AxisConfig axis1;
    AxisConfig axis2;
    OutputConfig output;
    ComputeConfig compute;
};

// Paper defaults: gamma = 1.11, g1 = 0.8, Omega = 0.001 (kappa units),
// g2 at the zero-detuning optimum ratio; axes default to the delta1 x g2/g1
// map. params2 carries the finite-detuning optimum.
RunConfig default_config(const std::string& subcommand);

RunConfig parse_config_file(const std::string& path, const std::string& subcommand);
RunConfig parse_config_json(const nlohmann::json& doc, const std::string& subcommand);

// key=value override; bare keys address the params section, dotted keys the
// other sections (axis1.count=81, compute.workers=2, output.svg=true, ...).
void apply_override(RunConfig& cfg, const std::string& assignment);

// invariants: axis counts >= 2, workers >= 0, channel well-formed, params valid
void validate_config(const RunConfig& cfg);

nlohmann::json serialize_config(const RunConfig& cfg);

Channel channel_from_string(const std::string& name);

AxisSpec make_axis(const AxisConfig& axis);

int resolve_worker_count(const RunConfig& cfg);  // flag > env > hardware

ThermalConfig thermal_config(const RunConfig& cfg, double temperature_kelvin = 0.0);

} // namespace magnon
