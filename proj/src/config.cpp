#include <magnon/config.hpp>

#include <nlohmann/json.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <set>
#include <thread>

namespace magnon {

using nlohmann::json;

namespace {

constexpr double kPi = 3.141592653589793;

const std::set<std::string> kSubcommands = {
    "steady-state", "sweep1d", "sweep2d", "optimal-delta", "optimal-curve",
    "thermal-sweep", "validate-adiabatic", "convergence"};

void read_double(const json& sec, const std::string& section, const std::string& key,
                 double& out) {
    if (!sec.contains(key)) return;
    const json& v = sec.at(key);
    if (!v.is_number()) {
        throw config_error("config key '" + section + "." + key + "' must be numeric");
    }
    out = v.get<double>();
}

void read_int(const json& sec, const std::string& section, const std::string& key, int& out) {
    if (!sec.contains(key)) return;
    const json& v = sec.at(key);
    if (!v.is_number_integer()) {
        throw config_error("config key '" + section + "." + key + "' must be an integer");
    }
    out = v.get<int>();
}

void read_bool(const json& sec, const std::string& section, const std::string& key, bool& out) {
    if (!sec.contains(key)) return;
    const json& v = sec.at(key);
    if (!v.is_boolean()) {
        throw config_error("config key '" + section + "." + key + "' must be a boolean");
    }
    out = v.get<bool>();
}

void read_string(const json& sec, const std::string& section, const std::string& key,
                 std::string& out) {
    if (!sec.contains(key)) return;
    const json& v = sec.at(key);
    if (!v.is_string()) {
        throw config_error("config key '" + section + "." + key + "' must be a string");
    }
    out = v.get<std::string>();
}

void check_known_keys(const json& sec, const std::string& section,
                      const std::set<std::string>& known) {
    for (auto it = sec.begin(); it != sec.end(); ++it) {
        if (known.find(it.key()) == known.end()) {
            throw config_error("unknown config key '" + section + "." + it.key() + "'");
        }
    }
}

void parse_params_section(const json& sec, const std::string& name, EffectiveParams& p) {
    check_known_keys(sec, name,
                     {"delta1", "delta2", "delta_q", "g1", "g2", "omega_drive", "kappa",
                      "gamma", "n_th1", "n_th2", "kappa_hz", "omega1_hz", "omega2_hz"});
    read_double(sec, name, "delta1", p.delta1);
    read_double(sec, name, "delta2", p.delta2);
    read_double(sec, name, "delta_q", p.delta_q);
    read_double(sec, name, "g1", p.g1);
    read_double(sec, name, "g2", p.g2);
    read_double(sec, name, "omega_drive", p.omega_drive);
    read_double(sec, name, "kappa", p.kappa);
    read_double(sec, name, "gamma", p.gamma);
    read_double(sec, name, "n_th1", p.n_th1);
    read_double(sec, name, "n_th2", p.n_th2);
}

void parse_axis_section(const json& sec, const std::string& name, AxisConfig& axis) {
    check_known_keys(sec, name, {"name", "min", "max", "count"});
    read_string(sec, name, "name", axis.name);
    read_double(sec, name, "min", axis.min);
    read_double(sec, name, "max", axis.max);
    read_int(sec, name, "count", axis.count);
}

} // namespace

RunConfig default_config(const std::string& subcommand) {
    if (kSubcommands.find(subcommand) == kSubcommands.end()) {
        throw config_error("unknown subcommand '" + subcommand + "'");
    }
    RunConfig cfg;
    cfg.subcommand = subcommand;

    cfg.params.g1 = 0.8;
    cfg.params.g2 = 0.161 * 0.8;
    cfg.params.gamma = 1.11;
    cfg.params.omega_drive = 0.001;
    cfg.kappa_hz = 2.0 * kPi * 1.8e6;
    cfg.omega1_hz = 8.2e9;
    cfg.omega2_hz = 8.6e9;

    cfg.params2 = cfg.params;
    cfg.params2.delta1 = -0.276;
    cfg.params2.delta2 = 0.1;
    cfg.params2.delta_q = 0.1;
    cfg.params2.g2 = 0.137 * 0.8;

    cfg.full_params.delta_c1 = 200.0;
    cfg.full_params.delta_c2 = 200.0;
    cfg.full_params.g_m1 = std::sqrt(0.8 * 200.0);
    cfg.full_params.g_q1 = cfg.full_params.g_m1;
    cfg.full_params.g_m2 = std::sqrt(0.161 * 0.8 * 200.0);
    cfg.full_params.g_q2 = cfg.full_params.g_m2;
    cfg.full_params.delta1_bare = 0.8;
    cfg.full_params.delta2_bare = 0.161 * 0.8;
    cfg.full_params.delta_q_bare = 0.8 + 0.161 * 0.8;
    cfg.full_params.omega_drive = 0.001;

    cfg.axis1 = {"delta1", -1.0, 1.0, 161};
    cfg.axis2 = {"g2_ratio", 0.0, 0.5, 161};
    if (subcommand == "sweep1d") cfg.axis1 = {"delta1", -1.0, 1.0, 161};
    if (subcommand == "optimal-curve") cfg.axis1 = {"g2_ratio", 0.05, 0.5, 19};
    return cfg;
}

RunConfig parse_config_json(const json& doc, const std::string& subcommand) {
    RunConfig cfg = default_config(subcommand);
    if (!doc.is_object()) {
        throw config_error("config document must be a JSON object");
    }
    check_known_keys(doc, "<root>",
                     {"params", "params2", "full_params", "axes", "output", "compute"});

    if (doc.contains("params")) {
        const json& sec = doc.at("params");
        parse_params_section(sec, "params", cfg.params);
        read_double(sec, "params", "kappa_hz", cfg.kappa_hz);
        read_double(sec, "params", "omega1_hz", cfg.omega1_hz);
        read_double(sec, "params", "omega2_hz", cfg.omega2_hz);
    }
    if (doc.contains("params2")) {
        parse_params_section(doc.at("params2"), "params2", cfg.params2);
    }
    if (doc.contains("full_params")) {
        const json& sec = doc.at("full_params");
        check_known_keys(sec, "full_params",
                         {"delta_c1", "delta_c2", "delta1_bare", "delta2_bare", "delta_q_bare",
                          "g_m1", "g_m2", "g_q1", "g_q2", "omega_drive"});
        read_double(sec, "full_params", "delta_c1", cfg.full_params.delta_c1);
        read_double(sec, "full_params", "delta_c2", cfg.full_params.delta_c2);
        read_double(sec, "full_params", "delta1_bare", cfg.full_params.delta1_bare);
        read_double(sec, "full_params", "delta2_bare", cfg.full_params.delta2_bare);
        read_double(sec, "full_params", "delta_q_bare", cfg.full_params.delta_q_bare);
        read_double(sec, "full_params", "g_m1", cfg.full_params.g_m1);
        read_double(sec, "full_params", "g_m2", cfg.full_params.g_m2);
        read_double(sec, "full_params", "g_q1", cfg.full_params.g_q1);
        read_double(sec, "full_params", "g_q2", cfg.full_params.g_q2);
        read_double(sec, "full_params", "omega_drive", cfg.full_params.omega_drive);
    }
    if (doc.contains("axes")) {
        const json& axes = doc.at("axes");
        check_known_keys(axes, "axes", {"axis1", "axis2"});
        if (axes.contains("axis1")) parse_axis_section(axes.at("axis1"), "axes.axis1", cfg.axis1);
        if (axes.contains("axis2")) parse_axis_section(axes.at("axis2"), "axes.axis2", cfg.axis2);
    }
    if (doc.contains("output")) {
        const json& sec = doc.at("output");
        check_known_keys(sec, "output", {"path", "csv", "json", "svg"});
        read_string(sec, "output", "path", cfg.output.path);
        read_bool(sec, "output", "csv", cfg.output.csv);
        read_bool(sec, "output", "json", cfg.output.json);
        read_bool(sec, "output", "svg", cfg.output.svg);
    }
    if (doc.contains("compute")) {
        const json& sec = doc.at("compute");
        check_known_keys(sec, "compute",
                         {"channel", "workers", "truncation", "cavity_truncation", "search_lo",
                          "search_hi", "t_min_mk", "t_max_mk", "t_step_mk", "truncations",
                          "detunings"});
        read_string(sec, "compute", "channel", cfg.compute.channel);
        read_int(sec, "compute", "workers", cfg.compute.workers);
        read_int(sec, "compute", "truncation", cfg.compute.truncation);
        read_int(sec, "compute", "cavity_truncation", cfg.compute.cavity_truncation);
        read_double(sec, "compute", "search_lo", cfg.compute.search_lo);
        read_double(sec, "compute", "search_hi", cfg.compute.search_hi);
        read_double(sec, "compute", "t_min_mk", cfg.compute.t_min_mk);
        read_double(sec, "compute", "t_max_mk", cfg.compute.t_max_mk);
        read_double(sec, "compute", "t_step_mk", cfg.compute.t_step_mk);
        if (sec.contains("truncations")) {
            if (!sec.at("truncations").is_array()) {
                throw config_error("config key 'compute.truncations' must be an array");
            }
            cfg.compute.truncations = sec.at("truncations").get<std::vector<int>>();
        }
        if (sec.contains("detunings")) {
            if (!sec.at("detunings").is_array()) {
                throw config_error("config key 'compute.detunings' must be an array");
            }
            cfg.compute.detunings = sec.at("detunings").get<std::vector<double>>();
        }
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path, const std::string& subcommand) {
    std::ifstream in(path);
    if (!in) {
        throw config_error("cannot open config file '" + path + "'");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw config_error("config file '" + path + "': " + e.what());
    }
    return parse_config_json(doc, subcommand);
}

namespace {

double parse_double_value(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const double v = std::stod(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw config_error("non-numeric value '" + value + "' for key '" + key + "'");
    }
}

int parse_int_value(const std::string& key, const std::string& value) {
    try {
        std::size_t used = 0;
        const int v = std::stoi(value, &used);
        if (used != value.size()) throw std::invalid_argument(value);
        return v;
    } catch (const std::exception&) {
        throw config_error("non-integer value '" + value + "' for key '" + key + "'");
    }
}

bool parse_bool_value(const std::string& key, const std::string& value) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw config_error("non-boolean value '" + value + "' for key '" + key + "'");
}

bool set_params_key(EffectiveParams& p, const std::string& key, const std::string& field,
                    const std::string& value) {
    if (field == "delta1") p.delta1 = parse_double_value(key, value);
    else if (field == "delta2") p.delta2 = parse_double_value(key, value);
    else if (field == "delta_q") p.delta_q = parse_double_value(key, value);
    else if (field == "g1") p.g1 = parse_double_value(key, value);
    else if (field == "g2") p.g2 = parse_double_value(key, value);
    else if (field == "omega_drive") p.omega_drive = parse_double_value(key, value);
    else if (field == "kappa") p.kappa = parse_double_value(key, value);
    else if (field == "gamma") p.gamma = parse_double_value(key, value);
    else if (field == "n_th1") p.n_th1 = parse_double_value(key, value);
    else if (field == "n_th2") p.n_th2 = parse_double_value(key, value);
    else return false;
    return true;
}

void set_axis_key(AxisConfig& axis, const std::string& key, const std::string& field,
                  const std::string& value) {
    if (field == "name") axis.name = value;
    else if (field == "min") axis.min = parse_double_value(key, value);
    else if (field == "max") axis.max = parse_double_value(key, value);
    else if (field == "count") axis.count = parse_int_value(key, value);
    else throw config_error("unknown config key '" + key + "'");
}

std::vector<double> parse_double_list(const std::string& key, const std::string& value) {
    std::vector<double> out;
    std::size_t start = 0;
    while (start <= value.size()) {
        const std::size_t comma = value.find(',', start);
        const std::string tok = value.substr(start, comma == std::string::npos
                                                        ? std::string::npos
                                                        : comma - start);
        if (!tok.empty()) out.push_back(parse_double_value(key, tok));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    if (out.empty()) throw config_error("empty list for key '" + key + "'");
    return out;
}

} // namespace

void apply_override(RunConfig& cfg, const std::string& assignment) {
    const std::size_t eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0) {
        throw config_error("override '" + assignment + "' is not of the form key=value");
    }
    const std::string key = assignment.substr(0, eq);
    const std::string value = assignment.substr(eq + 1);

    const std::size_t dot = key.find('.');
    if (dot == std::string::npos) {
        if (key == "kappa_hz") { cfg.kappa_hz = parse_double_value(key, value); return; }
        if (key == "omega1_hz") { cfg.omega1_hz = parse_double_value(key, value); return; }
        if (key == "omega2_hz") { cfg.omega2_hz = parse_double_value(key, value); return; }
        if (!set_params_key(cfg.params, key, key, value)) {
            throw config_error("unknown config key '" + key + "'");
        }
        return;
    }
    const std::string section = key.substr(0, dot);
    const std::string field = key.substr(dot + 1);
    if (section == "params") {
        if (field == "kappa_hz") { cfg.kappa_hz = parse_double_value(key, value); return; }
        if (field == "omega1_hz") { cfg.omega1_hz = parse_double_value(key, value); return; }
        if (field == "omega2_hz") { cfg.omega2_hz = parse_double_value(key, value); return; }
        if (!set_params_key(cfg.params, key, field, value)) {
            throw config_error("unknown config key '" + key + "'");
        }
    } else if (section == "params2") {
        if (!set_params_key(cfg.params2, key, field, value)) {
            throw config_error("unknown config key '" + key + "'");
        }
    } else if (section == "full_params") {
        FullModelParams& f = cfg.full_params;
        if (field == "delta_c1") f.delta_c1 = parse_double_value(key, value);
        else if (field == "delta_c2") f.delta_c2 = parse_double_value(key, value);
        else if (field == "delta1_bare") f.delta1_bare = parse_double_value(key, value);
        else if (field == "delta2_bare") f.delta2_bare = parse_double_value(key, value);
        else if (field == "delta_q_bare") f.delta_q_bare = parse_double_value(key, value);
        else if (field == "g_m1") f.g_m1 = parse_double_value(key, value);
        else if (field == "g_m2") f.g_m2 = parse_double_value(key, value);
        else if (field == "g_q1") f.g_q1 = parse_double_value(key, value);
        else if (field == "g_q2") f.g_q2 = parse_double_value(key, value);
        else if (field == "omega_drive") f.omega_drive = parse_double_value(key, value);
        else throw config_error("unknown config key '" + key + "'");
    } else if (section == "axis1") {
        set_axis_key(cfg.axis1, key, field, value);
    } else if (section == "axis2") {
        set_axis_key(cfg.axis2, key, field, value);
    } else if (section == "output") {
        if (field == "path") cfg.output.path = value;
        else if (field == "csv") cfg.output.csv = parse_bool_value(key, value);
        else if (field == "json") cfg.output.json = parse_bool_value(key, value);
        else if (field == "svg") cfg.output.svg = parse_bool_value(key, value);
        else throw config_error("unknown config key '" + key + "'");
    } else if (section == "compute") {
        ComputeConfig& c = cfg.compute;
        if (field == "channel") c.channel = value;
        else if (field == "workers") c.workers = parse_int_value(key, value);
        else if (field == "truncation") c.truncation = parse_int_value(key, value);
        else if (field == "cavity_truncation") c.cavity_truncation = parse_int_value(key, value);
        else if (field == "search_lo") c.search_lo = parse_double_value(key, value);
        else if (field == "search_hi") c.search_hi = parse_double_value(key, value);
        else if (field == "t_min_mk") c.t_min_mk = parse_double_value(key, value);
        else if (field == "t_max_mk") c.t_max_mk = parse_double_value(key, value);
        else if (field == "t_step_mk") c.t_step_mk = parse_double_value(key, value);
        else if (field == "detunings") c.detunings = parse_double_list(key, value);
        else if (field == "truncations") {
            c.truncations.clear();
            for (double v : parse_double_list(key, value)) {
                c.truncations.push_back(static_cast<int>(v));
            }
        } else {
            throw config_error("unknown config key '" + key + "'");
        }
    } else {
        throw config_error("unknown config section '" + section + "'");
    }
}

void validate_config(const RunConfig& cfg) {
    if (kSubcommands.find(cfg.subcommand) == kSubcommands.end()) {
        throw config_error("unknown subcommand '" + cfg.subcommand + "'");
    }
    try {
        validate(cfg.params);
        validate(cfg.params2);
    } catch (const std::invalid_argument& e) {
        throw config_error(e.what());
    }
    if (cfg.axis1.count < 2) throw config_error("axis1.count must be >= 2");
    if (cfg.axis2.count < 2) throw config_error("axis2.count must be >= 2");
    if (!(cfg.axis1.max > cfg.axis1.min)) throw config_error("axis1.max must exceed axis1.min");
    if (!(cfg.axis2.max > cfg.axis2.min)) throw config_error("axis2.max must exceed axis2.min");
    if (cfg.compute.workers < 0) throw config_error("compute.workers must be >= 0");
    if (cfg.compute.truncation < 3) throw config_error("compute.truncation must be >= 3");
    if (cfg.compute.cavity_truncation < 2) {
        throw config_error("compute.cavity_truncation must be >= 2");
    }
    if (cfg.compute.channel != "numeric" && cfg.compute.channel != "analytic" &&
        cfg.compute.channel != "both") {
        throw config_error("compute.channel must be numeric, analytic or both");
    }
    if (!(cfg.compute.search_hi > cfg.compute.search_lo)) {
        throw config_error("compute.search_hi must exceed compute.search_lo");
    }
    if (cfg.compute.t_step_mk <= 0.0 || cfg.compute.t_max_mk < cfg.compute.t_min_mk ||
        cfg.compute.t_min_mk < 0.0) {
        throw config_error("compute thermal grid must satisfy 0 <= t_min <= t_max, step > 0");
    }
    if (cfg.output.path.empty()) throw config_error("output.path must not be empty");
}

namespace {

json params_to_json(const EffectiveParams& p) {
    return json{{"delta1", p.delta1},     {"delta2", p.delta2},
                {"delta_q", p.delta_q},   {"g1", p.g1},
                {"g2", p.g2},             {"omega_drive", p.omega_drive},
                {"kappa", p.kappa},       {"gamma", p.gamma},
                {"n_th1", p.n_th1},       {"n_th2", p.n_th2}};
}

} // namespace

json serialize_config(const RunConfig& cfg) {
    json params = params_to_json(cfg.params);
    params["kappa_hz"] = cfg.kappa_hz;
    params["omega1_hz"] = cfg.omega1_hz;
    params["omega2_hz"] = cfg.omega2_hz;
    return json{
        {"params", params},
        {"params2", params_to_json(cfg.params2)},
        {"full_params",
         {{"delta_c1", cfg.full_params.delta_c1},
          {"delta_c2", cfg.full_params.delta_c2},
          {"delta1_bare", cfg.full_params.delta1_bare},
          {"delta2_bare", cfg.full_params.delta2_bare},
          {"delta_q_bare", cfg.full_params.delta_q_bare},
          {"g_m1", cfg.full_params.g_m1},
          {"g_m2", cfg.full_params.g_m2},
          {"g_q1", cfg.full_params.g_q1},
          {"g_q2", cfg.full_params.g_q2},
          {"omega_drive", cfg.full_params.omega_drive}}},
        {"axes",
         {{"axis1",
           {{"name", cfg.axis1.name},
            {"min", cfg.axis1.min},
            {"max", cfg.axis1.max},
            {"count", cfg.axis1.count}}},
          {"axis2",
           {{"name", cfg.axis2.name},
            {"min", cfg.axis2.min},
            {"max", cfg.axis2.max},
            {"count", cfg.axis2.count}}}}},
        {"output",
         {{"path", cfg.output.path},
          {"csv", cfg.output.csv},
          {"json", cfg.output.json},
          {"svg", cfg.output.svg}}},
        {"compute",
         {{"channel", cfg.compute.channel},
          {"workers", cfg.compute.workers},
          {"truncation", cfg.compute.truncation},
          {"cavity_truncation", cfg.compute.cavity_truncation},
          {"search_lo", cfg.compute.search_lo},
          {"search_hi", cfg.compute.search_hi},
          {"t_min_mk", cfg.compute.t_min_mk},
          {"t_max_mk", cfg.compute.t_max_mk},
          {"t_step_mk", cfg.compute.t_step_mk},
          {"truncations", cfg.compute.truncations},
          {"detunings", cfg.compute.detunings}}}};
}

Channel channel_from_string(const std::string& name) {
    if (name == "numeric") return Channel::numeric;
    if (name == "analytic") return Channel::analytic;
    if (name == "both") return Channel::both;
    throw config_error("unknown channel '" + name + "'");
}

AxisSpec make_axis(const AxisConfig& axis) {
    return linspace_axis(axis.name, axis.min, axis.max, axis.count);
}

int resolve_worker_count(const RunConfig& cfg) {
    if (cfg.compute.workers > 0) return cfg.compute.workers;
    if (const char* env = std::getenv("MAGNON_SIM_WORKERS")) {
        try {
            const int n = std::stoi(env);
            if (n >= 1) return n;
        } catch (const std::exception&) {
            // fall through to hardware concurrency
        }
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

ThermalConfig thermal_config(const RunConfig& cfg, double temperature_kelvin) {
    return ThermalConfig{cfg.omega1_hz, cfg.omega2_hz, temperature_kelvin, cfg.kappa_hz};
}

} // namespace magnon
