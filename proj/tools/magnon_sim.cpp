// magnon_sim — CLI driver: configuration, subcommand dispatch and file output.

#include <magnon/analytic.hpp>
#include <magnon/config.hpp>
#include <magnon/experiments.hpp>
#include <magnon/lindblad.hpp>
#include <magnon/output.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <iostream>
#include <string>
#include <vector>

using nlohmann::json;
using namespace magnon;

namespace {

struct CliOptions {
    std::string config_path;
    std::vector<std::string> overrides;
    std::string out_path;
    int workers{0};
};

RunConfig build_config(const std::string& subcommand, const CliOptions& cli) {
    RunConfig cfg = cli.config_path.empty() ? default_config(subcommand)
                                            : parse_config_file(cli.config_path, subcommand);
    for (const std::string& assignment : cli.overrides) {
        apply_override(cfg, assignment);
    }
    if (!cli.out_path.empty()) cfg.output.path = cli.out_path;
    if (cli.workers > 0) cfg.compute.workers = cli.workers;
    validate_config(cfg);
    return cfg;
}

SweepOptions sweep_options(const RunConfig& cfg, bool collect_physicality = false) {
    SweepOptions opts;
    opts.channel = channel_from_string(cfg.compute.channel);
    opts.truncation = cfg.compute.truncation;
    opts.workers = resolve_worker_count(cfg);
    opts.collect_physicality = collect_physicality;
    return opts;
}

std::vector<double> thermal_grid_kelvin(const RunConfig& cfg) {
    std::vector<double> out;
    for (double t = cfg.compute.t_min_mk; t <= cfg.compute.t_max_mk + 1e-12;
         t += cfg.compute.t_step_mk) {
        out.push_back(t * 1e-3);
    }
    return out;
}

json run_steady_state(const RunConfig& cfg) {
    const HilbertSpace space({2, cfg.compute.truncation, cfg.compute.truncation});
    json result;
    const Channel channel = channel_from_string(cfg.compute.channel);
    if (channel != Channel::analytic) {
        const Operator h = build_effective_hamiltonian(cfg.params, space);
        const SparseMatrix liou =
            build_liouvillian(h, effective_dissipators(cfg.params, space));
        const DensityMatrix rho = steady_state(liou, space);
        result["g2_numeric"] = g2_zero(rho, 1);
        const Operator m1 = embed(annihilation(space.dim(1)), space, 1);
        result["occupation_m1"] = expectation(rho, m1.adjoint() * m1).real();
    }
    if (channel != Channel::numeric) {
        result["g2_analytic"] = g2_analytic(cfg.params);
    }
    return result;
}

json run_sweep(const RunConfig& cfg, bool two_dim, const std::string& timestamp,
               std::vector<std::pair<std::string, std::string>>& files) {
    const SweepOptions opts = sweep_options(cfg);
    const AxisSpec a1 = make_axis(cfg.axis1);
    SweepGrid grid;
    if (two_dim) {
        grid = sweep_2d(cfg.params, a1, make_axis(cfg.axis2), opts);
    } else {
        grid = sweep_1d(cfg.params, a1, opts);
    }
    if (cfg.output.csv) {
        files.emplace_back("csv", cfg.output.path + ".csv");
        write_text_file(files.back().second, sweep_grid_csv(grid, cfg, timestamp));
    }
    if (cfg.output.svg && two_dim) {
        const std::string channel =
            cfg.compute.channel == "analytic" ? "analytic" : "numeric";
        HeatmapStyle style;
        style.title = "g2(0), " + channel + " channel";
        files.emplace_back("svg", cfg.output.path + ".svg");
        write_text_file(files.back().second, render_heatmap(grid, channel, style));
    }
    return sweep_grid_json(grid);
}

json run_subcommand(const RunConfig& cfg, const std::string& timestamp,
                    std::vector<std::pair<std::string, std::string>>& files) {
    const std::string& sub = cfg.subcommand;
    if (sub == "steady-state") {
        return run_steady_state(cfg);
    }
    if (sub == "sweep2d" || sub == "sweep1d") {
        return run_sweep(cfg, sub == "sweep2d", timestamp, files);
    }
    if (sub == "optimal-delta") {
        const OptimalDelta opt =
            optimal_delta1(cfg.params, cfg.compute.search_lo, cfg.compute.search_hi);
        return json{{"delta1_opt", opt.delta1},
                    {"residual_modulus", opt.residual_modulus},
                    {"at_boundary", opt.at_boundary}};
    }
    if (sub == "optimal-curve") {
        const AxisSpec ratios = make_axis(cfg.axis1);
        const std::vector<OptimalCurvePoint> points =
            optimal_curve(ratios.values, cfg.compute.detunings, cfg.params,
                          cfg.compute.search_lo, cfg.compute.search_hi);
        if (cfg.output.csv) {
            files.emplace_back("csv", cfg.output.path + ".csv");
            write_text_file(files.back().second, optimal_curve_csv(points, cfg, timestamp));
        }
        json arr = json::array();
        for (const OptimalCurvePoint& p : points) {
            arr.push_back({{"delta_q2", p.detuning},
                           {"g2_ratio", p.g_ratio},
                           {"delta1_opt", p.delta1_opt},
                           {"residual", p.residual_modulus},
                           {"at_boundary", p.at_boundary}});
        }
        return json{{"points", arr}};
    }
    if (sub == "thermal-sweep") {
        const ThermalSweepResult result = thermal_sweep(
            thermal_config(cfg),
            {{"zero_detuning", cfg.params}, {"finite_detuning", cfg.params2}},
            thermal_grid_kelvin(cfg), sweep_options(cfg));
        if (cfg.output.csv) {
            files.emplace_back("csv", cfg.output.path + ".csv");
            write_text_file(files.back().second, thermal_csv(result, cfg, timestamp));
        }
        return thermal_json(result);
    }
    if (sub == "validate-adiabatic") {
        EffectiveParams decay = cfg.params;  // kappa, gamma, n_th enter the dissipators
        const ValidationReport report =
            adiabatic_validation(cfg.full_params, decay, cfg.compute.truncation,
                                 cfg.compute.cavity_truncation);
        return validation_json(report);
    }
    if (sub == "convergence") {
        const std::vector<ConvergenceRow> rows =
            convergence_check(cfg.params, cfg.compute.truncations);
        if (cfg.output.csv) {
            files.emplace_back("csv", cfg.output.path + ".csv");
            write_text_file(files.back().second, convergence_csv(rows, cfg, timestamp));
        }
        json arr = json::array();
        for (const ConvergenceRow& r : rows) {
            arr.push_back(
                {{"truncation", r.truncation}, {"g2", r.g2}, {"converged", r.converged}});
        }
        return json{{"rows", arr}};
    }
    throw config_error("unknown subcommand '" + sub + "'");
}

int emit_error(const std::string& subcommand, const std::string& message, int code) {
    const json err{{"error", {{"subcommand", subcommand}, {"message", message}}}};
    std::cerr << err.dump() << std::endl;
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"magnon blockade simulator: Lindblad steady states and weak-drive analytics"};
    app.require_subcommand(1);

    CliOptions cli;
    const std::vector<std::pair<std::string, std::string>> subs = {
        {"steady-state", "single-point g2(0), numeric and analytic channels"},
        {"sweep1d", "1-D parameter sweep of g2(0)"},
        {"sweep2d", "2-D parameter map of g2(0) with minimum localization"},
        {"optimal-delta", "optimal driven-magnon detuning from the blockade condition"},
        {"optimal-curve", "optimal detuning vs coupling ratio for a set of detunings"},
        {"thermal-sweep", "g2(0) vs temperature for the two blockade optima"},
        {"validate-adiabatic", "five-mode model vs adiabatically reduced model"},
        {"convergence", "g2(0) vs Fock truncation"}};
    for (const auto& [name, desc] : subs) {
        CLI::App* sub = app.add_subcommand(name, desc);
        sub->add_option("--config", cli.config_path, "JSON configuration file");
        sub->add_option("--set", cli.overrides, "key=value override (repeatable)");
        sub->add_option("--out", cli.out_path, "output path prefix");
        sub->add_option("--workers", cli.workers, "worker thread count");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return emit_error("", e.what(), 2);
    }
    const std::string subcommand = app.get_subcommands().front()->get_name();

    RunConfig cfg;
    try {
        cfg = build_config(subcommand, cli);
    } catch (const config_error& e) {
        return emit_error(subcommand, e.what(), 2);
    }

    try {
        const std::string timestamp = iso8601_utc_now();
        std::vector<std::pair<std::string, std::string>> files;
        const json result = run_subcommand(cfg, timestamp, files);
        const json doc = result_document(cfg, timestamp, result);
        if (cfg.output.json) {
            files.emplace_back("json", cfg.output.path + ".json");
            write_text_file(files.back().second, doc.dump(2) + "\n");
        }
        json summary{{"status", "ok"}, {"subcommand", subcommand}, {"result", result}};
        json outputs = json::array();
        for (const auto& [kind, path] : files) {
            outputs.push_back({{"kind", kind}, {"path", path}});
        }
        summary["outputs"] = outputs;
        std::cout << summary.dump(2) << std::endl;
        return 0;
    } catch (const config_error& e) {
        return emit_error(subcommand, e.what(), 2);
    } catch (const std::exception& e) {
        return emit_error(subcommand, e.what(), 3);
    }
}
