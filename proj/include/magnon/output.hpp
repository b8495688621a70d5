// output.hpp — Plot-ready serialization: CSV tables with a metadata header,
// JSON result documents, and a dependency-free SVG heatmap.

#pragma once

#include <magnon/config.hpp>
#include <magnon/experiments.hpp>

#include <nlohmann/json_fwd.hpp>

#include <string>

namespace magnon {

// %.17g: round-trip exact for doubles
std::string fmt17(double v);

// FNV-1a 64-bit, hex-encoded; applied to the CSV data rows
std::string fnv1a_hex(const std::string& bytes);

// Common "# key=value" metadata block: version, timestamp (isolated line),
// subcommand, grid hash and the full config echo as one JSON line.
std::string csv_metadata_header(const RunConfig& cfg, const std::string& timestamp,
                                const std::string& grid_hash);

std::string sweep_grid_csv(const SweepGrid& grid, const RunConfig& cfg,
                           const std::string& timestamp);
std::string thermal_csv(const ThermalSweepResult& result, const RunConfig& cfg,
                        const std::string& timestamp);
std::string optimal_curve_csv(const std::vector<OptimalCurvePoint>& points,
                              const RunConfig& cfg, const std::string& timestamp);
std::string convergence_csv(const std::vector<ConvergenceRow>& rows, const RunConfig& cfg,
                            const std::string& timestamp);

nlohmann::json sweep_grid_json(const SweepGrid& grid);
nlohmann::json thermal_json(const ThermalSweepResult& result);
nlohmann::json validation_json(const ValidationReport& report);

// Result document wrapper: meta (version, timestamp, subcommand), config echo
// and the payload under "result".
nlohmann::json result_document(const RunConfig& cfg, const std::string& timestamp,
                               const nlohmann::json& result);

struct HeatmapStyle {
    int cell_px{4};        // nominal cell size; clamped so the plot stays <= ~900 px wide
    std::string title;
    bool log_scale{true};  // log10 color mapping
};

// Static SVG 1.1 heatmap with axis labels, colorbar and dashed crosshairs on
// the channel minimum. Throws on 1-D grids (use the CSV line output).
std::string render_heatmap(const SweepGrid& grid, const std::string& channel,
                           const HeatmapStyle& style);

std::string iso8601_utc_now();

void write_text_file(const std::string& path, const std::string& content);

} // namespace magnon
