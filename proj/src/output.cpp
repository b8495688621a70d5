#include <magnon/output.hpp>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace magnon {

using nlohmann::json;

namespace {
constexpr const char* kVersion = "0.1.0";
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

std::string iso8601_utc_now() {
    const std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("cannot open output file '" + path + "'");
    }
    out << content;
    if (!out) {
        throw std::runtime_error("failed writing output file '" + path + "'");
    }
}

std::string csv_metadata_header(const RunConfig& cfg, const std::string& timestamp,
                                const std::string& grid_hash) {
    std::ostringstream out;
    out << "# magnon_sim " << kVersion << "\n";
    out << "# timestamp=" << timestamp << "\n";
    out << "# subcommand=" << cfg.subcommand << "\n";
    out << "# grid_hash=" << grid_hash << "\n";
    out << "# config=" << serialize_config(cfg).dump() << "\n";
    return out.str();
}

namespace {

std::string grid_rows_csv(const SweepGrid& grid) {
    std::ostringstream out;
    const std::size_t cols = grid.cols();
    for (std::size_t i = 0; i < grid.rows(); ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            const std::size_t k = i * cols + j;
            out << fmt17(grid.axis1.values[i]) << ',';
            if (grid.is_2d()) out << fmt17(grid.axis2.values[j]);
            out << ',';
            if (std::isfinite(grid.numeric[k])) out << fmt17(grid.numeric[k]);
            out << ',';
            if (std::isfinite(grid.analytic[k])) out << fmt17(grid.analytic[k]);
            out << ',' << (grid.unoccupied[k] ? 1 : 0) << "\n";
        }
    }
    return out.str();
}

std::string minima_lines(const SweepGrid& grid) {
    std::ostringstream out;
    for (const MinimumRecord& m : grid.minima) {
        out << "# minimum channel=" << m.channel << " axis1=" << fmt17(m.coord1);
        if (grid.is_2d()) out << " axis2=" << fmt17(m.coord2);
        out << " value=" << fmt17(m.value) << "\n";
    }
    return out.str();
}

} // namespace

std::string sweep_grid_csv(const SweepGrid& grid, const RunConfig& cfg,
                           const std::string& timestamp) {
    const std::string rows = grid_rows_csv(grid);
    std::ostringstream out;
    out << csv_metadata_header(cfg, timestamp, fnv1a_hex(rows));
    out << minima_lines(grid);
    out << "axis1,axis2,g2_numeric,g2_analytic,flag\n";
    out << rows;
    return out.str();
}

std::string thermal_csv(const ThermalSweepResult& result, const RunConfig& cfg,
                        const std::string& timestamp) {
    std::ostringstream rows;
    for (std::size_t k = 0; k < result.temperatures.size(); ++k) {
        rows << fmt17(result.temperatures[k] * 1e3) << ',' << fmt17(result.n_th1[k]) << ','
             << fmt17(result.n_th2[k]);
        for (const ThermalCurve& c : result.curves) rows << ',' << fmt17(c.g2[k]);
        rows << "\n";
    }
    std::ostringstream out;
    out << csv_metadata_header(cfg, timestamp, fnv1a_hex(rows.str()));
    for (const ThermalCurve& c : result.curves) {
        out << "# crossing " << c.label << "=";
        if (c.crossing_kelvin) out << fmt17(*c.crossing_kelvin * 1e3) << " mK";
        else out << "none";
        out << "\n";
    }
    out << "temperature_mk,n_th1,n_th2";
    for (const ThermalCurve& c : result.curves) out << ",g2_" << c.label;
    out << "\n" << rows.str();
    return out.str();
}

std::string optimal_curve_csv(const std::vector<OptimalCurvePoint>& points,
                              const RunConfig& cfg, const std::string& timestamp) {
    std::ostringstream rows;
    for (const OptimalCurvePoint& p : points) {
        rows << fmt17(p.detuning) << ',' << fmt17(p.g_ratio) << ',' << fmt17(p.delta1_opt)
             << ',' << fmt17(p.residual_modulus) << ',' << (p.at_boundary ? 1 : 0) << "\n";
    }
    std::ostringstream out;
    out << csv_metadata_header(cfg, timestamp, fnv1a_hex(rows.str()));
    out << "delta_q2,g2_ratio,delta1_opt,residual,boundary_flag\n";
    out << rows.str();
    return out.str();
}

std::string convergence_csv(const std::vector<ConvergenceRow>& rows, const RunConfig& cfg,
                            const std::string& timestamp) {
    std::ostringstream body;
    for (const ConvergenceRow& r : rows) {
        body << r.truncation << ',' << fmt17(r.g2) << ',' << (r.converged ? 1 : 0) << "\n";
    }
    std::ostringstream out;
    out << csv_metadata_header(cfg, timestamp, fnv1a_hex(body.str()));
    out << "truncation,g2_numeric,converged\n";
    out << body.str();
    return out.str();
}

namespace {

json minima_json(const SweepGrid& grid) {
    json arr = json::array();
    for (const MinimumRecord& m : grid.minima) {
        json rec{{"channel", m.channel}, {"axis1", m.coord1},   {"index1", m.index1},
                 {"index2", m.index2},   {"value", m.value}};
        if (grid.is_2d()) rec["axis2"] = m.coord2;
        arr.push_back(rec);
    }
    return arr;
}

} // namespace

json sweep_grid_json(const SweepGrid& grid) {
    json out{{"axis1", {{"name", grid.axis1.name}, {"values", grid.axis1.values}}},
             {"minima", minima_json(grid)}};
    if (grid.is_2d()) {
        out["axis2"] = {{"name", grid.axis2.name}, {"values", grid.axis2.values}};
    }
    if (grid.physicality) {
        out["physicality"] = {{"max_hermiticity_dev", grid.physicality->max_hermiticity_dev},
                              {"max_trace_dev", grid.physicality->max_trace_dev},
                              {"min_eigenvalue", grid.physicality->min_eigenvalue},
                              {"cells", grid.physicality->cells}};
    }
    return out;
}

json thermal_json(const ThermalSweepResult& result) {
    json curves = json::array();
    for (const ThermalCurve& c : result.curves) {
        json entry{{"label", c.label}, {"g2", c.g2}};
        entry["crossing_mk"] =
            c.crossing_kelvin ? json(*c.crossing_kelvin * 1e3) : json(nullptr);
        curves.push_back(entry);
    }
    return json{{"temperatures_mk", [&] {
                     std::vector<double> mk;
                     mk.reserve(result.temperatures.size());
                     for (double t : result.temperatures) mk.push_back(t * 1e3);
                     return mk;
                 }()},
                {"n_th1", result.n_th1},
                {"n_th2", result.n_th2},
                {"curves", curves}};
}

json validation_json(const ValidationReport& report) {
    return json{{"g2_full", report.g2_full},
                {"g2_effective", report.g2_effective},
                {"relative_deviation", report.relative_deviation},
                {"reduced",
                 {{"delta1", report.reduced.delta1},
                  {"delta2", report.reduced.delta2},
                  {"delta_q", report.reduced.delta_q},
                  {"g1", report.reduced.g1},
                  {"g2", report.reduced.g2},
                  {"omega_drive", report.reduced.omega_drive},
                  {"kappa", report.reduced.kappa},
                  {"gamma", report.reduced.gamma},
                  {"n_th1", report.reduced.n_th1},
                  {"n_th2", report.reduced.n_th2}}}};
}

json result_document(const RunConfig& cfg, const std::string& timestamp, const json& result) {
    return json{{"meta",
                 {{"tool", "magnon_sim"},
                  {"version", kVersion},
                  {"timestamp", timestamp},
                  {"subcommand", cfg.subcommand}}},
                {"config", serialize_config(cfg)},
                {"result", result}};
}

// ---------------------------------- heatmap ----------------------------------

namespace {

struct Rgb {
    double r, g, b;
};

// viridis anchor points
constexpr Rgb kViridis[] = {
    {0.267, 0.004, 0.329}, {0.283, 0.141, 0.458}, {0.254, 0.265, 0.530},
    {0.207, 0.372, 0.553}, {0.164, 0.471, 0.558}, {0.128, 0.567, 0.551},
    {0.135, 0.659, 0.518}, {0.267, 0.749, 0.441}, {0.478, 0.821, 0.318},
    {0.741, 0.873, 0.150}, {0.993, 0.906, 0.144}};

std::string color_hex(double t) {
    t = std::clamp(t, 0.0, 1.0);
    const int n = static_cast<int>(std::size(kViridis)) - 1;
    const double x = t * n;
    const int lo = std::min(static_cast<int>(x), n - 1);
    const double f = x - lo;
    const Rgb a = kViridis[lo], b = kViridis[lo + 1];
    const int r = static_cast<int>(std::lround(255.0 * (a.r + f * (b.r - a.r))));
    const int g = static_cast<int>(std::lround(255.0 * (a.g + f * (b.g - a.g))));
    const int bl = static_cast<int>(std::lround(255.0 * (a.b + f * (b.b - a.b))));
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, bl);
    return buf;
}

std::string fmt_tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

} // namespace

std::string render_heatmap(const SweepGrid& grid, const std::string& channel,
                           const HeatmapStyle& style) {
    if (!grid.is_2d()) {
        throw std::invalid_argument(
            "render_heatmap: 1-D grid; use the CSV line output for curves");
    }
    const std::vector<double>& values = channel == "analytic" ? grid.analytic : grid.numeric;
    const std::size_t n1 = grid.rows();    // x cells (axis1)
    const std::size_t n2 = grid.cols();    // y cells (axis2)

    // color range over finite, unflagged cells
    double vmin = std::numeric_limits<double>::infinity();
    double vmax = -std::numeric_limits<double>::infinity();
    auto mapped = [&](double v) { return style.log_scale ? std::log10(v) : v; };
    for (std::size_t k = 0; k < values.size(); ++k) {
        const double v = values[k];
        if (grid.unoccupied[k] || !std::isfinite(v) || (style.log_scale && v <= 0.0)) continue;
        vmin = std::min(vmin, mapped(v));
        vmax = std::max(vmax, mapped(v));
    }
    const bool degenerate = !(vmax > vmin);  // constant grid: single color
    auto normalized = [&](double v) {
        if (degenerate) return 0.5;
        return (mapped(v) - vmin) / (vmax - vmin);
    };

    const int cell = std::max(1, std::min(style.cell_px, static_cast<int>(900 / n1)));
    const double plot_w = static_cast<double>(cell) * n1;
    const double plot_h = static_cast<double>(cell) * n2;
    const double ml = 64, mt = 28, mb = 46, mr = 96;
    const double width = ml + plot_w + mr;
    const double height = mt + plot_h + mb;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height
        << "\">\n";
    svg << "<style>text{font-family:sans-serif;font-size:11px;}"
           ".cell{stroke:none;}.crosshair{stroke:#ffffff;stroke-dasharray:4 3;"
           "stroke-width:1.2;fill:none;}</style>\n";
    if (!style.title.empty()) {
        svg << "<text x=\"" << ml + plot_w / 2 << "\" y=\"16\" text-anchor=\"middle\">"
            << style.title << "</text>\n";
    }

    // cells: axis1 along x, axis2 along y (origin bottom-left)
    for (std::size_t i = 0; i < n1; ++i) {
        for (std::size_t j = 0; j < n2; ++j) {
            const std::size_t k = i * n2 + j;
            const double x = ml + static_cast<double>(i) * cell;
            const double y = mt + plot_h - static_cast<double>(j + 1) * cell;
            std::string fill = "#b0b0b0";  // flagged/unoccupied
            const double v = values[k];
            if (!grid.unoccupied[k] && std::isfinite(v) && (!style.log_scale || v > 0.0)) {
                fill = color_hex(normalized(v));
            }
            svg << "<rect class=\"cell\" x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell
                << "\" height=\"" << cell << "\" fill=\"" << fill << "\"/>\n";
        }
    }

    // crosshair on the requested channel's minimum
    for (const MinimumRecord& m : grid.minima) {
        if (m.channel != channel) continue;
        const double fx = (m.coord1 - grid.axis1.values.front()) /
                          (grid.axis1.values.back() - grid.axis1.values.front());
        const double fy = (m.coord2 - grid.axis2.values.front()) /
                          (grid.axis2.values.back() - grid.axis2.values.front());
        // cell centers span [half-cell, plot - half-cell]
        const double cx = ml + fx * (plot_w - cell) + cell / 2.0;
        const double cy = mt + plot_h - (fy * (plot_h - cell) + cell / 2.0);
        svg << "<line class=\"crosshair\" x1=\"" << cx << "\" y1=\"" << mt << "\" x2=\"" << cx
            << "\" y2=\"" << mt + plot_h << "\"/>\n";
        svg << "<line class=\"crosshair\" x1=\"" << ml << "\" y1=\"" << cy << "\" x2=\""
            << ml + plot_w << "\" y2=\"" << cy << "\"/>\n";
    }

    // axis labels and end ticks
    svg << "<text x=\"" << ml + plot_w / 2 << "\" y=\"" << height - 10
        << "\" text-anchor=\"middle\">" << grid.axis1.name << "</text>\n";
    svg << "<text x=\"14\" y=\"" << mt + plot_h / 2
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 14 " << mt + plot_h / 2 << ")\">"
        << grid.axis2.name << "</text>\n";
    svg << "<text x=\"" << ml << "\" y=\"" << height - 28 << "\" text-anchor=\"middle\">"
        << fmt_tick(grid.axis1.values.front()) << "</text>\n";
    svg << "<text x=\"" << ml + plot_w << "\" y=\"" << height - 28
        << "\" text-anchor=\"middle\">" << fmt_tick(grid.axis1.values.back()) << "</text>\n";
    svg << "<text x=\"" << ml - 6 << "\" y=\"" << mt + plot_h << "\" text-anchor=\"end\">"
        << fmt_tick(grid.axis2.values.front()) << "</text>\n";
    svg << "<text x=\"" << ml - 6 << "\" y=\"" << mt + 10 << "\" text-anchor=\"end\">"
        << fmt_tick(grid.axis2.values.back()) << "</text>\n";

    // colorbar
    const double bx = ml + plot_w + 24, bw = 14;
    svg << "<defs><linearGradient id=\"cb\" x1=\"0\" y1=\"1\" x2=\"0\" y2=\"0\">\n";
    for (int s = 0; s <= 10; ++s) {
        svg << "<stop offset=\"" << s * 10 << "%\" stop-color=\""
            << color_hex(degenerate ? 0.5 : s / 10.0) << "\"/>\n";
    }
    svg << "</linearGradient></defs>\n";
    svg << "<rect x=\"" << bx << "\" y=\"" << mt << "\" width=\"" << bw << "\" height=\""
        << plot_h << "\" fill=\"url(#cb)\" stroke=\"#404040\"/>\n";
    const std::string label = style.log_scale ? "log10 g2(0)" : "g2(0)";
    svg << "<text x=\"" << bx + bw / 2 << "\" y=\"" << mt - 8 << "\" text-anchor=\"middle\">"
        << label << "</text>\n";
    if (!degenerate) {
        svg << "<text x=\"" << bx + bw + 4 << "\" y=\"" << mt + plot_h << "\">" << fmt_tick(vmin)
            << "</text>\n";
        svg << "<text x=\"" << bx + bw + 4 << "\" y=\"" << mt + 10 << "\">" << fmt_tick(vmax)
            << "</text>\n";
    } else if (std::isfinite(vmin)) {
        svg << "<text x=\"" << bx + bw + 4 << "\" y=\"" << mt + plot_h / 2 << "\">"
            << fmt_tick(vmin) << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

} // namespace magnon
