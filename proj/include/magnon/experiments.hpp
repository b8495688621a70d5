// experiments.hpp — Parameter sweeps, optimal-detuning curves, thermal
// robustness scans, the full-model/effective-model validation and truncation
// convergence tables. Grid points run on an embarrassingly parallel worker
// pool writing into pre-allocated slots; aggregation is single-threaded.

#pragma once

#include <magnon/analytic.hpp>
#include <magnon/lindblad.hpp>

#include <optional>
#include <string>
#include <vector>

namespace magnon {

enum class Channel { analytic, numeric, both };

struct AxisSpec {
    std::string name;           // delta1, delta2, delta_q, g1, g2, g2_ratio, omega_drive
    std::vector<double> values; // monotone
};

AxisSpec linspace_axis(std::string name, double min, double max, int count);

// Applies one axis value to a parameter set (g2_ratio sets g2 = value * g1).
void apply_axis(EffectiveParams& p, const std::string& name, double value);

struct MinimumRecord {
    std::string channel;  // "numeric" or "analytic"
    double coord1{0.0};   // refined coordinates
    double coord2{0.0};   // unused for 1-D grids
    int index1{0};        // grid argmin cell
    int index2{0};
    double value{0.0};    // grid value at the argmin cell
};

// Solver health collected across a sweep (pre-Hermitization deviations and
// the most negative steady-state eigenvalue).
struct PhysicalityStats {
    double max_hermiticity_dev{0.0};
    double max_trace_dev{0.0};
    double min_eigenvalue{0.0};
    long cells{0};
};

struct SweepGrid {
    AxisSpec axis1;
    AxisSpec axis2;                       // empty values => 1-D grid
    std::vector<double> numeric;          // row-major axis1 x axis2; NaN if skipped
    std::vector<double> analytic;
    std::vector<uint8_t> unoccupied;      // flagged cells, excluded from minima
    std::vector<MinimumRecord> minima;    // one per computed channel
    std::optional<PhysicalityStats> physicality;

    bool is_2d() const { return !axis2.values.empty(); }
    std::size_t rows() const { return axis1.values.size(); }
    std::size_t cols() const { return is_2d() ? axis2.values.size() : 1; }
    double& at(std::vector<double>& v, std::size_t i, std::size_t j) {
        return v[i * cols() + j];
    }
};

struct SweepOptions {
    Channel channel{Channel::both};
    int truncation{4};
    int workers{0};                 // 0 = hardware concurrency
    bool collect_physicality{false};
};

SweepGrid sweep_2d(const EffectiveParams& base, const AxisSpec& axis1, const AxisSpec& axis2,
                   const SweepOptions& opts);

SweepGrid sweep_1d(const EffectiveParams& base, const AxisSpec& axis, const SweepOptions& opts);

// ------------------------------ optimal curves -------------------------------

struct OptimalCurvePoint {
    double detuning{0.0};  // common delta_q = delta_2 value
    double g_ratio{0.0};
    double delta1_opt{0.0};
    double residual_modulus{0.0};
    bool at_boundary{false};
};

// delta1_opt(g2/g1; delta_q = delta_2) via the blockade-residual minimizer.
std::vector<OptimalCurvePoint> optimal_curve(const std::vector<double>& g_ratios,
                                             const std::vector<double>& detunings,
                                             const EffectiveParams& base,
                                             double search_lo, double search_hi);

// ------------------------------- thermal sweep -------------------------------

struct ThermalCurve {
    std::string label;
    EffectiveParams params;                // detunings/couplings of this optimum
    std::vector<double> g2;                // one per temperature
    std::optional<double> crossing_kelvin; // first upward crossing of g2 = 1
};

struct ThermalSweepResult {
    std::vector<double> temperatures;  // kelvin, increasing
    std::vector<double> n_th1;
    std::vector<double> n_th2;
    std::vector<ThermalCurve> curves;
};

ThermalSweepResult thermal_sweep(const ThermalConfig& cfg,
                                 const std::vector<std::pair<std::string, EffectiveParams>>& sets,
                                 const std::vector<double>& temperatures,
                                 const SweepOptions& opts);

// --------------------------- adiabatic validation ----------------------------

struct ValidationReport {
    double g2_full{0.0};
    double g2_effective{0.0};
    double relative_deviation{0.0};
    EffectiveParams reduced;  // effective parameters used for the comparison
};

class regime_violation_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Five-mode steady state (cavity truncation n_cavity, no cavity dissipator)
// against the reduced effective model. kappa/gamma/thermal occupations are
// supplied through `decay` (its detunings/couplings are ignored).
ValidationReport adiabatic_validation(const FullModelParams& full, const EffectiveParams& decay,
                                      int n_magnon, int n_cavity);

// ----------------------------- convergence table -----------------------------

struct ConvergenceRow {
    int truncation{0};
    double g2{0.0};
    bool converged{false};  // successive values differ < 1e-6 relative
};

std::vector<ConvergenceRow> convergence_check(const EffectiveParams& p,
                                              const std::vector<int>& truncations);

} // namespace magnon
