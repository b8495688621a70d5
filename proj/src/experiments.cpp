#include <magnon/experiments.hpp>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace magnon {

AxisSpec linspace_axis(std::string name, double min, double max, int count) {
    if (count < 2) throw std::invalid_argument("linspace_axis: count must be >= 2");
    if (!(max > min)) throw std::invalid_argument("linspace_axis: max must exceed min");
    AxisSpec axis{std::move(name), {}};
    axis.values.resize(count);
    for (int i = 0; i < count; ++i) {
        axis.values[i] = min + (max - min) * static_cast<double>(i) / (count - 1);
    }
    return axis;
}

void apply_axis(EffectiveParams& p, const std::string& name, double value) {
    if (name == "delta1") p.delta1 = value;
    else if (name == "delta2") p.delta2 = value;
    else if (name == "delta_q") p.delta_q = value;
    else if (name == "g1") p.g1 = value;
    else if (name == "g2") p.g2 = value;
    else if (name == "g2_ratio") p.g2 = value * p.g1;
    else if (name == "omega_drive") p.omega_drive = value;
    else throw std::invalid_argument("apply_axis: unknown axis name '" + name + "'");
}

namespace {

void check_axis(const AxisSpec& axis) {
    if (axis.values.size() < 2) {
        throw std::invalid_argument("sweep: axis '" + axis.name + "' needs at least 2 values");
    }
    for (std::size_t i = 1; i < axis.values.size(); ++i) {
        if (axis.values[i] <= axis.values[i - 1]) {
            throw std::invalid_argument("sweep: axis '" + axis.name + "' is not monotone");
        }
    }
}

int resolve_workers(int requested) {
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Per-worker state: cached operators for one truncation plus a reusable
// sparse solver so the symbolic analysis is shared between grid cells.
class EffectiveWorker {
public:
    explicit EffectiveWorker(int truncation) : space_({2, truncation, truncation}) {}

    double g2(const EffectiveParams& p) {
        const Operator h = build_effective_hamiltonian(p, space_);
        const SparseMatrix liou = build_liouvillian(h, effective_dissipators(p, space_));
        const DensityMatrix rho = solver_.solve(liou, space_);
        if (collect_) {
            herm_dev_ = std::max(herm_dev_, solver_.last_hermiticity_deviation());
            trace_dev_ = std::max(trace_dev_, solver_.last_trace_deviation());
            const Eigen::SelfAdjointEigenSolver<Matrix> es(rho.matrix(),
                                                           Eigen::EigenvaluesOnly);
            min_eig_ = std::min(min_eig_, es.eigenvalues().minCoeff());
            ++cells_;
        }
        return g2_zero(rho, 1);
    }

    void enable_stats() { collect_ = true; }
    PhysicalityStats stats() const { return {herm_dev_, trace_dev_, min_eig_, cells_}; }

private:
    HilbertSpace space_;
    SteadyStateSolver solver_;
    bool collect_{false};
    double herm_dev_{0.0};
    double trace_dev_{0.0};
    double min_eig_{std::numeric_limits<double>::infinity()};
    long cells_{0};
};

// Quadratic fit of log10 g2 on the 3x3 neighborhood of the argmin cell;
// stationary point clamped to the neighborhood. Boundary cells refine along
// the interior directions only (falls back to the grid coordinate).
std::pair<double, double> refine_minimum(const AxisSpec& a1, const AxisSpec& a2,
                                         const std::vector<double>& values, std::size_t cols,
                                         int i, int j) {
    const int n1 = static_cast<int>(a1.values.size());
    const int n2 = static_cast<int>(a2.values.size());
    if (i <= 0 || i >= n1 - 1 || j <= 0 || j >= n2 - 1) {
        return {a1.values[i], a2.values[j]};
    }
    Eigen::MatrixXd design(9, 6);
    Eigen::VectorXd rhs(9);
    int row = 0;
    for (int di = -1; di <= 1; ++di) {
        for (int dj = -1; dj <= 1; ++dj) {
            const double x = a1.values[i + di] - a1.values[i];
            const double y = a2.values[j + dj] - a2.values[j];
            const double v = values[(i + di) * cols + (j + dj)];
            if (!(v > 0.0) || !std::isfinite(v)) return {a1.values[i], a2.values[j]};
            design(row, 0) = 1.0;
            design(row, 1) = x;
            design(row, 2) = y;
            design(row, 3) = x * x;
            design(row, 4) = x * y;
            design(row, 5) = y * y;
            rhs(row) = std::log10(v);
            ++row;
        }
    }
    const Eigen::VectorXd c = design.colPivHouseholderQr().solve(rhs);
    Eigen::Matrix2d hess;
    hess << 2.0 * c(3), c(4), c(4), 2.0 * c(5);
    const Eigen::Vector2d grad(c(1), c(2));
    if (std::abs(hess.determinant()) < 1e-300) return {a1.values[i], a2.values[j]};
    const Eigen::Vector2d step = hess.fullPivLu().solve(-grad);
    const double x = std::clamp(a1.values[i] + step(0), a1.values[i - 1], a1.values[i + 1]);
    const double y = std::clamp(a2.values[j] + step(1), a2.values[j - 1], a2.values[j + 1]);
    return {x, y};
}

double refine_minimum_1d(const AxisSpec& axis, const std::vector<double>& values, int i) {
    const int n = static_cast<int>(axis.values.size());
    if (i <= 0 || i >= n - 1) return axis.values[i];
    // parabola through the three neighbors in log scale
    const double v0 = values[i - 1], v1 = values[i], v2 = values[i + 1];
    if (!(v0 > 0.0 && v1 > 0.0 && v2 > 0.0)) return axis.values[i];
    const double f0 = std::log10(v0), f1 = std::log10(v1), f2 = std::log10(v2);
    const double denom = f0 - 2.0 * f1 + f2;
    if (std::abs(denom) < 1e-300) return axis.values[i];
    const double h = 0.5 * (axis.values[i + 1] - axis.values[i - 1]);
    const double shift = 0.5 * (f0 - f2) / denom * h;
    return std::clamp(axis.values[i] + shift, axis.values[i - 1], axis.values[i + 1]);
}

void locate_minimum(SweepGrid& grid, const std::vector<double>& values,
                    const std::string& channel) {
    const std::size_t cols = grid.cols();
    double best = std::numeric_limits<double>::infinity();
    int bi = -1, bj = -1;
    for (std::size_t i = 0; i < grid.rows(); ++i) {
        for (std::size_t j = 0; j < cols; ++j) {
            const std::size_t k = i * cols + j;
            if (grid.unoccupied[k]) continue;
            const double v = values[k];
            if (std::isfinite(v) && v < best) {
                best = v;
                bi = static_cast<int>(i);
                bj = static_cast<int>(j);
            }
        }
    }
    if (bi < 0) return; // every cell flagged
    MinimumRecord rec;
    rec.channel = channel;
    rec.index1 = bi;
    rec.index2 = bj;
    rec.value = best;
    if (grid.is_2d()) {
        const auto [x, y] = refine_minimum(grid.axis1, grid.axis2, values, cols, bi, bj);
        rec.coord1 = x;
        rec.coord2 = y;
    } else {
        rec.coord1 = refine_minimum_1d(grid.axis1, values, bi);
        rec.coord2 = 0.0;
    }
    grid.minima.push_back(std::move(rec));
}

SweepGrid run_sweep(const EffectiveParams& base, const AxisSpec& axis1,
                    const AxisSpec* axis2, const SweepOptions& opts) {
    check_axis(axis1);
    if (axis2) check_axis(*axis2);
    if (opts.truncation < 3) {
        throw std::invalid_argument("sweep: magnon truncation must be >= 3");
    }

    SweepGrid grid;
    grid.axis1 = axis1;
    if (axis2) grid.axis2 = *axis2;
    const std::size_t n1 = axis1.values.size();
    const std::size_t n2 = axis2 ? axis2->values.size() : 1;
    const std::size_t cells = n1 * n2;
    const bool want_numeric = opts.channel != Channel::analytic;
    const bool want_analytic = opts.channel != Channel::numeric;
    const double nan = std::numeric_limits<double>::quiet_NaN();
    grid.numeric.assign(cells, nan);
    grid.analytic.assign(cells, nan);
    grid.unoccupied.assign(cells, 0);

    const int workers = static_cast<int>(
        std::min<std::size_t>(static_cast<std::size_t>(resolve_workers(opts.workers)), cells));
    std::atomic<std::size_t> next{0};
    std::vector<PhysicalityStats> worker_stats(workers);
    std::mutex error_mutex;
    std::exception_ptr first_error;

    auto work = [&](int wid) {
        try {
            EffectiveWorker worker(opts.truncation);
            if (opts.collect_physicality && want_numeric) worker.enable_stats();
            for (std::size_t k = next.fetch_add(1); k < cells; k = next.fetch_add(1)) {
                const std::size_t i = k / n2;
                const std::size_t j = k % n2;
                EffectiveParams p = base;
                apply_axis(p, axis1.name, axis1.values[i]);
                if (axis2) apply_axis(p, axis2->name, axis2->values[j]);
                if (want_analytic) {
                    try {
                        grid.analytic[k] = g2_analytic(p);
                    } catch (const degenerate_parameters_error&) {
                        grid.unoccupied[k] = 1;
                    }
                }
                if (want_numeric) {
                    try {
                        grid.numeric[k] = worker.g2(p);
                    } catch (const unoccupied_mode_error&) {
                        grid.unoccupied[k] = 1;
                    }
                }
            }
            worker_stats[wid] = worker.stats();
        } catch (...) {
            std::lock_guard<std::mutex> lock(error_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    };

    if (workers == 1) {
        work(0);
    } else {
        std::vector<std::thread> pool;
        pool.reserve(workers);
        for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
        for (std::thread& t : pool) t.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    if (want_numeric) locate_minimum(grid, grid.numeric, "numeric");
    if (want_analytic) locate_minimum(grid, grid.analytic, "analytic");
    if (opts.collect_physicality && want_numeric) {
        PhysicalityStats total;
        total.min_eigenvalue = std::numeric_limits<double>::infinity();
        for (const PhysicalityStats& s : worker_stats) {
            if (s.cells == 0) continue;
            total.max_hermiticity_dev = std::max(total.max_hermiticity_dev,
                                                 s.max_hermiticity_dev);
            total.max_trace_dev = std::max(total.max_trace_dev, s.max_trace_dev);
            total.min_eigenvalue = std::min(total.min_eigenvalue, s.min_eigenvalue);
            total.cells += s.cells;
        }
        grid.physicality = total;
    }
    return grid;
}

} // namespace

SweepGrid sweep_2d(const EffectiveParams& base, const AxisSpec& axis1, const AxisSpec& axis2,
                   const SweepOptions& opts) {
    return run_sweep(base, axis1, &axis2, opts);
}

SweepGrid sweep_1d(const EffectiveParams& base, const AxisSpec& axis, const SweepOptions& opts) {
    return run_sweep(base, axis, nullptr, opts);
}

std::vector<OptimalCurvePoint> optimal_curve(const std::vector<double>& g_ratios,
                                             const std::vector<double>& detunings,
                                             const EffectiveParams& base,
                                             double search_lo, double search_hi) {
    std::vector<OptimalCurvePoint> out;
    out.reserve(g_ratios.size() * detunings.size());
    for (double det : detunings) {
        for (double ratio : g_ratios) {
            EffectiveParams p = base;
            p.delta_q = det;
            p.delta2 = det;
            p.g2 = ratio * p.g1;
            const OptimalDelta opt = optimal_delta1(p, search_lo, search_hi);
            out.push_back({det, ratio, opt.delta1, opt.residual_modulus, opt.at_boundary});
        }
    }
    return out;
}

ThermalSweepResult thermal_sweep(const ThermalConfig& cfg,
                                 const std::vector<std::pair<std::string, EffectiveParams>>& sets,
                                 const std::vector<double>& temperatures,
                                 const SweepOptions& opts) {
    if (temperatures.empty()) {
        throw std::invalid_argument("thermal_sweep: empty temperature list");
    }
    for (std::size_t i = 0; i < temperatures.size(); ++i) {
        if (temperatures[i] < 0.0 || (i > 0 && temperatures[i] <= temperatures[i - 1])) {
            throw std::invalid_argument("thermal_sweep: temperatures must be >= 0, increasing");
        }
    }
    ThermalSweepResult result;
    result.temperatures = temperatures;
    ThermalConfig tc = cfg;
    for (double t : temperatures) {
        tc.temperature = t;
        result.n_th1.push_back(thermal_occupation(tc, 0));
        result.n_th2.push_back(thermal_occupation(tc, 1));
    }
    const HilbertSpace space({2, opts.truncation, opts.truncation});
    for (const auto& [label, params] : sets) {
        ThermalCurve curve;
        curve.label = label;
        curve.params = params;
        SteadyStateSolver solver;
        for (std::size_t k = 0; k < temperatures.size(); ++k) {
            EffectiveParams p = params;
            p.n_th1 = result.n_th1[k];
            p.n_th2 = result.n_th2[k];
            const Operator h = build_effective_hamiltonian(p, space);
            const SparseMatrix liou = build_liouvillian(h, effective_dissipators(p, space));
            curve.g2.push_back(g2_zero(solver.solve(liou, space), 1));
        }
        for (std::size_t k = 1; k < curve.g2.size(); ++k) {
            if (curve.g2[k - 1] < 1.0 && curve.g2[k] >= 1.0) {
                const double t0 = temperatures[k - 1], t1 = temperatures[k];
                const double f = (1.0 - curve.g2[k - 1]) / (curve.g2[k] - curve.g2[k - 1]);
                curve.crossing_kelvin = t0 + f * (t1 - t0);
                break;
            }
        }
        result.curves.push_back(std::move(curve));
    }
    return result;
}

ValidationReport adiabatic_validation(const FullModelParams& full, const EffectiveParams& decay,
                                      int n_magnon, int n_cavity) {
    const double regime_factor = 10.0;
    const double scale = std::max({std::abs(full.delta1_bare), std::abs(full.delta2_bare),
                                   std::abs(full.delta_q_bare), std::abs(full.g_m1),
                                   std::abs(full.g_m2), std::abs(full.g_q1),
                                   std::abs(full.g_q2), full.omega_drive, decay.kappa,
                                   decay.gamma});
    if (std::min(std::abs(full.delta_c1), std::abs(full.delta_c2)) < regime_factor * scale) {
        throw regime_violation_error(
            "adiabatic_validation: cavity detunings too small for the dispersive regime");
    }

    // five-mode steady state; the paper's elimination carries no cavity damping
    const HilbertSpace space({2, n_magnon, n_magnon, n_cavity, n_cavity});
    const Operator h = build_full_hamiltonian(full, space);
    const Operator sig = embed(qubit_lower(), space, 0);
    const Operator m1 = embed(annihilation(n_magnon), space, 1);
    const Operator m2 = embed(annihilation(n_magnon), space, 2);
    std::vector<Dissipator> ds;
    ds.push_back({m1, 0.5 * decay.kappa * (decay.n_th1 + 1.0)});
    ds.push_back({m2, 0.5 * decay.kappa * (decay.n_th2 + 1.0)});
    ds.push_back({sig, 0.5 * decay.gamma});
    if (decay.n_th1 > 0.0) ds.push_back({m1.adjoint(), 0.5 * decay.kappa * decay.n_th1});
    if (decay.n_th2 > 0.0) ds.push_back({m2.adjoint(), 0.5 * decay.kappa * decay.n_th2});

    ValidationReport report;
    {
        const SparseMatrix liou = build_liouvillian(h, ds);
        const DensityMatrix rho = steady_state(liou, space);
        report.g2_full = g2_zero(rho, 1);
    }

    EffectiveParams reduced = reduce_full_params(full);
    reduced.kappa = decay.kappa;
    reduced.gamma = decay.gamma;
    reduced.n_th1 = decay.n_th1;
    reduced.n_th2 = decay.n_th2;
    report.reduced = reduced;
    const HilbertSpace eff_space({2, n_magnon, n_magnon});
    report.g2_effective = g2_steady_effective(reduced, eff_space);

    const double floor = 1e-300;
    report.relative_deviation = std::abs(report.g2_full - report.g2_effective) /
                                std::max({std::abs(report.g2_full),
                                          std::abs(report.g2_effective), floor});
    return report;
}

std::vector<ConvergenceRow> convergence_check(const EffectiveParams& p,
                                              const std::vector<int>& truncations) {
    if (truncations.empty()) {
        throw std::invalid_argument("convergence_check: empty truncation list");
    }
    for (std::size_t i = 0; i < truncations.size(); ++i) {
        if (truncations[i] < 3 || (i > 0 && truncations[i] <= truncations[i - 1])) {
            throw std::invalid_argument("convergence_check: truncations must be >= 3, increasing");
        }
    }
    std::vector<ConvergenceRow> rows;
    for (int n : truncations) {
        ConvergenceRow row;
        row.truncation = n;
        row.g2 = g2_steady_effective(p, HilbertSpace({2, n, n}));
        if (!rows.empty()) {
            const double prev = rows.back().g2;
            row.converged = std::abs(row.g2 - prev) < 1e-6 * std::max(std::abs(row.g2),
                                                                      std::abs(prev));
        }
        rows.push_back(row);
    }
    return rows;
}

} // namespace magnon
