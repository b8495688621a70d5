#include <magnon/lindblad.hpp>

#include <cmath>
#include <stdexcept>

namespace magnon {

DensityMatrix::DensityMatrix(HilbertSpace space, Matrix matrix)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() != space_.total_dim()) {
        throw std::invalid_argument("DensityMatrix: matrix size does not match space");
    }
}

namespace {

// Append triplets of scale * (A kron B).
void append_kron(std::vector<Triplet>& out, const Matrix& a, const Matrix& b, Complex scale) {
    const Eigen::Index db = b.rows();
    for (Eigen::Index ia = 0; ia < a.rows(); ++ia) {
        for (Eigen::Index ja = 0; ja < a.cols(); ++ja) {
            const Complex va = a(ia, ja);
            if (va == Complex(0.0)) continue;
            for (Eigen::Index ib = 0; ib < db; ++ib) {
                for (Eigen::Index jb = 0; jb < db; ++jb) {
                    const Complex vb = b(ib, jb);
                    if (vb == Complex(0.0)) continue;
                    out.emplace_back(ia * db + ib, ja * db + jb, scale * va * vb);
                }
            }
        }
    }
}

// A kron I and I kron A without materializing identities.
void append_kron_id_right(std::vector<Triplet>& out, const Matrix& a, Eigen::Index d,
                          Complex scale) {
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            const Complex v = a(i, j);
            if (v == Complex(0.0)) continue;
            for (Eigen::Index k = 0; k < d; ++k) {
                out.emplace_back(i * d + k, j * d + k, scale * v);
            }
        }
    }
}

void append_kron_id_left(std::vector<Triplet>& out, const Matrix& a, Eigen::Index d,
                         Complex scale) {
    for (Eigen::Index k = 0; k < d; ++k) {
        for (Eigen::Index i = 0; i < a.rows(); ++i) {
            for (Eigen::Index j = 0; j < a.cols(); ++j) {
                const Complex v = a(i, j);
                if (v == Complex(0.0)) continue;
                out.emplace_back(k * a.rows() + i, k * a.cols() + j, scale * v);
            }
        }
    }
}

} // namespace

SparseMatrix build_liouvillian(const Operator& hamiltonian,
                               const std::vector<Dissipator>& dissipators) {
    const HilbertSpace& space = hamiltonian.space();
    for (const Dissipator& d : dissipators) {
        if (d.op.space() != space) {
            throw std::invalid_argument("build_liouvillian: mixed Hilbert spaces");
        }
        if (d.rate < 0.0) {
            throw std::invalid_argument("build_liouvillian: dissipator rate must be >= 0");
        }
    }
    const Eigen::Index d = space.total_dim();
    const Matrix& h = hamiltonian.matrix();

    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(d) * d * 4);
    // -i [H, rho]  ->  -i (I kron H) + i (H^T kron I)
    append_kron_id_left(trips, h, d, -kImag);
    append_kron_id_right(trips, h.transpose(), d, kImag);
    for (const Dissipator& dis : dissipators) {
        const Matrix& o = dis.op.matrix();
        const Matrix od = o.adjoint() * o;
        append_kron(trips, o.conjugate(), o, Complex(2.0 * dis.rate));
        append_kron_id_left(trips, od, d, Complex(-dis.rate));
        append_kron_id_right(trips, od.transpose(), d, Complex(-dis.rate));
    }
    SparseMatrix liou(d * d, d * d);
    liou.setFromTriplets(trips.begin(), trips.end());
    return liou;
}

namespace {

// Diagonal row (vec index i*(D+1)) with the largest |L_jj|; lowest index wins ties.
Eigen::Index trace_replacement_row(const SparseMatrix& liou, Eigen::Index d) {
    Eigen::Index best = 0;
    double best_mag = -1.0;
    for (Eigen::Index i = 0; i < d; ++i) {
        const Eigen::Index j = i * (d + 1);
        const double mag = std::abs(liou.coeff(j, j));
        if (mag > best_mag) {
            best_mag = mag;
            best = j;
        }
    }
    return best;
}

SparseMatrix trace_replaced_system(const SparseMatrix& liou, Eigen::Index d,
                                   Eigen::Index row) {
    std::vector<Triplet> trips;
    trips.reserve(static_cast<std::size_t>(liou.nonZeros()) + d);
    for (int k = 0; k < liou.outerSize(); ++k) {
        for (SparseMatrix::InnerIterator it(liou, k); it; ++it) {
            if (it.row() != row) {
                trips.emplace_back(it.row(), it.col(), it.value());
            }
        }
    }
    for (Eigen::Index i = 0; i < d; ++i) {
        trips.emplace_back(row, i * (d + 1), Complex(1.0));
    }
    SparseMatrix sys(d * d, d * d);
    sys.setFromTriplets(trips.begin(), trips.end());
    return sys;
}

} // namespace

DensityMatrix SteadyStateSolver::solve(const SparseMatrix& liouvillian,
                                       const HilbertSpace& space) {
    const Eigen::Index d = space.total_dim();
    if (liouvillian.rows() != d * d || liouvillian.cols() != d * d) {
        throw std::invalid_argument("steady_state: Liouvillian size does not match space");
    }
    const Eigen::Index row = trace_replacement_row(liouvillian, d);
    const SparseMatrix sys = trace_replaced_system(liouvillian, d, row);

    if (!analyzed_ || pattern_rows_ != sys.rows()) {
        lu_.analyzePattern(sys);
        analyzed_ = true;
        pattern_rows_ = sys.rows();
    }
    lu_.factorize(sys);
    if (lu_.info() != Eigen::Success) {
        // pattern may differ between calls (e.g. couplings switched on/off)
        lu_.analyzePattern(sys);
        lu_.factorize(sys);
        if (lu_.info() != Eigen::Success) {
            throw std::runtime_error("steady_state: singular system, no unique steady state");
        }
    }
    Vector b = Vector::Zero(d * d);
    b(row) = 1.0;
    Vector x = lu_.solve(b);
    // iterative refinement keeps the small graded elements componentwise accurate
    for (int pass = 0; pass < 2; ++pass) {
        Vector r = b - sys * x;
        if (r.cwiseAbs().maxCoeff() < 1e-16) break;
        x += lu_.solve(r);
    }

    Matrix rho = Eigen::Map<const Matrix>(x.data(), d, d);
    last_herm_dev_ = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    last_trace_dev_ = std::abs(rho.trace() - Complex(1.0));
    rho = 0.5 * (rho + rho.adjoint()).eval();
    const double tr = rho.trace().real();
    if (std::abs(tr) < 1e-300) {
        throw std::runtime_error("steady_state: zero-trace solution, no unique steady state");
    }
    rho /= tr;

    const Vector vec_rho = Eigen::Map<const Vector>(rho.data(), d * d);
    const double residual = (liouvillian * vec_rho).cwiseAbs().maxCoeff();
    if (residual > 1e-10) {
        throw std::runtime_error("steady_state: residual above tolerance, no unique steady state");
    }
    return DensityMatrix(space, std::move(rho));
}

DensityMatrix steady_state(const SparseMatrix& liouvillian, const HilbertSpace& space) {
    SteadyStateSolver solver;
    return solver.solve(liouvillian, space);
}

Complex expectation(const DensityMatrix& rho, const Operator& op) {
    if (rho.space() != op.space()) {
        throw std::invalid_argument("expectation: state and operator on different spaces");
    }
    return (rho.matrix() * op.matrix()).trace();
}

double g2_zero(const DensityMatrix& rho, std::size_t mode_position) {
    const HilbertSpace& space = rho.space();
    const Operator m = embed(annihilation(space.dim(mode_position)), space, mode_position);
    const Matrix& md = m.matrix().adjoint();
    const Matrix num_op = md * md * m.matrix() * m.matrix();
    const Complex occ = (rho.matrix() * (md * m.matrix())).trace();
    if (occ.real() <= kOccupationFloor) {
        throw unoccupied_mode_error("g2_zero: mode occupation below floor, correlation undefined");
    }
    const Complex num = (rho.matrix() * num_op).trace();
    if (std::abs(num) > 0.0 && std::abs(num.imag()) > 1e-10 * std::abs(num)) {
        throw std::runtime_error("g2_zero: non-real correlation numerator");
    }
    return num.real() / (occ.real() * occ.real());
}

double thermal_occupation(const ThermalConfig& cfg, std::size_t which_mode) {
    if (cfg.temperature < 0.0) {
        throw std::invalid_argument("thermal_occupation: temperature must be >= 0");
    }
    const double omega = which_mode == 0 ? cfg.omega1 : cfg.omega2;
    if (omega <= 0.0) {
        throw std::invalid_argument("thermal_occupation: frequency must be > 0");
    }
    if (cfg.temperature == 0.0) return 0.0;
    constexpr double hbar = 1.054571817e-34; // J s
    constexpr double k_b = 1.380649e-23;     // J/K
    const double x = hbar * omega / (k_b * cfg.temperature);
    const double denom = std::expm1(x);
    if (!std::isfinite(denom)) return 0.0; // deep quantum limit underflows to 0
    return 1.0 / denom;
}

std::vector<Dissipator> effective_dissipators(const EffectiveParams& p,
                                              const HilbertSpace& space) {
    const Operator sig = embed(qubit_lower(), space, 0);
    const Operator m1 = embed(annihilation(space.dim(1)), space, 1);
    const Operator m2 = embed(annihilation(space.dim(2)), space, 2);
    std::vector<Dissipator> ds;
    ds.push_back({m1, 0.5 * p.kappa * (p.n_th1 + 1.0)});
    ds.push_back({m2, 0.5 * p.kappa * (p.n_th2 + 1.0)});
    ds.push_back({sig, 0.5 * p.gamma});
    if (p.n_th1 > 0.0) ds.push_back({m1.adjoint(), 0.5 * p.kappa * p.n_th1});
    if (p.n_th2 > 0.0) ds.push_back({m2.adjoint(), 0.5 * p.kappa * p.n_th2});
    return ds;
}

double g2_steady_effective(const EffectiveParams& p, const HilbertSpace& space) {
    const Operator h = build_effective_hamiltonian(p, space);
    const SparseMatrix liou = build_liouvillian(h, effective_dissipators(p, space));
    const DensityMatrix rho = steady_state(liou, space);
    return g2_zero(rho, 1);
}

} // namespace magnon
