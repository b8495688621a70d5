// lindblad.hpp — Liouvillian superoperator assembly, steady-state solve, and
// steady-state observables (populations, g2(0), thermal occupations).

#pragma once

#include <magnon/hilbert.hpp>
#include <magnon/types.hpp>

#include <vector>

namespace magnon {

// Collapse operator with the full prefactor multiplying L[O]rho = 2 O rho O+
// - O+O rho - rho O+O, i.e. kappa/2 (n_th+1), kappa/2 n_th or gamma/2. With
// this convention a bare damped mode's population decays at exactly kappa.
struct Dissipator {
    Operator op;
    double rate{0.0};
};

class DensityMatrix {
public:
    DensityMatrix() = default;
    DensityMatrix(HilbertSpace space, Matrix matrix);

    const HilbertSpace& space() const { return space_; }
    const Matrix& matrix() const { return matrix_; }

private:
    HilbertSpace space_;
    Matrix matrix_;
};

// Absolute-unit bridge for the Bose factor. Frequencies in rad/s, temperature
// in kelvin.
struct ThermalConfig {
    double omega1{0.0};
    double omega2{0.0};
    double temperature{0.0};
    double kappa_absolute{0.0};
};

// ------------------------------ superoperator -------------------------------

// Column-stacking Liouvillian: vec(rho') = L vec(rho) with
//   L = -i (I kron H - H^T kron I)
//     + sum rate (2 conj(O) kron O - I kron O+O - (O+O)^T kron I).
// Sparse; dimension D^2 x D^2 for total dimension D.
SparseMatrix build_liouvillian(const Operator& hamiltonian,
                               const std::vector<Dissipator>& dissipators);

// Unique steady state of vec(rho') = L vec(rho): one diagonal row of L (the
// one with the largest diagonal magnitude, lowest index on ties) is replaced
// by the vectorized trace functional, the system is solved by sparse LU with
// unit right-hand side in that row, and the result is Hermitized.
DensityMatrix steady_state(const SparseMatrix& liouvillian, const HilbertSpace& space);

// Steady state reusing a previously analyzed sparsity pattern. A solver
// instance may be reused across parameter points that share one pattern
// (grid sweeps); not thread-safe, use one per worker.
class SteadyStateSolver {
public:
    DensityMatrix solve(const SparseMatrix& liouvillian, const HilbertSpace& space);

    // diagnostics of the most recent solve, before Hermitization/normalization
    double last_hermiticity_deviation() const { return last_herm_dev_; }
    double last_trace_deviation() const { return last_trace_dev_; }

private:
    Eigen::SparseLU<SparseMatrix, Eigen::COLAMDOrdering<int>> lu_;
    bool analyzed_{false};
    Eigen::Index pattern_rows_{0};
    double last_herm_dev_{0.0};
    double last_trace_dev_{0.0};
};

// -------------------------------- observables --------------------------------

Complex expectation(const DensityMatrix& rho, const Operator& op);

// Tr[rho m+ m+ m m] / Tr[rho m+ m]^2 for the bosonic mode at the given
// subsystem slot. Throws unoccupied_mode_error below the occupation floor.
double g2_zero(const DensityMatrix& rho, std::size_t mode_position);

class unoccupied_mode_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

inline constexpr double kOccupationFloor = 1e-14;

// Bose-Einstein occupation 1/(exp(hbar w / kB T) - 1); 0 at T = 0.
double thermal_occupation(const ThermalConfig& cfg, std::size_t which_mode);

// Dissipator set of the two-magnon/qubit master equation: kappa/2 (n_th+1) on
// m_j, kappa/2 n_th on m_j+ (when n_th > 0) and gamma/2 on sigma.
std::vector<Dissipator> effective_dissipators(const EffectiveParams& p,
                                              const HilbertSpace& space);

// Convenience: build H and dissipators from p, solve, return g2(0) of mode 1.
double g2_steady_effective(const EffectiveParams& p, const HilbertSpace& space);

} // namespace magnon
