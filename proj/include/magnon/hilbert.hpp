// hilbert.hpp — Truncated-Fock tensor-product spaces, ladder operators, and the
// model Hamiltonians (effective two-magnon/qubit model and the full five-mode
// magnon-cavity-qubit model with its adiabatic reduction).

#pragma once

#include <magnon/types.hpp>

#include <cstddef>
#include <vector>

namespace magnon {

// Ordered subsystem dimensions defining a tensor-product basis.
// Convention: qubit slot first, then magnon 1, magnon 2 (then cavities).
class HilbertSpace {
public:
    HilbertSpace() = default;
    explicit HilbertSpace(std::vector<int> dims);

    const std::vector<int>& dims() const { return dims_; }
    int dim(std::size_t pos) const { return dims_.at(pos); }
    std::size_t size() const { return dims_.size(); }
    int total_dim() const { return total_; }

    bool operator==(const HilbertSpace& other) const { return dims_ == other.dims_; }
    bool operator!=(const HilbertSpace& other) const { return !(*this == other); }

private:
    std::vector<int> dims_;
    int total_{0};
};

// Complex matrix tagged with its HilbertSpace. Arithmetic between operators on
// different spaces throws.
class Operator {
public:
    Operator() = default;
    Operator(HilbertSpace space, Matrix matrix);

    const HilbertSpace& space() const { return space_; }
    const Matrix& matrix() const { return matrix_; }
    int dim() const { return matrix_.rows() > 0 ? static_cast<int>(matrix_.rows()) : 0; }

    Operator adjoint() const { return Operator(space_, matrix_.adjoint()); }

    Operator& operator+=(const Operator& rhs);
    Operator& operator-=(const Operator& rhs);
    Operator& operator*=(Complex scalar);

    friend Operator operator+(Operator lhs, const Operator& rhs) { return lhs += rhs; }
    friend Operator operator-(Operator lhs, const Operator& rhs) { return lhs -= rhs; }
    friend Operator operator*(Complex scalar, Operator op) { return op *= scalar; }
    friend Operator operator*(Operator op, Complex scalar) { return op *= scalar; }
    friend Operator operator*(const Operator& lhs, const Operator& rhs);

private:
    HilbertSpace space_;
    Matrix matrix_;
};

// All scalars of the effective rotating-frame model, in units of the magnon
// decay rate kappa (kappa = 1 internally).
struct EffectiveParams {
    double delta1{0.0};
    double delta2{0.0};
    double delta_q{0.0};
    double g1{0.0};
    double g2{0.0};
    double omega_drive{0.0};
    double kappa{1.0};
    double gamma{1.0};
    double n_th1{0.0};
    double n_th2{0.0};
};

void validate(const EffectiveParams& p);

// Scalars of the full five-mode model before cavity elimination.
struct FullModelParams {
    double delta_c1{0.0};     // cavity detunings delta_0j
    double delta_c2{0.0};
    double delta1_bare{0.0};  // primed detunings delta'_j, delta'_q
    double delta2_bare{0.0};
    double delta_q_bare{0.0};
    double g_m1{0.0};         // magnon-cavity couplings
    double g_m2{0.0};
    double g_q1{0.0};         // qubit-cavity couplings
    double g_q2{0.0};
    double omega_drive{0.0};
};

// ---------------------------- elementary operators ---------------------------

// Truncated bosonic annihilation operator: a[n-1, n] = sqrt(n).
Operator annihilation(int dim);

// Qubit lowering operator |g><e| on the basis {0 = g, 1 = e}.
Operator qubit_lower();

Operator identity(int dim);

// Kronecker embedding I x ... x op x ... x I at the given subsystem slot.
Operator embed(const Operator& local_op, const HilbertSpace& space, std::size_t position);

// ------------------------------- Hamiltonians --------------------------------

// Effective rotating-frame Hamiltonian on [qubit, magnon1, magnon2]:
//   H = delta_q s+s + delta_1 m1+m1 + delta_2 m2+m2
//     + g_1 (s+ m1 + s m1+) + g_2 (s+ m2 + s m2+) + Omega (m1+ + m1).
Operator build_effective_hamiltonian(const EffectiveParams& p, const HilbertSpace& space);

// H_eff = H - i(kappa/2) m1+m1 - i(kappa/2) m2+m2 - i(gamma/2) s+s.
Operator build_effective_nonhermitian(const EffectiveParams& p, const HilbertSpace& space);

// Five-mode Hamiltonian on [qubit, magnon1, magnon2, cavity1, cavity2].
Operator build_full_hamiltonian(const FullModelParams& p, const HilbertSpace& space);

// Cavity elimination: delta_q = delta'_q - g_q1^2/d01 - g_q2^2/d02,
// delta_j = delta'_j - g_mj^2/d0j, g_j = -g_mj g_qj / d0j. kappa, gamma and
// thermal occupations are not part of the reduction and keep their defaults.
EffectiveParams reduce_full_params(const FullModelParams& p);

} // namespace magnon
