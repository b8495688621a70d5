#include <magnon/hilbert.hpp>

#include <cmath>
#include <stdexcept>
#include <string>

namespace magnon {

HilbertSpace::HilbertSpace(std::vector<int> dims) : dims_(std::move(dims)) {
    if (dims_.empty()) {
        throw std::invalid_argument("HilbertSpace: needs at least one subsystem");
    }
    total_ = 1;
    for (int d : dims_) {
        if (d < 2) {
            throw std::invalid_argument("HilbertSpace: every dimension must be >= 2, got " +
                                        std::to_string(d));
        }
        total_ *= d;
    }
}

Operator::Operator(HilbertSpace space, Matrix matrix)
    : space_(std::move(space)), matrix_(std::move(matrix)) {
    if (matrix_.rows() != matrix_.cols() || matrix_.rows() != space_.total_dim()) {
        throw std::invalid_argument("Operator: matrix size does not match space dimension");
    }
}

namespace {

void require_same_space(const Operator& a, const Operator& b, const char* what) {
    if (a.space() != b.space()) {
        throw std::invalid_argument(std::string(what) + ": operators live on different spaces");
    }
}

} // namespace

Operator& Operator::operator+=(const Operator& rhs) {
    require_same_space(*this, rhs, "Operator::operator+");
    matrix_ += rhs.matrix_;
    return *this;
}

Operator& Operator::operator-=(const Operator& rhs) {
    require_same_space(*this, rhs, "Operator::operator-");
    matrix_ -= rhs.matrix_;
    return *this;
}

Operator& Operator::operator*=(Complex scalar) {
    matrix_ *= scalar;
    return *this;
}

Operator operator*(const Operator& lhs, const Operator& rhs) {
    require_same_space(lhs, rhs, "Operator::operator*");
    return Operator(lhs.space(), lhs.matrix() * rhs.matrix());
}

void validate(const EffectiveParams& p) {
    if (p.kappa <= 0.0) throw std::invalid_argument("EffectiveParams: kappa must be > 0");
    if (p.gamma <= 0.0) throw std::invalid_argument("EffectiveParams: gamma must be > 0");
    if (p.g1 < 0.0 || p.g2 < 0.0) {
        throw std::invalid_argument("EffectiveParams: couplings must be >= 0");
    }
    if (p.omega_drive < 0.0) {
        throw std::invalid_argument("EffectiveParams: omega_drive must be >= 0");
    }
    if (p.n_th1 < 0.0 || p.n_th2 < 0.0) {
        throw std::invalid_argument("EffectiveParams: thermal occupations must be >= 0");
    }
}

Operator annihilation(int dim) {
    if (dim < 2) {
        throw std::invalid_argument("annihilation: dimension must be >= 2");
    }
    Matrix a = Matrix::Zero(dim, dim);
    for (int n = 1; n < dim; ++n) {
        a(n - 1, n) = std::sqrt(static_cast<double>(n));
    }
    return Operator(HilbertSpace({dim}), std::move(a));
}

Operator qubit_lower() {
    Matrix s = Matrix::Zero(2, 2);
    s(0, 1) = 1.0;
    return Operator(HilbertSpace({2}), std::move(s));
}

Operator identity(int dim) {
    return Operator(HilbertSpace({dim}), Matrix::Identity(dim, dim));
}

namespace {

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

} // namespace

Operator embed(const Operator& local_op, const HilbertSpace& space, std::size_t position) {
    if (position >= space.size()) {
        throw std::invalid_argument("embed: subsystem position out of range");
    }
    if (local_op.dim() != space.dim(position)) {
        throw std::invalid_argument("embed: local operator dimension does not match subsystem");
    }
    Matrix out = Matrix::Identity(1, 1);
    for (std::size_t k = 0; k < space.size(); ++k) {
        if (k == position) {
            out = kron(out, local_op.matrix());
        } else {
            out = kron(out, Matrix::Identity(space.dim(k), space.dim(k)));
        }
    }
    return Operator(space, std::move(out));
}

Operator build_effective_hamiltonian(const EffectiveParams& p, const HilbertSpace& space) {
    if (space.size() != 3 || space.dim(0) != 2) {
        throw std::invalid_argument(
            "build_effective_hamiltonian: space must be [qubit=2, magnon1, magnon2]");
    }
    if (space.dim(1) < 3 || space.dim(2) < 3) {
        throw std::invalid_argument(
            "build_effective_hamiltonian: magnon truncation must be >= 3 to hold two-magnon states");
    }
    const Operator sig = embed(qubit_lower(), space, 0);
    const Operator m1 = embed(annihilation(space.dim(1)), space, 1);
    const Operator m2 = embed(annihilation(space.dim(2)), space, 2);
    const Operator sig_d = sig.adjoint();
    const Operator m1_d = m1.adjoint();
    const Operator m2_d = m2.adjoint();

    Operator h = Complex(p.delta_q) * (sig_d * sig);
    h += Complex(p.delta1) * (m1_d * m1);
    h += Complex(p.delta2) * (m2_d * m2);
    h += Complex(p.g1) * (sig_d * m1 + sig * m1_d);
    h += Complex(p.g2) * (sig_d * m2 + sig * m2_d);
    h += Complex(p.omega_drive) * (m1_d + m1);
    return h;
}

Operator build_effective_nonhermitian(const EffectiveParams& p, const HilbertSpace& space) {
    Operator h = build_effective_hamiltonian(p, space);
    const Operator sig = embed(qubit_lower(), space, 0);
    const Operator m1 = embed(annihilation(space.dim(1)), space, 1);
    const Operator m2 = embed(annihilation(space.dim(2)), space, 2);
    h -= (kImag * 0.5 * p.kappa) * (m1.adjoint() * m1);
    h -= (kImag * 0.5 * p.kappa) * (m2.adjoint() * m2);
    h -= (kImag * 0.5 * p.gamma) * (sig.adjoint() * sig);
    return h;
}

Operator build_full_hamiltonian(const FullModelParams& p, const HilbertSpace& space) {
    if (space.size() != 5 || space.dim(0) != 2) {
        throw std::invalid_argument(
            "build_full_hamiltonian: space must be [qubit=2, magnon1, magnon2, cavity1, cavity2]");
    }
    const Operator sig = embed(qubit_lower(), space, 0);
    const Operator m1 = embed(annihilation(space.dim(1)), space, 1);
    const Operator m2 = embed(annihilation(space.dim(2)), space, 2);
    const Operator a1 = embed(annihilation(space.dim(3)), space, 3);
    const Operator a2 = embed(annihilation(space.dim(4)), space, 4);
    const Operator sig_d = sig.adjoint();

    Operator h = Complex(p.delta_c1) * (a1.adjoint() * a1);
    h += Complex(p.delta_c2) * (a2.adjoint() * a2);
    h += Complex(p.delta1_bare) * (m1.adjoint() * m1);
    h += Complex(p.delta2_bare) * (m2.adjoint() * m2);
    h += Complex(p.delta_q_bare) * (sig_d * sig);
    h += Complex(p.g_m1) * (m1.adjoint() * a1 + m1 * a1.adjoint());
    h += Complex(p.g_m2) * (m2.adjoint() * a2 + m2 * a2.adjoint());
    h += Complex(p.g_q1) * (sig_d * a1 + sig * a1.adjoint());
    h += Complex(p.g_q2) * (sig_d * a2 + sig * a2.adjoint());
    h += Complex(p.omega_drive) * (m1.adjoint() + m1);
    return h;
}

EffectiveParams reduce_full_params(const FullModelParams& p) {
    if (p.delta_c1 == 0.0 || p.delta_c2 == 0.0) {
        throw std::invalid_argument("reduce_full_params: cavity detunings must be nonzero");
    }
    EffectiveParams out;
    out.delta_q = p.delta_q_bare - p.g_q1 * p.g_q1 / p.delta_c1 - p.g_q2 * p.g_q2 / p.delta_c2;
    out.delta1 = p.delta1_bare - p.g_m1 * p.g_m1 / p.delta_c1;
    out.delta2 = p.delta2_bare - p.g_m2 * p.g_m2 / p.delta_c2;
    out.g1 = -p.g_m1 * p.g_q1 / p.delta_c1;
    out.g2 = -p.g_m2 * p.g_q2 / p.delta_c2;
    out.omega_drive = p.omega_drive;
    return out;
}

} // namespace magnon
