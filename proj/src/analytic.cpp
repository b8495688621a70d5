#include <magnon/analytic.hpp>

#include <cmath>
#include <stdexcept>

namespace magnon {

namespace {
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kCoarseStep = 1e-3;
constexpr double kRefineTol = 1e-5;
constexpr double kDenominatorFloor = 1e-30;
constexpr double kOccupationAmplitudeFloor = 1e-12;
} // namespace

ComplexDetunings complex_detunings(const EffectiveParams& p) {
    return {Complex(p.delta1, -0.5 * p.kappa), Complex(p.delta2, -0.5 * p.kappa),
            Complex(p.delta_q, -0.5 * p.gamma)};
}

double AmplitudeVector::norm_squared() const {
    double s = 0.0;
    for (const Complex& c : as_array()) s += std::norm(c);
    return s;
}

AmplitudeVector amplitude_rhs(const AmplitudeVector& c, const EffectiveParams& p) {
    const auto [d1, d2, dq] = complex_detunings(p);
    const double g1 = p.g1, g2 = p.g2, om = p.omega_drive;
    AmplitudeVector dc;
    dc.c00g = -kImag * (om * c.c10g);
    dc.c10g = -kImag * (d1 * c.c10g + g1 * c.c00e + om * c.c00g + kSqrt2 * om * c.c20g);
    dc.c00e = -kImag * (dq * c.c00e + g1 * c.c10g + g2 * c.c01g + om * c.c10e);
    dc.c01g = -kImag * (d2 * c.c01g + g2 * c.c00e + om * c.c11g);
    dc.c20g = -kImag * (2.0 * d1 * c.c20g + kSqrt2 * g1 * c.c10e + kSqrt2 * om * c.c10g);
    dc.c10e = -kImag * ((d1 + dq) * c.c10e + kSqrt2 * g1 * c.c20g + g2 * c.c11g + om * c.c00e);
    dc.c11g = -kImag * ((d1 + d2) * c.c11g + g2 * c.c10e + g1 * c.c01e + om * c.c01g);
    dc.c01e = -kImag * ((d2 + dq) * c.c01e + kSqrt2 * g2 * c.c02g + g1 * c.c11g);
    dc.c02g = -kImag * (2.0 * d2 * c.c02g + kSqrt2 * g2 * c.c01e);
    return dc;
}

AmplitudeVector integrate_amplitudes(const EffectiveParams& p, double t_end, double dt) {
    if (dt <= 0.0) throw std::invalid_argument("integrate_amplitudes: dt must be > 0");
    if (t_end < 0.0) throw std::invalid_argument("integrate_amplitudes: t_end must be >= 0");

    auto axpy = [](const AmplitudeVector& a, double w, const AmplitudeVector& b) {
        auto aa = a.as_array();
        const auto bb = b.as_array();
        for (int i = 0; i < 9; ++i) aa[i] += w * bb[i];
        return AmplitudeVector::from_array(aa);
    };

    AmplitudeVector c = AmplitudeVector::vacuum();
    const long steps = static_cast<long>(std::ceil(t_end / dt));
    for (long s = 0; s < steps; ++s) {
        const double h = std::min(dt, t_end - s * dt);
        const AmplitudeVector k1 = amplitude_rhs(c, p);
        const AmplitudeVector k2 = amplitude_rhs(axpy(c, 0.5 * h, k1), p);
        const AmplitudeVector k3 = amplitude_rhs(axpy(c, 0.5 * h, k2), p);
        const AmplitudeVector k4 = amplitude_rhs(axpy(c, h, k3), p);
        auto cc = c.as_array();
        const auto a1 = k1.as_array(), a2 = k2.as_array(), a3 = k3.as_array(),
                   a4 = k4.as_array();
        for (int i = 0; i < 9; ++i) {
            cc[i] += (h / 6.0) * (a1[i] + 2.0 * a2[i] + 2.0 * a3[i] + a4[i]);
        }
        c = AmplitudeVector::from_array(cc);
        if (!std::isfinite(c.norm_squared())) {
            throw std::runtime_error("integrate_amplitudes: divergent integration");
        }
    }
    // rescale to the C00g = 1 gauge used by steady_amplitudes
    if (std::abs(c.c00g) < 1e-300) {
        throw std::runtime_error("integrate_amplitudes: vacuum amplitude vanished");
    }
    auto cc = c.as_array();
    for (Complex& v : cc) v /= c.c00g;
    return AmplitudeVector::from_array(cc);
}

AmplitudeVector steady_amplitudes(const EffectiveParams& p) {
    const auto [d1, d2, dq] = complex_detunings(p);
    const double g1 = p.g1, g2 = p.g2, om = p.omega_drive;

    // unknowns: C10g C00e C01g C20g C10e C11g C01e C02g
    Matrix m = Matrix::Zero(8, 8);
    Vector b = Vector::Zero(8);
    m(0, 0) = d1;      m(0, 1) = g1;          m(0, 3) = kSqrt2 * om;  b(0) = -om;
    m(1, 1) = dq;      m(1, 0) = g1;          m(1, 2) = g2;           m(1, 4) = om;
    m(2, 2) = d2;      m(2, 1) = g2;          m(2, 5) = om;
    m(3, 3) = 2.0*d1;  m(3, 4) = kSqrt2*g1;   m(3, 0) = kSqrt2 * om;
    m(4, 4) = d1 + dq; m(4, 3) = kSqrt2*g1;   m(4, 5) = g2;           m(4, 1) = om;
    m(5, 5) = d1 + d2; m(5, 4) = g2;          m(5, 6) = g1;           m(5, 2) = om;
    m(6, 6) = d2 + dq; m(6, 7) = kSqrt2*g2;   m(6, 5) = g1;
    m(7, 7) = 2.0*d2;  m(7, 6) = kSqrt2*g2;

    const Eigen::PartialPivLU<Matrix> lu(m);
    const Vector x = lu.solve(b);
    const double residual = (m * x - b).cwiseAbs().maxCoeff();
    if (!x.allFinite() || residual > 1e-8 * std::max(1.0, x.cwiseAbs().maxCoeff())) {
        throw degenerate_parameters_error("steady_amplitudes: singular amplitude system");
    }
    AmplitudeVector c;
    c.c00g = 1.0;
    c.c10g = x(0); c.c00e = x(1); c.c01g = x(2); c.c20g = x(3);
    c.c10e = x(4); c.c11g = x(5); c.c01e = x(6); c.c02g = x(7);
    return c;
}

CoeffSet coefficient_set(const EffectiveParams& p) {
    const auto [d1, d2, dq] = complex_detunings(p);
    if (std::abs(d1) < 1e-300 || std::abs(d2) < 1e-300) {
        throw degenerate_parameters_error("coefficient_set: vanishing complex detuning");
    }
    const double g1 = p.g1, g2 = p.g2, om = p.omega_drive;
    const Complex om2 = om * om;

    CoeffSet c;
    c.delta_s = d1 + d2 + dq;
    c.delta1_prime = d1 + dq - g1 * g1 / d1;
    c.delta2_prime = d2 + dq - g2 * g2 / d2;
    c.delta1_tilde = dq + om2 / d1 - g1 * g1 / d1;
    c.delta2_tilde = dq + om2 / d2 - g2 * g2 / d2;

    const Complex g1sq = g1 * g1;
    const Complex g2sq = g2 * g2;
    c.a0 = om * d2 * c.delta2_tilde;
    c.a1 = d1 * d2 * c.delta2_tilde + om2 * c.delta_s - g1sq * d2;
    c.a2 = kSqrt2 * om * (d1 * c.delta_s + d2 * c.delta2_tilde - g1sq);
    c.b0 = om2 * (c.delta2_prime * c.delta_s - g1sq);
    c.b1 = om * (2.0 * d1 * (c.delta2_prime * c.delta_s - g1sq) +
                 c.delta2_prime * (d2 * c.delta2_tilde - g1sq) - g1sq * dq);
    c.b2 = kSqrt2 * (d1 * d1 + d1 * c.delta1_tilde) *
               (c.delta2_prime * (d1 + d2) - g1sq) +
           kSqrt2 * om2 * c.delta2_prime * (d1 + dq) - kSqrt2 * g2sq * d1 * c.delta2_prime;
    return c;
}

ReducedAmplitudes reduced_amplitudes(const CoeffSet& c) {
    const Complex det = c.a1 * c.b2 - c.a2 * c.b1;
    if (std::abs(det) < kDenominatorFloor) {
        throw degenerate_parameters_error("reduced_amplitudes: singular reduced system");
    }
    return {(c.a2 * c.b0 - c.a0 * c.b2) / det, (c.a0 * c.b1 - c.a1 * c.b0) / det};
}

double g2_analytic(const EffectiveParams& p) {
    const CoeffSet c = coefficient_set(p);
    const double denom = std::abs(c.a2 * c.b0 - c.a0 * c.b2);
    if (denom < kDenominatorFloor) {
        throw degenerate_parameters_error("g2_analytic: vanishing one-magnon amplitude");
    }
    const double num1 = std::abs(c.a0 * c.b1 - c.a1 * c.b0);
    const double num2 = std::abs(c.a1 * c.b2 - c.a2 * c.b1);
    const double ratio = (num1 / denom) * (num2 / denom);
    return 2.0 * ratio * ratio;
}

Complex blockade_residual(const EffectiveParams& p) {
    const CoeffSet c = coefficient_set(p);
    return c.a0 * c.b1 - c.a1 * c.b0;
}

OptimalDelta optimal_delta1(const EffectiveParams& p, double search_lo, double search_hi) {
    if (!(std::isfinite(search_lo) && std::isfinite(search_hi)) || search_hi <= search_lo) {
        throw std::invalid_argument("optimal_delta1: invalid search interval");
    }
    EffectiveParams q = p;
    auto objective = [&q](double delta1) {
        q.delta1 = delta1;
        return std::abs(blockade_residual(q));
    };

    const long n = std::lround(std::ceil((search_hi - search_lo) / kCoarseStep));
    double best_x = search_lo;
    double best_f = objective(search_lo);
    long best_k = 0;
    for (long k = 1; k <= n; ++k) {
        const double x = k == n ? search_hi : search_lo + k * kCoarseStep;
        const double f = objective(x);
        if (f < best_f) { // strict: ties keep the smallest delta1
            best_f = f;
            best_x = x;
            best_k = k;
        }
    }

    // golden-section refinement inside the bracketing cell pair
    double a = best_k == 0 ? search_lo : best_x - kCoarseStep;
    double b = best_k == n ? search_hi : best_x + kCoarseStep;
    a = std::max(a, search_lo);
    b = std::min(b, search_hi);
    constexpr double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = objective(x1);
    double f2 = objective(x2);
    while (b - a > kRefineTol) {
        if (f1 < f2) {
            b = x2; x2 = x1; f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = objective(x1);
        } else {
            a = x1; x1 = x2; f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = objective(x2);
        }
    }
    OptimalDelta out;
    out.delta1 = f1 < f2 ? x1 : x2;
    out.residual_modulus = std::min(f1, f2);
    out.at_boundary = best_k == 0 || best_k == n;

    // blockade requires occupation: reject the trivial undriven root
    q.delta1 = out.delta1;
    const ReducedAmplitudes amps = reduced_amplitudes(coefficient_set(q));
    if (std::abs(amps.c10g) < kOccupationAmplitudeFloor) {
        throw degenerate_parameters_error("optimal_delta1: unoccupied mode at candidate optimum");
    }
    return out;
}

} // namespace magnon
