// analytic.hpp — Weak-drive analytics: the nine-amplitude dynamical system,
// its steady state, the reduced two-equation coefficients, the closed-form
// g2(0) and the complete-blockade condition with its 1-D optimizer.

#pragma once

#include <magnon/hilbert.hpp>
#include <magnon/types.hpp>

#include <array>

namespace magnon {

// Complex detunings Delta_j = delta_j - i kappa/2, Delta_q = delta_q - i gamma/2.
struct ComplexDetunings {
    Complex delta1;
    Complex delta2;
    Complex delta_q;
};

ComplexDetunings complex_detunings(const EffectiveParams& p);

// Probability amplitudes of the truncated state, ordered
// |00g>, |10g>, |00e>, |01g>, |20g>, |10e>, |11g>, |01e>, |02g>.
struct AmplitudeVector {
    Complex c00g, c10g, c00e, c01g, c20g, c10e, c11g, c01e, c02g;

    std::array<Complex, 9> as_array() const {
        return {c00g, c10g, c00e, c01g, c20g, c10e, c11g, c01e, c02g};
    }
    static AmplitudeVector from_array(const std::array<Complex, 9>& a) {
        return {a[0], a[1], a[2], a[3], a[4], a[5], a[6], a[7], a[8]};
    }
    static AmplitudeVector vacuum() { return {Complex(1.0), {}, {}, {}, {}, {}, {}, {}, {}}; }

    double norm_squared() const;
};

// Coefficients of the reduced linear system A0 + A1 C10g + A2 C20g = 0,
// B0 + B1 C10g + B2 C20g = 0, plus the auxiliary detuning combinations.
struct CoeffSet {
    Complex a0, a1, a2;
    Complex b0, b1, b2;
    Complex delta_s;       // Delta_1 + Delta_2 + Delta_q
    Complex delta1_prime;  // Delta_j + Delta_q - g_j^2 / Delta_j
    Complex delta2_prime;
    Complex delta1_tilde;  // Delta_q + Omega^2/Delta_j - g_j^2/Delta_j
    Complex delta2_tilde;
};

class degenerate_parameters_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Time derivatives of the amplitudes under the non-Hermitian generator,
// i.e. c' = -i M c with M the 9-state restriction of H_eff.
AmplitudeVector amplitude_rhs(const AmplitudeVector& c, const EffectiveParams& p);

// Classic fourth-order fixed-step integration from the vacuum state. The
// result is rescaled to the C00g = 1 gauge of steady_amplitudes; throws on
// non-finite amplitudes.
AmplitudeVector integrate_amplitudes(const EffectiveParams& p, double t_end, double dt);

// Steady state with C00g = 1: the remaining eight amplitudes solve the
// zero-derivative linear system.
AmplitudeVector steady_amplitudes(const EffectiveParams& p);

CoeffSet coefficient_set(const EffectiveParams& p);

// Closed-form g2(0) = 2 |A0 B1 - A1 B0|^2 |A1 B2 - A2 B1|^2 / |A2 B0 - A0 B2|^4.
double g2_analytic(const EffectiveParams& p);

// C10g and C20g from the reduced two-equation system (Cramer form).
struct ReducedAmplitudes {
    Complex c10g;
    Complex c20g;
};
ReducedAmplitudes reduced_amplitudes(const CoeffSet& c);

// A0 B1 - A1 B0; complete blockade where it vanishes.
Complex blockade_residual(const EffectiveParams& p);

// Result of the 1-D blockade-residual minimization over delta1.
struct OptimalDelta {
    double delta1{0.0};
    double residual_modulus{0.0};
    bool at_boundary{false};
};

// Coarse scan at 1e-3 kappa steps plus golden-section refinement to 1e-5
// kappa; p.delta1 is ignored. Smallest delta1 wins ties.
OptimalDelta optimal_delta1(const EffectiveParams& p, double search_lo, double search_hi);

} // namespace magnon
