#include <magnon/hilbert.hpp>

#include <doctest.h>

#include <algorithm>
#include <complex>
#include <random>

using namespace magnon;

namespace {

Matrix random_complex(int n, std::mt19937& rng) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) m(i, j) = Complex(dist(rng), dist(rng));
    }
    return m;
}

} // namespace

TEST_CASE("annihilation ladder matrix") {
    const Matrix a2 = annihilation(2).matrix();
    CHECK(a2(0, 1) == Complex(1.0));
    CHECK(a2.cwiseAbs().sum() == doctest::Approx(1.0));

    const Matrix a3 = annihilation(3).matrix();
    CHECK(a3(0, 1).real() == doctest::Approx(1.0));
    CHECK(a3(1, 2).real() == doctest::Approx(std::sqrt(2.0)));

    const Operator a4 = annihilation(4);
    const Matrix n4 = (a4.adjoint() * a4).matrix();
    for (int k = 0; k < 4; ++k) CHECK(n4(k, k).real() == doctest::Approx(k));
    CHECK((n4 - n4.diagonal().asDiagonal().toDenseMatrix()).norm() == doctest::Approx(0.0));

    CHECK_THROWS_AS(annihilation(1), std::invalid_argument);
}

TEST_CASE("qubit lowering operator") {
    const Operator s = qubit_lower();
    CHECK(s.matrix()(0, 1) == Complex(1.0));
    const Matrix proj = (s.adjoint() * s).matrix();
    CHECK(proj(0, 0) == Complex(0.0));
    CHECK(proj(1, 1) == Complex(1.0));
    CHECK((s * s).matrix().cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("embed places identity and preserves commutators") {
    const HilbertSpace space({2, 3, 3});
    const Operator id = embed(identity(2), space, 0);
    CHECK(id.matrix().isApprox(Matrix::Identity(18, 18)));

    const HilbertSpace two({2, 3});
    const Operator a = embed(annihilation(3), two, 1);
    const Matrix comm = (a * a.adjoint() - a.adjoint() * a).matrix();
    // truncated canonical commutator: +1 on the diagonal except -(dim-1) at the edge
    for (int q = 0; q < 2; ++q) {
        CHECK(comm(q * 3 + 0, q * 3 + 0).real() == doctest::Approx(1.0));
        CHECK(comm(q * 3 + 1, q * 3 + 1).real() == doctest::Approx(1.0));
        CHECK(comm(q * 3 + 2, q * 3 + 2).real() == doctest::Approx(-2.0));
    }

    CHECK_THROWS_AS(embed(annihilation(4), two, 1), std::invalid_argument);
    CHECK_THROWS_AS(embed(annihilation(3), two, 2), std::invalid_argument);
}

TEST_CASE("disjoint-subsystem embeddings commute") {
    std::mt19937 rng(42);
    const HilbertSpace space({2, 3});
    for (int trial = 0; trial < 10; ++trial) {
        const Operator a = embed(Operator(HilbertSpace({2}), random_complex(2, rng)), space, 0);
        const Operator b = embed(Operator(HilbertSpace({3}), random_complex(3, rng)), space, 1);
        CHECK((a * b).matrix().isApprox((b * a).matrix(), 1e-14));
    }
}

TEST_CASE("embed preserves spectra with multiplicity") {
    std::mt19937 rng(7);
    const HilbertSpace space({2, 3, 3});
    for (std::size_t pos : {std::size_t{0}, std::size_t{1}}) {
        const int d = space.dim(pos);
        const Matrix local = random_complex(d, rng);
        const Operator big = embed(Operator(HilbertSpace({d}), local), space, pos);

        Eigen::ComplexEigenSolver<Matrix> small_es(local);
        Eigen::ComplexEigenSolver<Matrix> big_es(big.matrix());
        std::vector<Complex> small_ev(small_es.eigenvalues().data(),
                                      small_es.eigenvalues().data() + d);
        std::vector<Complex> big_ev(big_es.eigenvalues().data(),
                                    big_es.eigenvalues().data() + space.total_dim());
        const int mult = space.total_dim() / d;
        for (const Complex& ev : small_ev) {
            const long count = std::count_if(big_ev.begin(), big_ev.end(), [&](Complex b) {
                return std::abs(b - ev) < 1e-8;
            });
            CHECK(count >= mult);  // degenerate random eigenvalues are vanishingly unlikely
        }
    }
}

TEST_CASE("operator arithmetic keeps the space tag and rejects mixed spaces") {
    const HilbertSpace space({2, 3, 3});
    const Operator a = embed(annihilation(3), space, 1);
    const Operator b = embed(annihilation(3), space, 2);
    CHECK((a + b).space() == space);
    CHECK((a * b).space() == space);
    CHECK((Complex(2.0) * a).space() == space);

    const Operator other = annihilation(3);
    CHECK_THROWS_AS(a + other, std::invalid_argument);
    CHECK_THROWS_AS(a * other, std::invalid_argument);
}

TEST_CASE("effective Hamiltonian structure") {
    const HilbertSpace space({2, 4, 4});
    EffectiveParams p;

    SUBCASE("all parameters zero gives the zero matrix") {
        p.g1 = p.g2 = p.omega_drive = 0.0;
        CHECK(build_effective_hamiltonian(p, space).matrix().cwiseAbs().maxCoeff() ==
              doctest::Approx(0.0));
    }

    SUBCASE("free Hamiltonian is diagonal with delta-weighted occupations") {
        p.delta1 = 0.3;
        p.delta2 = -0.2;
        p.delta_q = 0.7;
        const Matrix h = build_effective_hamiltonian(p, space).matrix();
        CHECK((h - Matrix(h.diagonal().asDiagonal())).cwiseAbs().maxCoeff() ==
              doctest::Approx(0.0));
        for (int s = 0; s < 2; ++s) {
            for (int n1 = 0; n1 < 4; ++n1) {
                for (int n2 = 0; n2 < 4; ++n2) {
                    const int idx = s * 16 + n1 * 4 + n2;
                    CHECK(h(idx, idx).real() ==
                          doctest::Approx(0.7 * s + 0.3 * n1 - 0.2 * n2));
                }
            }
        }
    }

    SUBCASE("driven-coupling matrix element <10g|H|00e> equals g1") {
        p.g1 = 0.8;
        p.g2 = 0.161 * 0.8;
        p.omega_drive = 0.001;
        const Matrix h = build_effective_hamiltonian(p, space).matrix();
        const int idx_10g = 0 * 16 + 1 * 4 + 0;
        const int idx_00e = 1 * 16;
        CHECK(h(idx_10g, idx_00e).real() == doctest::Approx(0.8));
    }

    SUBCASE("Hermitian to machine precision for random real parameters") {
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> dist(-2.0, 2.0);
        for (int trial = 0; trial < 20; ++trial) {
            EffectiveParams q;
            q.delta1 = dist(rng);
            q.delta2 = dist(rng);
            q.delta_q = dist(rng);
            q.g1 = std::abs(dist(rng));
            q.g2 = std::abs(dist(rng));
            q.omega_drive = std::abs(dist(rng));
            const Matrix h = build_effective_hamiltonian(q, space).matrix();
            CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
        }
    }

    SUBCASE("magnon truncation below 3 is rejected") {
        CHECK_THROWS_AS(build_effective_hamiltonian(p, HilbertSpace({2, 2, 4})),
                        std::invalid_argument);
    }
}

TEST_CASE("non-Hermitian Hamiltonian adds decay terms") {
    const HilbertSpace space({2, 4, 4});
    EffectiveParams p;
    p.g1 = 0.5;
    p.g2 = 0.2;
    p.omega_drive = 0.01;
    p.delta1 = 0.1;

    SUBCASE("kappa = gamma = 0 reduces to the Hermitian Hamiltonian") {
        EffectiveParams q = p;
        q.kappa = 0.0;
        q.gamma = 0.0;
        CHECK(build_effective_nonhermitian(q, space).matrix().isApprox(
            build_effective_hamiltonian(q, space).matrix()));
    }

    SUBCASE("pure-decay diagonal at zero Hamiltonian parameters") {
        EffectiveParams q;
        q.g1 = q.g2 = q.omega_drive = 0.0;
        q.kappa = 1.0;
        q.gamma = 1.11;
        const Matrix h = build_effective_nonhermitian(q, space).matrix();
        for (int s = 0; s < 2; ++s) {
            for (int n1 = 0; n1 < 4; ++n1) {
                for (int n2 = 0; n2 < 4; ++n2) {
                    const int idx = s * 16 + n1 * 4 + n2;
                    CHECK(h(idx, idx).real() == doctest::Approx(0.0));
                    CHECK(h(idx, idx).imag() ==
                          doctest::Approx(-0.5 * (n1 + n2) - 0.5 * 1.11 * s));
                }
            }
        }
    }

    SUBCASE("<10g|H_eff|10g> equals the complex detuning") {
        const Matrix h = build_effective_nonhermitian(p, space).matrix();
        const int idx_10g = 1 * 4;
        CHECK(h(idx_10g, idx_10g).real() == doctest::Approx(p.delta1));
        CHECK(h(idx_10g, idx_10g).imag() == doctest::Approx(-0.5 * p.kappa));
    }
}

TEST_CASE("full five-mode Hamiltonian") {
    const HilbertSpace space({2, 3, 3, 2, 2});
    CHECK(space.total_dim() == 72);
    FullModelParams f;

    SUBCASE("free Hamiltonian is diagonal") {
        f.delta_c1 = 5.0;
        f.delta_c2 = 4.0;
        f.delta1_bare = 0.3;
        const Matrix h = build_full_hamiltonian(f, space).matrix();
        CHECK((h - Matrix(h.diagonal().asDiagonal())).cwiseAbs().maxCoeff() ==
              doctest::Approx(0.0));
    }

    SUBCASE("magnon-cavity exchange element equals g_m1") {
        f.g_m1 = 0.7;
        const Matrix h = build_full_hamiltonian(f, space).matrix();
        // |n1=1, cavity1=0> -> |n1=0, cavity1=1>, all else ground
        const int idx_m = ((0 * 3 + 1) * 3 + 0) * 4;            // qubit g, n1=1
        const int idx_a = (0 * 9 + 0) * 4 + 1 * 2;              // cavity1 = 1
        CHECK(h(idx_a, idx_m).real() == doctest::Approx(0.7));
    }

    SUBCASE("space shape is validated") {
        CHECK_THROWS_AS(build_full_hamiltonian(f, HilbertSpace({2, 3, 3})),
                        std::invalid_argument);
    }
}

TEST_CASE("adiabatic parameter reduction") {
    SUBCASE("zero couplings pass detunings through") {
        FullModelParams f;
        f.delta_c1 = 100.0;
        f.delta_c2 = 100.0;
        f.delta1_bare = 0.25;
        f.delta2_bare = -0.5;
        f.delta_q_bare = 0.1;
        const EffectiveParams r = reduce_full_params(f);
        CHECK(r.delta1 == doctest::Approx(0.25));
        CHECK(r.delta2 == doctest::Approx(-0.5));
        CHECK(r.delta_q == doctest::Approx(0.1));
        CHECK(r.g1 == doctest::Approx(0.0));
        CHECK(r.g2 == doctest::Approx(0.0));
    }

    SUBCASE("paper-scale couplings reproduce g1 = -0.8") {
        FullModelParams f;
        f.delta_c1 = 200.0;
        f.delta_c2 = 200.0;
        f.g_m1 = 12.649;
        f.g_q1 = 12.649;
        const EffectiveParams r = reduce_full_params(f);
        const double expected = -12.649 * 12.649 / 200.0;
        CHECK(r.g1 == doctest::Approx(expected).epsilon(1e-15));
        CHECK(std::abs(r.g1) == doctest::Approx(0.8).epsilon(2e-5));
        // sign is opposite to g_m g_q / delta_c as written in the reduction
        CHECK(r.g1 < 0.0);
    }

    SUBCASE("bare detuning equal to the dispersive shift cancels exactly") {
        FullModelParams f;
        f.delta_c1 = 150.0;
        f.delta_c2 = 150.0;
        f.g_m1 = 10.0;
        f.delta1_bare = 10.0 * 10.0 / 150.0;
        CHECK(reduce_full_params(f).delta1 == doctest::Approx(0.0));
    }

    SUBCASE("vanishing cavity detuning is rejected") {
        FullModelParams f;
        f.delta_c1 = 0.0;
        f.delta_c2 = 100.0;
        CHECK_THROWS_AS(reduce_full_params(f), std::invalid_argument);
    }
}
