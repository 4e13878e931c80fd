#include "bubbly/errors.hpp"
#include "bubbly/operators.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace bubbly;

namespace {

const Medium kMed{};

Geometry geometry(double R, double eps = 0.0, int N = 7) {
    Geometry g;
    g.R = R;
    g.eps = eps;
    g.N = N;
    return g;
}

double max_abs(const Matrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Operators, ClosedFormMatchesFactoredProduct) {
    for (const Geometry& g : {geometry(0.05, -0.0015), geometry(0.05, 0.0015), geometry(0.45, 0.0135), geometry(0.45, -0.0135),
                              geometry(0.3, 0.02, 9)})
        for (double omega : {0.05, 0.1080626554, 0.2591406425, 0.8}) {
            const Matrix closed = assemble_A_D_eps(omega, kMed, g).matrix();
            const Matrix literal = test::literal_A_D_eps(omega, kMed, g).matrix();
            EXPECT_LE(max_abs(closed - literal), 1e-12 * max_abs(literal)) << "R=" << g.R << " eps=" << g.eps << " omega=" << omega;
        }
}

TEST(Operators, ZeroPerturbationReproducesAD) {
    for (double R : {0.05, 0.45})
        for (double omega : {0.1, 0.2591406425}) {
            const Geometry g = geometry(R);
            EXPECT_TRUE(assemble_A_D_eps(omega, kMed, g).matrix() == assemble_A_D(omega, kMed, g).matrix());
            EXPECT_TRUE(assemble_A_Dd(omega, kMed, g).matrix() == assemble_A_D(omega, kMed, g).matrix());
        }
}

TEST(Operators, SingleDiskOperatorsAreDiagonalInOrder) {
    const Geometry g = geometry(0.05, -0.0015);
    const double omega = 0.2591;
    for (const FourierBlockMatrix& a : {assemble_A_D(omega, kMed, g), assemble_A_Dd(omega, kMed, g), assemble_A_D_eps(omega, kMed, g),
                                        assemble_P1(omega, kMed, g), assemble_P2(omega, kMed, g)}) {
        EXPECT_TRUE(a.diagonal_in_n());
        for (int rb = 0; rb < 2; ++rb)
            for (int cb = 0; cb < 2; ++cb)
                for (int m = -g.N; m <= g.N; ++m)
                    for (int n = -g.N; n <= g.N; ++n)
                        if (m != n) EXPECT_EQ(a(rb, m, cb, n), cplx(0.0));
    }
}

TEST(Operators, DifferenceEntriesAtSmallFrequency) {
    const double omega = 1e-4;
    for (const Geometry& g : {geometry(0.05, -0.0015), geometry(0.45, 0.0135)}) {
        const FourierBlockMatrix d(g.N, true,
                                   assemble_A_D_eps(omega, kMed, g).matrix() - assemble_A_D(omega, kMed, g).matrix());
        const double eps = g.eps;
        EXPECT_LT(std::abs(d(0, 0, 1, 0) + eps), 0.05 * std::abs(eps)) << "R=" << g.R;
        const double target = 2.0 * kMed.delta() * eps / g.R;
        EXPECT_LT(std::abs(d(1, 0, 1, 0) - target), 0.05 * std::abs(target)) << "R=" << g.R;
    }
}

TEST(Operators, JumpOfNormalDerivativeIsOne) {
    // Exterior minus interior trace of d/dnu S_D^k on e^{in theta}: c k (J_n H_n' - J_n' H_n) = 1.
    for (double R : {0.05, 0.45})
        for (double k : {0.1, 0.2591, 2.0}) {
            const CylinderTable t(7, k * R);
            const cplx c(0.0, -kPi * R / 2.0);
            for (int n = -7; n <= 7; ++n) {
                const cplx jump = c * k * t.j(n) * t.hp(n) - c * k * t.jp(n) * t.h(n);
                EXPECT_LT(std::abs(jump - 1.0), 1e-10) << "R=" << R << " k=" << k << " n=" << n;
            }
        }
}

TEST(Operators, StaticEntryGrowsLikeRLogOmega) {
    const Geometry g = geometry(0.05);
    double prev = 1.0;
    for (double omega : {1e-3, 1e-6, 1e-9, 1e-12}) {
        const cplx a00 = assemble_A_D(omega, kMed, g)(0, 0, 0, 0);
        const double gap = std::abs(a00 / (g.R * std::log(omega)) - 1.0);
        EXPECT_LT(gap, prev);
        prev = gap;
    }
    EXPECT_LT(prev, 0.15);
}

TEST(Operators, QuasiPeriodicOperatorCouplesOrdersAtAlphaStar) {
    const Geometry g = geometry(0.05);
    const FourierBlockMatrix a = assemble_A_alpha(0.2591, kAlphaStar, kMed, g);
    EXPECT_FALSE(a.diagonal_in_n());
    const Matrix s = single_layer_alpha(0.2591, kAlphaStar, g.R, g.N);
    for (int m = -g.N; m <= g.N; ++m)
        for (int n = -g.N; n <= g.N; ++n) {
            EXPECT_EQ(a(0, m, 1, n), -s(m + g.N, n + g.N));
            const bool coupled = ((n - m) % 4 + 4) % 4 == 0;
            if (!coupled) EXPECT_LT(std::abs(s(m + g.N, n + g.N)), 1e-7 * std::abs(s(g.N, g.N)));
        }
    EXPECT_GT(std::abs(s(g.N, g.N + 4)), 1e-9);
}

TEST(Operators, SingleLayerDiagonalContainsFreeSpaceTerm) {
    const Geometry g = geometry(0.3);
    const double k = 0.4;
    const Bloch alpha{1.0, 2.5};
    const Matrix s = single_layer_alpha(k, alpha, g.R, g.N);
    const auto q = lattice_sums(k, alpha, 2 * g.N);
    const CylinderTable t(g.N, k * g.R);
    const cplx c(0.0, -kPi * g.R / 2.0);
    for (int n = -g.N; n <= g.N; ++n) {
        const cplx expected = c * t.j(n) * t.h(n) + c * t.j(n) * t.j(n) * q(0);
        EXPECT_LT(std::abs(s(n + g.N, n + g.N) - expected), 1e-14 * std::abs(expected));
    }
}

TEST(Operators, DiluteCapacitanceLaw) {
    // Cap = -2 pi / (ln R + C) for small R: 2 pi / Cap + ln R is independent of R up to O(R^2).
    const auto constant = [](double R) { return 2.0 * kPi / quasiperiodic_capacitance(kAlphaStar, geometry(R)) + std::log(R); };
    const double c = constant(1e-4);
    for (double R : {1e-3, 1e-2, 0.05}) EXPECT_NEAR(constant(R), c, 1e-6) << "R=" << R;
    // The bare law -2 pi / ln R is approached only logarithmically.
    double prev = 1.0;
    for (double R : {0.05, 1e-2, 1e-3, 1e-4}) {
        const double law = -2.0 * kPi / std::log(R);
        const double gap = std::abs(quasiperiodic_capacitance(kAlphaStar, geometry(R)) - law) / law;
        EXPECT_LT(gap, prev);
        prev = gap;
    }
    EXPECT_LT(prev, 0.1);
}

TEST(Operators, CapacitanceMatchesBandEdge) {
    // omega* = sqrt(delta Cap / (pi R^2)) to leading order; at R = 0.05 the band edge 0.2591 fixes Cap.
    const double cap = quasiperiodic_capacitance(kAlphaStar, geometry(0.05));
    const double w = std::sqrt(kMed.delta() * cap / (kPi * 0.05 * 0.05));
    EXPECT_LT(std::abs(w - 0.2591) / 0.2591, 5e-3);
}

TEST(Operators, CapacitanceGrowsTowardTouchingBubbles) {
    const double c25 = quasiperiodic_capacitance(kAlphaStar, geometry(0.25));
    const double c35 = quasiperiodic_capacitance(kAlphaStar, geometry(0.35));
    const double c45 = quasiperiodic_capacitance(kAlphaStar, geometry(0.45));
    EXPECT_LT(c25, c35);
    EXPECT_LT(c35, c45);
}

TEST(Operators, StaticInnerProductIsRealNegativeAndBounded) {
    for (double R : {0.05, 0.2, 0.45})
        for (Bloch a : {kAlphaStar, Bloch{kPi, 1.0}, Bloch{0.6, 0.3}}) {
            const StaticSolution s = static_psi(a, geometry(R));
            EXPECT_LT(s.inner.real(), 0.0);
            EXPECT_LT(std::abs(s.inner.imag()), 1e-8 * std::abs(s.inner.real())) << "R=" << R;
            EXPECT_GE(s.psi_norm2, s.capacitance * s.capacitance / (2.0 * kPi * R) * (1.0 - 1e-12));
        }
}

TEST(Operators, StaticSingleLayerIsSmallWavenumberLimit) {
    const Matrix s0 = static_single_layer(kAlphaStar, 0.05, 7);
    const Matrix s = single_layer_alpha(1e-4, kAlphaStar, 0.05, 7);
    EXPECT_LT(max_abs(s - s0), 1e-6 * max_abs(s0));
}

TEST(Operators, ErrorPaths) {
    const Geometry g = geometry(0.05, -0.0015);
    EXPECT_THROW(assemble_A_alpha(0.2, Bloch{0.0, 0.0}, kMed, g), UnsupportedError);
    EXPECT_THROW(assemble_A_alpha(0.2, Bloch{2.0 * kPi, 0.0}, kMed, g), UnsupportedError);
    EXPECT_THROW(static_single_layer(Bloch{0.0, 0.0}, 0.05, 7), UnsupportedError);
    EXPECT_THROW(assemble_A_D(0.0, kMed, g), SingularArgument);
    EXPECT_THROW(assemble_A_D_eps(-1.0, kMed, g), InvalidArgument);
    // kw R_d at the first zero of J_0 makes the P1 and closed-form denominators vanish.
    const double j01 = 2.404825557695773;
    EXPECT_THROW(assemble_A_D_eps(j01 / g.R_d() * kMed.v_w(), kMed, g), ResonantDenominatorError);
    EXPECT_THROW(assemble_P1(j01 / g.R_d() * kMed.v_w(), kMed, g), ResonantDenominatorError);
}

TEST(Operators, AssemblyIsDeterministic) {
    const Geometry g = geometry(0.45, 0.0135);
    EXPECT_TRUE(assemble_A_alpha(0.108, {2.0, 3.0}, kMed, g).matrix() == assemble_A_alpha(0.108, {2.0, 3.0}, kMed, g).matrix());
    EXPECT_TRUE(assemble_A_D_eps(0.108, kMed, g).matrix() == assemble_A_D_eps(0.108, kMed, g).matrix());
}
