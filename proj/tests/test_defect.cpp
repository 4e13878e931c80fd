#include "bubbly/defect.hpp"
#include "bubbly/errors.hpp"
#include "bubbly/spectral.hpp"

#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <map>
#include <utility>

using namespace bubbly;

namespace {

const Medium kMed{};

Geometry geometry(double R, double eps = 0.0) {
    Geometry g;
    g.R = R;
    g.eps = eps;
    return g;
}

// One dilute analysis shared by the tests below; it dominates the runtime of this suite.
const DefectResult& dilute_result() {
    static const DefectResult r = analyze_defect(kMed, geometry(0.05, -0.0015));
    return r;
}

Vector boundary_density(int N) {
    Vector psi(2 * N + 1);
    for (int n = -N; n <= N; ++n) psi(n + N) = cplx(1.0 / (1.0 + n * n), 0.3 * n / (2.0 + std::abs(n)));
    return psi;
}

}  // namespace

TEST(Defect, ZeroPerturbationGivesIdentity) {
    const Geometry g = geometry(0.05);
    const double ws = 0.2591406425;
    BZQuadratureOptions opt;
    opt.order = 8;
    const FourierBlockMatrix m = assemble_M_eps(ws * 1.01, ws, kMed, g, opt);
    EXPECT_TRUE(m.matrix() == Matrix::Identity(m.dim(), m.dim()));
    EXPECT_EQ(m.matrix().determinant(), cplx(1.0));
    const DefectResult r = find_defect_frequency(kMed, g, ws);
    EXPECT_FALSE(r.exists);
    EXPECT_FALSE(r.omega_eps.has_value());
}

TEST(Defect, ResonantPartOfDeterminantFadesAwayFromEdge) {
    // Far from omega* the averaged inverse acts like A_D^{-1} in every order, so det M tends to
    // det A_D^eps / det A_D (about (R / R_d)^{2|n|} summed over orders), not to 1. What decays is the
    // resonant part: det M divided by that factor, and the monopole block of M, both approach 1.
    const Geometry g = geometry(0.05, -0.0015);
    const double ws = 0.2591406425;
    BZQuadratureOptions opt;
    opt.order = 12;
    double prev_full = 1e300, prev_mono = 1e300;
    for (double rel : {1e-4, 1e-3, 1e-2, 1e-1, 0.2}) {
        const double w = ws * (1.0 + rel);
        const FourierBlockMatrix m = assemble_M_eps(w, ws, kMed, g, opt);
        const cplx background = assemble_A_D_eps(w, kMed, g).matrix().determinant() / assemble_A_D(w, kMed, g).matrix().determinant();
        const double full = std::abs(m.matrix().determinant() / background - 1.0);
        const double mono = std::abs(m(0, 0, 0, 0) * m(1, 0, 1, 0) - m(0, 0, 1, 0) * m(1, 0, 0, 0) - 1.0);
        EXPECT_LT(full, prev_full) << "rel=" << rel;
        EXPECT_LT(mono, prev_mono) << "rel=" << rel;
        prev_full = full;
        prev_mono = mono;
    }
    EXPECT_LT(prev_full, 0.05);
    EXPECT_LT(prev_mono, 0.06);
}

TEST(Defect, DiluteModeFrequency) {
    const DefectResult& r = dilute_result();
    ASSERT_TRUE(r.exists) << r.note;
    ASSERT_TRUE(r.omega_eps.has_value());
    EXPECT_EQ(r.regime, Regime::dilute);
    EXPECT_LT(r.S_of_R, 0.0);
    EXPECT_GT(*r.omega_eps, r.omega_star);
    EXPECT_LT(*r.omega_eps, r.gap_ceiling);
    EXPECT_LT(std::abs(*r.omega_eps - 0.2592) / 0.2592, 5e-3);
    EXPECT_LT(r.imag_residue, 1e-9);
    EXPECT_LE(r.residual, 1e-6);
    EXPECT_LT(r.sigma_ratio, 1e-5);
    ASSERT_TRUE(r.omega_eps_asymptotic.has_value());
    EXPECT_GT(*r.omega_eps_asymptotic, r.omega_star);
}

TEST(Defect, SourcePairIsNullVector) {
    const DefectResult& r = dilute_result();
    ASSERT_TRUE(r.exists);
    const Geometry g = geometry(0.05, -0.0015);
    const Matrix m = assemble_M_eps(*r.omega_eps, r.omega_star, kMed, g).matrix();
    const double norm = Eigen::JacobiSVD<Matrix>(m).singularValues()(0);
    EXPECT_NEAR(r.source_pair.norm(), 1.0, 1e-12);
    EXPECT_LE((m * r.source_pair).norm(), 1e-6 * norm);
}

TEST(Defect, FactorS) {
    EXPECT_LT(factor_S(geometry(0.05)), 0.0);
    EXPECT_GT(factor_S(geometry(0.45)), 0.0);
    EXPECT_LT(factor_S(geometry(0.3)), 0.0);
    EXPECT_GT(factor_S(geometry(0.35)), 0.0);
    // Small R: S ~ (2 pi / ln R)(1 / ln R + 2).
    const double R = 1e-3, l = std::log(R);
    const double law = (2.0 * kPi / l) * (1.0 / l + 2.0);
    EXPECT_LT(std::abs(factor_S(geometry(R)) - law) / std::abs(law), 0.1);
}

TEST(Defect, AsymptoticFrequencyApproachesEdge) {
    const DefectResult& r = dilute_result();
    double prev = 1e300;
    for (double f : {-0.04, -0.03, -0.02, -0.01}) {
        const auto w = asymptotic_defect_frequency(kMed, geometry(0.05, f * 0.05), r.omega_star, r.c_delta);
        ASSERT_TRUE(w.has_value()) << "eps/R=" << f;
        EXPECT_GT(*w, r.omega_star);
        EXPECT_LT(*w - r.omega_star, prev);
        prev = *w - r.omega_star;
    }
    // Wrong sign: the exponent is positive and there is no asymptotic mode.
    EXPECT_GT(asymptotic_exponent(kMed, geometry(0.05, 0.0015), r.omega_star, r.c_delta), 0.0);
    EXPECT_FALSE(asymptotic_defect_frequency(kMed, geometry(0.05, 0.0015), r.omega_star, r.c_delta).has_value());
    EXPECT_THROW(asymptotic_exponent(kMed, geometry(0.05), r.omega_star, r.c_delta), InvalidArgument);
}

TEST(Defect, SingleLayerFieldTraceMatchesBoundaryOperator) {
    const Bloch alpha{1.1, 2.7};
    const int N = 7, Nb = 30;
    for (const auto& [R, tol] : {std::pair{0.05, 1e-10}, std::pair{0.45, 1e-6}}) {
        const double k = 0.2;
        const Vector psi = boundary_density(N);
        Vector wide = Vector::Zero(2 * Nb + 1);
        wide.segment(Nb - N, 2 * N + 1) = psi;
        const Vector trace = single_layer_alpha(k, alpha, R, Nb) * wide;
        for (double th : {0.0, 0.7, 2.0, 4.4}) {
            cplx ref = 0.0;
            for (int m = -Nb; m <= Nb; ++m) ref += trace(m + Nb) * std::exp(cplx(0.0, m * th));
            // Nudged outward so rounding cannot place the point inside the disk.
            const double r = R * (1.0 + 1e-13);
            const cplx got = single_layer_field(k, alpha, R, N, psi, r * std::cos(th), r * std::sin(th));
            EXPECT_LT(std::abs(got - ref), tol * std::abs(ref)) << "R=" << R << " theta=" << th;
        }
    }
}

TEST(Defect, SingleLayerFieldIsQuasiPeriodic) {
    const Bloch alpha{1.1, 2.7};
    const Vector psi = boundary_density(7);
    for (double R : {0.05, 0.45})
        for (double s : {-0.3, 0.0, 0.2}) {
            const cplx right = single_layer_field(0.2, alpha, R, 7, psi, 0.5, s);
            const cplx left = single_layer_field(0.2, alpha, R, 7, psi, -0.5, s);
            EXPECT_LT(std::abs(right - std::exp(cplx(0.0, alpha.x)) * left), 1e-9 * std::abs(right));
            const cplx top = single_layer_field(0.2, alpha, R, 7, psi, s, 0.5);
            const cplx bottom = single_layer_field(0.2, alpha, R, 7, psi, s, -0.5);
            EXPECT_LT(std::abs(top - std::exp(cplx(0.0, alpha.y)) * bottom), 1e-9 * std::abs(top));
        }
    EXPECT_THROW(single_layer_field(0.2, alpha, 0.05, 7, psi, 0.01, 0.0), InvalidArgument);
    EXPECT_THROW(single_layer_field(0.2, alpha, 0.05, 7, psi, 0.6, 0.0), InvalidArgument);
    EXPECT_THROW(single_layer_field(0.2, alpha, 0.05, 7, boundary_density(3), 0.3, 0.0), InvalidArgument);
}

TEST(Defect, ModeIsNormalizedSymmetricAndMonotone) {
    const DefectResult& r = dilute_result();
    ASSERT_TRUE(r.exists);
    const ModeField f = reconstruct_mode(r, kMed, geometry(0.05, -0.0015), {}, {3, 6});
    ASSERT_EQ(f.samples.size(), 49u * 36u);
    ASSERT_EQ(f.ring_max.size(), 4u);
    EXPECT_NEAR(f.ring_max[0], 1.0, 1e-14);
    for (std::size_t d = 1; d < f.ring_max.size(); ++d) EXPECT_LE(f.ring_max[d], f.ring_max[d - 1]);

    std::map<std::pair<long, long>, double> amp;
    const auto key = [](double x, double y) { return std::pair{std::lround(x * 1200.0), std::lround(y * 1200.0)}; };
    for (const auto& s : f.samples) amp[key(s.x, s.y)] = std::abs(s.u);
    for (const auto& s : f.samples) {
        const auto it = amp.find(key(-s.y, s.x));
        ASSERT_NE(it, amp.end());
        EXPECT_LT(std::abs(it->second - std::abs(s.u)), 1e-3);
    }
}

TEST(Defect, ModeRejectsDegenerateInput) {
    const DefectResult& r = dilute_result();
    EXPECT_THROW(reconstruct_mode(r, kMed, geometry(0.05)), InvalidArgument);
    DefectResult none = r;
    none.exists = false;
    none.omega_eps.reset();
    EXPECT_THROW(reconstruct_mode(none, kMed, geometry(0.05, -0.0015)), InvalidArgument);
}
