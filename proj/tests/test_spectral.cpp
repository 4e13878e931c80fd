#include "bubbly/errors.hpp"
#include "bubbly/spectral.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace bubbly;

namespace {

const Medium kMed{};

Geometry geometry(double R, int N = 7) {
    Geometry g;
    g.R = R;
    g.N = N;
    return g;
}

double omega_star(const Medium& med, const Geometry& g) { return first_band_frequency(kAlphaStar, med, g).root; }

}  // namespace

TEST(Muller, FindsSquareRootOfTwo) {
    const auto r = muller_find([](double w) { return cplx(w * w - 2.0); }, 1.5, {1.0, 2.0});
    EXPECT_NEAR(r.root, std::sqrt(2.0), 1e-12);
    EXPECT_LT(r.imag_residue, 1e-9);
}

TEST(Muller, ReportsFailure) {
    MullerOptions opt;
    opt.max_iter = 20;
    EXPECT_THROW(muller_find([](double w) { return cplx(w * w + 1.0); }, 1.5, {1.0, 2.0}, opt), NoRootFound);
    EXPECT_THROW(muller_find([](double w) { return cplx(w); }, 3.0, {1.0, 2.0}), InvalidArgument);
}

TEST(Spectral, BandEdgeDilute) {
    const double w = omega_star(kMed, geometry(0.05));
    EXPECT_LT(std::abs(w - 0.2591) / 0.2591, 5e-3);
}

TEST(Spectral, BandEdgeNonDilute) {
    const double w = omega_star(kMed, geometry(0.45));
    EXPECT_LT(std::abs(w - 0.10806) / 0.10806, 5e-3);
}

TEST(Spectral, DeterminantChangesSignAcrossFirstBand) {
    const Geometry g = geometry(0.05);
    for (Bloch a : {kAlphaStar, Bloch{kPi, 1.0}, Bloch{1.2, 0.9}}) {
        const double w1 = first_band_frequency(a, kMed, g).root;
        const ScaledDeterminant det(a, kMed, g, w1);
        // Scan 0.9 w1 .. 1.1 w1 and look for a sign change of Re det.
        bool change = false;
        double prev = det(0.9 * w1).real();
        for (int i = 1; i <= 40 && !change; ++i) {
            const double cur = det(0.9 * w1 + 0.2 * w1 * i / 40.0).real();
            change = (prev < 0.0) != (cur < 0.0);
            prev = cur;
        }
        EXPECT_TRUE(change) << "alpha=(" << a.x << "," << a.y << ")";
    }
}

TEST(Spectral, DeterminantReflectionSymmetry) {
    const Geometry g = geometry(0.3);
    for (Bloch a : {Bloch{0.8, 2.1}, Bloch{kPi, 1.3}}) {
        const cplx d = det_A(0.15, a, kMed, g);
        for (Bloch r : {Bloch{a.y, a.x}, Bloch{2.0 * kPi - a.x, a.y}, Bloch{a.x, 2.0 * kPi - a.y}})
            EXPECT_LT(std::abs(det_A(0.15, r, kMed, g) - d), 1e-9 * std::abs(d));
    }
}

TEST(Spectral, BandPathGeometry) {
    const auto path = band_path(24);
    ASSERT_EQ(path.size(), 73u);
    EXPECT_NEAR(distance_to_gamma(path.front().second), 2.0 * kPi / 240.0, 1e-14);
    EXPECT_NEAR(distance_to_gamma(path.back().second), 2.0 * kPi / 240.0, 1e-14);
    for (std::size_t i = 1; i < path.size(); ++i) EXPECT_GT(path[i].first, path[i - 1].first);
    EXPECT_EQ(path[48].second.x, kPi);
    EXPECT_EQ(path[48].second.y, kPi);
    EXPECT_THROW(band_path(0), InvalidArgument);
}

TEST(Spectral, BandStructureDilute) {
    const BandStructure bs = band_structure(kMed, geometry(0.05), 24);
    ASSERT_EQ(bs.failures(), 0u);
    for (const auto& s : bs.samples) {
        EXPECT_GT(s.omega, 0.0);
        EXPECT_LT(s.imag_residue, 1e-9);
        EXPECT_LE(s.omega, bs.omega_star * (1.0 + 1e-12));
        if (s.alpha.x != kPi || s.alpha.y != kPi) EXPECT_LT(s.omega, bs.omega_star);
        EXPECT_LT(std::abs(s.omega - s.asymptotic) / s.omega, 0.05) << "path=" << s.path;
    }
    // The band leaves zero at Gamma.
    EXPECT_LT(bs.samples.front().omega, 0.5 * bs.omega_star);
    EXPECT_LT(bs.samples.back().omega, 0.5 * bs.omega_star);
}

TEST(Spectral, TruncationConvergenceDilute) {
    const double w7 = omega_star(kMed, geometry(0.05, 7));
    const double w9 = omega_star(kMed, geometry(0.05, 9));
    EXPECT_LT(std::abs(w7 - w9) / w7, 1e-4);
}

TEST(Spectral, TruncationConvergenceNearlyTouching) {
    // At alpha* only orders 0 mod 4 couple to the monopole, so omega* moves when N crosses 8 and 12.
    // Close-packed bubbles need those orders: N = 7 is converged to a few 1e-4 only.
    const double w7 = omega_star(kMed, geometry(0.45, 7));
    const double w9 = omega_star(kMed, geometry(0.45, 9));
    const double w13 = omega_star(kMed, geometry(0.45, 13));
    const double w15 = omega_star(kMed, geometry(0.45, 15));
    EXPECT_LT(std::abs(w7 - omega_star(kMed, geometry(0.45, 5))) / w7, 1e-12);
    EXPECT_LT(std::abs(w7 - w9) / w7, 1e-3);
    EXPECT_LT(std::abs(w9 - w13), std::abs(w7 - w9));
    EXPECT_LT(std::abs(w13 - w15) / w13, 1e-10);
}

TEST(Spectral, CurvatureIsPositiveAndWellFitted) {
    for (double R : {0.05, 0.45}) {
        const Geometry g = geometry(R);
        const double ws = omega_star(kMed, g);
        const CurvatureFit fit = band_curvature(kMed, g, ws);
        EXPECT_GT(fit.c_delta, 0.0);
        EXPECT_LT(fit.relative_residual, 0.01) << "R=" << R;
        for (double d : fit.drops) EXPECT_GT(d, 0.0);
    }
}

TEST(Spectral, CurvatureShrinksWithContrast) {
    const Geometry g = geometry(0.05);
    Medium softer;
    softer.rho_w = softer.kappa_w = 20000.0;  // delta = 5e-5, same water sound speed
    const double c_hi = band_curvature(kMed, g, omega_star(kMed, g)).c_delta;
    const double c_lo = band_curvature(softer, g, omega_star(softer, g)).c_delta;
    EXPECT_LT(c_lo, c_hi);
    // c = O(sqrt(delta)): quartering delta roughly halves c.
    EXPECT_NEAR(c_lo / c_hi, 0.5, 0.1);
}
