#pragma once

#include "bubbly/lattice_sums.hpp"
#include "bubbly/medium.hpp"
#include "bubbly/operators.hpp"

#include <array>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace bubbly {

struct Interval {
    double lo;
    double hi;
    bool contains(double x) const { return x >= lo && x <= hi; }
};

struct MullerOptions {
    double step_tol = 1e-10;  // absolute, on the real step
    double f_tol = 1e-12;     // on |f| relative to |f(seed)|
    int max_iter = 100;
};

struct MullerResult {
    double root = 0.0;
    double imag_residue = 0.0;  // |Im| of the last complex Muller step
    int iterations = 0;
};

/// Muller's method restricted to the real axis: each parabola root is computed in complex
/// arithmetic and its real part is taken as the next iterate. The initial triple is
/// {seed (1 - h), seed, seed (1 + h)} with h = 1e-3 unless `triple` is supplied.
/// Throws NoRootFound when the iteration cap is hit.
MullerResult muller_find(const std::function<cplx(double)>& f, double seed, Interval bracket, const MullerOptions& opt = {},
                         std::optional<std::array<double, 3>> triple = std::nullopt);

/// Raw determinant of A^alpha(omega).
cplx det_A(double omega, Bloch alpha, const Medium& med, const Geometry& geo);

/// det A^alpha(omega) / det A^alpha(omega_ref).
class ScaledDeterminant {
public:
    ScaledDeterminant(Bloch alpha, const Medium& med, const Geometry& geo, double omega_ref);
    cplx operator()(double omega) const;
    double reference() const { return omega_ref_; }

private:
    Bloch alpha_;
    Medium med_;
    Geometry geo_;
    double omega_ref_;
    cplx ref_;
};

/// Leading-order first-band frequency sqrt(delta Cap_alpha / (pi R^2)) scaled by the bubble sound speed.
double first_band_asymptotic(Bloch alpha, const Medium& med, const Geometry& geo, double* capacitance = nullptr);

/// First resonance omega_1^alpha by Muller on the scaled determinant, seeded by the asymptotic value.
MullerResult first_band_frequency(Bloch alpha, const Medium& med, const Geometry& geo, std::optional<double> seed = std::nullopt);

struct BandSample {
    double path = 0.0;  // arclength along Gamma-X-M-Gamma
    Bloch alpha;
    double omega = 0.0;
    double asymptotic = 0.0;  // sqrt(delta Cap / (pi R^2))
    double capacitance = 0.0;
    double imag_residue = 0.0;
    bool ok = false;
    std::string error;
};

struct BandStructure {
    std::vector<BandSample> samples;
    double omega_star = 0.0;
    Bloch alpha_star = kAlphaStar;
    std::size_t failures() const;
};

/// Sample points of the Gamma-X-M-Gamma path, 3 * samples_per_edge + 1 of them; the first and last
/// sit 2 pi / (10 samples_per_edge) away from Gamma.
std::vector<std::pair<double, Bloch>> band_path(int samples_per_edge);

BandStructure band_structure(const Medium& med, const Geometry& geo, int samples_per_edge, unsigned workers = 0);

struct CurvatureFit {
    double c_delta = 0.0;
    std::vector<double> radii;
    std::vector<double> drops;      // omega_star - omega_1 at each sample (both directions)
    double relative_residual = 0.0;  // |fit - drop| / drop at the largest radius, worst direction
};

/// Least-squares fit of omega_star - omega_1^alpha = (c/2)|alpha - alpha*|^2 along M->X and M->Gamma.
CurvatureFit band_curvature(const Medium& med, const Geometry& geo, double omega_star);

}  // namespace bubbly
