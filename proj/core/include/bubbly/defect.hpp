#pragma once

#include "bubbly/lattice_sums.hpp"
#include "bubbly/medium.hpp"
#include "bubbly/operators.hpp"
#include "bubbly/quadrature.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bubbly {

enum class Regime { dilute, nondilute };

const char* to_string(Regime r);

struct DefectSearchOptions {
    BZQuadratureOptions quad;
    double floor_rel = 1e-6;     // search starts at omega* (1 + floor_rel)
    double ceiling_rel = 0.2;    // heuristic gap ceiling omega* (1 + ceiling_rel)
    double search_fraction = 0.2;  // fraction of the gap that is scanned
    int scan_points = 16;
    int restarts = 3;
    int restart_iterations = 30;  // Muller cap per restart; bracketed roots get the full default
    double null_tolerance = 1e-6;  // accepted ||M v|| / ||M||
    unsigned workers = 0;
};

struct DefectResult {
    bool exists = false;
    std::optional<double> omega_eps;
    std::optional<double> omega_eps_asymptotic;
    Vector source_pair;  // unit-norm (f, g) with M^eps(omega_eps) (f, g) ~ 0
    double residual = 0.0;       // ||M v|| / ||M||_2
    double sigma_ratio = 0.0;    // sigma_min / sigma_max of M at the root
    double imag_residue = 0.0;
    double omega_star = 0.0;
    double gap_ceiling = 0.0;
    double c_delta = 0.0;
    double S_of_R = 0.0;
    Regime regime = Regime::dilute;
    int quadrature_levels = 0;
    std::string note;
};

/// (1/(2pi)^2) int_BZ A^alpha(omega)^{-1} d alpha on the given rule. Throws InBandError when a
/// node matrix is numerically singular.
FourierBlockMatrix bz_average_inverse(double omega, const Medium& med, const Geometry& geo, const BZQuadrature& rule,
                                      unsigned workers = 0, LatticeSumCache& cache = default_lattice_cache());

/// Same, with the rule refined toward alpha* according to omega - omega*. Throws InBandError if omega <= omega*.
FourierBlockMatrix bz_average_inverse(double omega, double omega_star, const Medium& med, const Geometry& geo,
                                      const BZQuadratureOptions& opt = {}, unsigned workers = 0);

/// M^eps(omega) = I + (A_D^eps - A_D) * average.
FourierBlockMatrix assemble_M_eps(double omega, const Medium& med, const Geometry& geo, const FourierBlockMatrix& average);
FourierBlockMatrix assemble_M_eps(double omega, double omega_star, const Medium& med, const Geometry& geo,
                                  const BZQuadratureOptions& opt = {}, unsigned workers = 0);

/// S(R) = R ||psi_{alpha*}||^2 - 2 Cap_{D,alpha*}.
double factor_S(const Geometry& geo);

/// Exponent 2 pi c_delta A / B of the refined asymptotic law; positive means no asymptotic mode.
double asymptotic_exponent(const Medium& med, const Geometry& geo, double omega_star, double c_delta);

/// omega* + exp(exponent), or nothing when the exponent is not negative.
std::optional<double> asymptotic_defect_frequency(const Medium& med, const Geometry& geo, double omega_star, double c_delta);

/// Root of det M^eps in (omega* (1 + floor_rel), omega* + search_fraction * gap). Absence of a root is a
/// result (exists = false). Fills the root-related fields only.
DefectResult find_defect_frequency(const Medium& med, const Geometry& geo, double omega_star,
                                   const DefectSearchOptions& opt = {});

/// Band edge, curvature, S(R), asymptotic frequency and the root find for one configuration.
DefectResult analyze_defect(const Medium& med, const Geometry& geo, const DefectSearchOptions& opt = {});

struct ModeGrid {
    int cells = 3;        // K: the grid spans cells -K..K in each direction
    int resolution = 12;  // samples per cell side
};

struct ModeSample {
    double x = 0.0, y = 0.0;
    int cell_x = 0, cell_y = 0;
    cplx u = 0.0;
};

struct ModeField {
    std::vector<ModeSample> samples;
    std::vector<double> ring_max;  // max |u| over cells at Chebyshev lattice distance d
    int cells = 0;
    int resolution = 0;
};

/// S_D^{alpha,k}[psi](x, y) at a point of the reference cell [-1/2, 1/2]^2 outside the disk.
cplx single_layer_field(double k, Bloch alpha, double R, int N, const Vector& psi, double x, double y);

/// Localized mode u(x) = (1/(2pi)^2) int u^alpha(x) d alpha from the null source pair, normalized so
/// that max |u| = 1 in the defect cell. Requires defect.exists.
ModeField reconstruct_mode(const DefectResult& defect, const Medium& med, const Geometry& geo,
                           const BZQuadratureOptions& quad = {}, const ModeGrid& grid = {}, unsigned workers = 0);

}  // namespace bubbly
