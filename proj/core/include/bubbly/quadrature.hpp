#pragma once

#include "bubbly/lattice_sums.hpp"

#include <vector>

namespace bubbly {

struct GaussRule {
    std::vector<double> x;
    std::vector<double> w;
};

/// n-point Gauss-Legendre rule on [a, b].
GaussRule gauss_legendre(int n, double a = -1.0, double b = 1.0);

struct BZQuadratureOptions {
    int order = 24;                   // points per axis on the unrefined quadrant
    int refined_order = 0;            // points per axis on dyadic cells; 0 selects max(8, order / 2)
    double refine_threshold = 1e-2;   // refine when (omega - omega*) < threshold * omega*
    bool fold_symmetry = true;        // use the square-lattice point group to cut the node count by 8
};

/// One quadrature node. A mirrored node also stands for its reflection across the diagonal
/// alpha_x - pi = alpha_y - pi, which carries the same weight.
struct BZNode {
    Bloch alpha;
    double weight = 0.0;
    bool mirrored = false;
};

/// Rule for the BZ average (1/(2pi)^2) int f(alpha) d alpha. In folded form the nodes cover
/// alpha* + [0, pi]^2 only (weights sum to 1 over that quadrant counting mirrors twice) and the
/// caller restores the full zone by symmetry. Unfolded rules cover all four quadrants.
struct BZQuadrature {
    std::vector<BZNode> nodes;
    int levels = 0;
    bool folded = true;
};

/// Tensor Gauss rule on the quadrant with `levels` dyadic refinements toward alpha*:
/// at each level the current corner cell is split into four and the three cells away from alpha* get
/// their own Gauss rule.
BZQuadrature make_bz_quadrature(int levels, const BZQuadratureOptions& opt);

/// Refinement depth for a frequency omega above the band edge omega*. The innermost cell side is
/// at most sqrt((omega - omega*) / omega*), which resolves the peak of (A^alpha)^{-1} at alpha*.
int refinement_levels(double omega, double omega_star, const BZQuadratureOptions& opt);

}  // namespace bubbly
