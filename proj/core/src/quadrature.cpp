#include "bubbly/quadrature.hpp"

#include "bubbly/errors.hpp"

#include <cmath>

namespace bubbly {

GaussRule gauss_legendre(int n, double a, double b) {
    if (n < 1) throw InvalidArgument("gauss_legendre: need at least one point");
    GaussRule r;
    r.x.resize(n);
    r.w.resize(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 1; j <= n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
            }
            dp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / dp;
            z -= dz;
            if (std::abs(dz) < 1e-16) break;
        }
        // Recompute the derivative at the converged node for the weight.
        double p0 = 1.0, p1 = 0.0;
        for (int j = 1; j <= n; ++j) {
            const double p2 = p1;
            p1 = p0;
            p0 = ((2.0 * j - 1.0) * z * p1 - (j - 1.0) * p2) / j;
        }
        dp = n * (z * p0 - p1) / (z * z - 1.0);
        const double w = 2.0 / ((1.0 - z * z) * dp * dp);
        r.x[i] = mid - half * z;
        r.x[n - 1 - i] = mid + half * z;
        r.w[i] = r.w[n - 1 - i] = half * w;
    }
    return r;
}

int refinement_levels(double omega, double omega_star, const BZQuadratureOptions& opt) {
    const double gap = omega - omega_star;
    if (!(gap > 0.0)) throw InBandError("refinement_levels: frequency is not above the band edge");
    if (gap >= opt.refine_threshold * omega_star) return 0;
    const double target = std::sqrt(gap / omega_star);
    return std::max(1, static_cast<int>(std::ceil(std::log2(kPi / target))));
}

namespace {

struct Cell {
    double x0, y0, h;
};

// Appends the tensor rule on a square cell of side h at offset (x0, y0) from alpha*.
// With fold, nodes below the diagonal are dropped and those above it are mirrored.
void add_cell(std::vector<BZNode>& out, const Cell& c, int n, bool self_symmetric, bool fold, double scale) {
    const GaussRule g = gauss_legendre(n, 0.0, c.h);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const double bx = c.x0 + g.x[i], by = c.y0 + g.x[j];
            double w = g.w[i] * g.w[j] * scale;
            bool mirrored = false;
            if (fold && self_symmetric) {
                if (i > j) continue;
                mirrored = i < j;
            } else if (fold) {
                mirrored = true;  // partner cell is not emitted
            }
            out.push_back({{kPi + bx, kPi + by}, w, mirrored});
        }
    }
}

}  // namespace

BZQuadrature make_bz_quadrature(int levels, const BZQuadratureOptions& opt) {
    if (opt.order < 2) throw InvalidArgument("make_bz_quadrature: order must be >= 2");
    if (levels < 0 || levels > 40) throw InvalidArgument("make_bz_quadrature: refinement depth out of range");
    const int nr = opt.refined_order > 0 ? opt.refined_order : std::max(8, opt.order / 2);
    const double scale = 1.0 / (kPi * kPi);  // quadrant area
    BZQuadrature q;
    q.levels = levels;
    q.folded = opt.fold_symmetry;
    std::vector<BZNode> quad;
    if (levels == 0) {
        add_cell(quad, {0.0, 0.0, kPi}, opt.order, true, opt.fold_symmetry, scale);
    } else {
        double h = kPi;
        for (int l = 0; l < levels; ++l) {
            h *= 0.5;
            add_cell(quad, {h, h, h}, nr, true, opt.fold_symmetry, scale);
            add_cell(quad, {0.0, h, h}, nr, false, opt.fold_symmetry, scale);
            if (!opt.fold_symmetry) add_cell(quad, {h, 0.0, h}, nr, false, false, scale);
        }
        add_cell(quad, {0.0, 0.0, h}, nr, true, opt.fold_symmetry, scale);
    }
    if (opt.fold_symmetry) {
        q.nodes = std::move(quad);
        return q;
    }
    // Rotate the quadrant about alpha* to cover the zone; each copy gets a quarter of the mass.
    for (int r = 0; r < 4; ++r) {
        for (const BZNode& nd : quad) {
            double bx = nd.alpha.x - kPi, by = nd.alpha.y - kPi;
            for (int s = 0; s < r; ++s) {
                const double t = bx;
                bx = -by;
                by = t;
            }
            q.nodes.push_back({{kPi + bx, kPi + by}, 0.25 * nd.weight, false});
        }
    }
    return q;
}

}  // namespace bubbly
