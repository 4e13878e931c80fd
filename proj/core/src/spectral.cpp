#include "bubbly/spectral.hpp"

#include "bubbly/errors.hpp"
#include "bubbly/parallel.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>

namespace bubbly {

namespace {

double path_offset(int samples_per_edge) { return 2.0 * kPi / (10.0 * samples_per_edge); }

}  // namespace

MullerResult muller_find(const std::function<cplx(double)>& f, double seed, Interval bracket, const MullerOptions& opt,
                         std::optional<std::array<double, 3>> triple) {
    if (!bracket.contains(seed)) throw InvalidArgument("muller_find: seed outside bracket");
    std::array<double, 3> x = triple.value_or(std::array<double, 3>{seed * (1.0 - 1e-3), seed, seed * (1.0 + 1e-3)});
    for (double& xi : x) xi = std::clamp(xi, bracket.lo, bracket.hi);
    std::array<cplx, 3> fx{f(x[0]), f(x[1]), f(x[2])};
    const double f_ref = std::max(std::abs(fx[1]), 1e-300);

    MullerResult res;
    for (int it = 1; it <= opt.max_iter; ++it) {
        const double h1 = x[1] - x[0], h2 = x[2] - x[1];
        cplx dx;
        if (h1 == 0.0 || h2 == 0.0 || h1 + h2 == 0.0) {
            dx = 0.5 * (bracket.hi - bracket.lo) * 1e-3;
        } else {
            const cplx d1 = (fx[1] - fx[0]) / h1, d2 = (fx[2] - fx[1]) / h2;
            const cplx a = (d2 - d1) / (h2 + h1);
            const cplx b = a * h2 + d2;
            const cplx disc = std::sqrt(b * b - 4.0 * a * fx[2]);
            const cplx den = std::abs(b + disc) > std::abs(b - disc) ? b + disc : b - disc;
            dx = den == cplx(0.0) ? cplx(1e-3 * (std::abs(x[2]) + 1e-3)) : -2.0 * fx[2] / den;
        }
        double next = x[2] + dx.real();
        if (next < bracket.lo) next = 0.5 * (x[2] + bracket.lo);
        if (next > bracket.hi) next = 0.5 * (x[2] + bracket.hi);
        const double step = next - x[2];
        res.iterations = it;
        res.imag_residue = std::abs(dx.imag());
        x = {x[1], x[2], next};
        fx = {fx[1], fx[2], f(next)};
        res.root = next;
        if (std::abs(step) < opt.step_tol || std::abs(fx[2]) <= opt.f_tol * f_ref) return res;
        if (!std::isfinite(next)) break;
    }
    throw NoRootFound("muller_find: no convergence within " + std::to_string(opt.max_iter) + " iterations");
}

cplx det_A(double omega, Bloch alpha, const Medium& med, const Geometry& geo) {
    return assemble_A_alpha(omega, alpha, med, geo).matrix().partialPivLu().determinant();
}

ScaledDeterminant::ScaledDeterminant(Bloch alpha, const Medium& med, const Geometry& geo, double omega_ref)
    : alpha_(alpha), med_(med), geo_(geo), omega_ref_(omega_ref), ref_(det_A(omega_ref, alpha, med, geo)) {
    if (ref_ == cplx(0.0) || !std::isfinite(std::abs(ref_)))
        throw AssemblyError("ScaledDeterminant: reference determinant is zero or not finite");
}

cplx ScaledDeterminant::operator()(double omega) const { return det_A(omega, alpha_, med_, geo_) / ref_; }

double first_band_asymptotic(Bloch alpha, const Medium& med, const Geometry& geo, double* capacitance) {
    const double cap = quasiperiodic_capacitance(alpha, geo);
    if (capacitance) *capacitance = cap;
    if (!(cap > 0.0)) throw AssemblyError("first_band_asymptotic: non-positive capacitance");
    return med.v_b() * std::sqrt(med.delta() * cap / (kPi * geo.R * geo.R));
}

MullerResult first_band_frequency(Bloch alpha, const Medium& med, const Geometry& geo, std::optional<double> seed) {
    const double s = seed ? *seed : first_band_asymptotic(alpha, med, geo);
    const ScaledDeterminant f(alpha, med, geo, s);
    return muller_find(std::cref(f), s, {0.5 * s, 2.0 * s});
}

std::size_t BandStructure::failures() const {
    return static_cast<std::size_t>(std::count_if(samples.begin(), samples.end(), [](const BandSample& b) { return !b.ok; }));
}

std::vector<std::pair<double, Bloch>> band_path(int samples_per_edge) {
    if (samples_per_edge < 1) throw InvalidArgument("band_path: samples_per_edge must be positive");
    const int s = samples_per_edge;
    const double off = path_offset(s);
    std::vector<std::pair<double, Bloch>> out;
    for (int i = 0; i < s; ++i) {
        const double t = i == 0 ? off : kPi * i / s;
        out.push_back({t, {t, 0.0}});
    }
    for (int i = 0; i < s; ++i) out.push_back({kPi + kPi * i / s, {kPi, kPi * i / s}});
    const double diag = kPi * std::sqrt(2.0);
    for (int i = 0; i <= s; ++i) {
        double len = diag * i / s;  // distance travelled from M towards Gamma
        if (i == s) len = diag - off;
        const double c = kPi - len / std::sqrt(2.0);
        out.push_back({2.0 * kPi + len, {c, c}});
    }
    return out;
}

BandStructure band_structure(const Medium& med, const Geometry& geo, int samples_per_edge, unsigned workers) {
    med.validate();
    geo.validate();
    if (samples_per_edge < 8) throw InvalidArgument("band_structure: samples_per_edge must be >= 8");
    const auto path = band_path(samples_per_edge);
    BandStructure bs;
    bs.samples.resize(path.size());
    parallel_for(
        path.size(),
        [&](std::size_t i) {
            BandSample& b = bs.samples[i];
            b.path = path[i].first;
            b.alpha = path[i].second;
            try {
                b.asymptotic = first_band_asymptotic(b.alpha, med, geo, &b.capacitance);
                const MullerResult r = first_band_frequency(b.alpha, med, geo, b.asymptotic);
                b.omega = r.root;
                b.imag_residue = r.imag_residue;
                b.ok = true;
            } catch (const Error& e) {
                b.ok = false;
                b.error = e.what();
            }
        },
        workers);
    const std::size_t m_index = 2 * static_cast<std::size_t>(samples_per_edge);
    if (!bs.samples[m_index].ok) throw NoRootFound("band_structure: root find failed at M: " + bs.samples[m_index].error);
    bs.omega_star = bs.samples[m_index].omega;
    return bs;
}

CurvatureFit band_curvature(const Medium& med, const Geometry& geo, double omega_star) {
    CurvatureFit fit;
    fit.radii = {0.06, 0.12, 0.18, 0.24, 0.30};
    const double inv = 1.0 / std::sqrt(2.0);
    const std::array<Bloch, 2> dirs{Bloch{0.0, -1.0}, Bloch{-inv, -inv}};
    double sxy = 0.0, sxx = 0.0;
    std::vector<std::vector<double>> drops(dirs.size());
    for (std::size_t d = 0; d < dirs.size(); ++d) {
        for (double r : fit.radii) {
            const Bloch a{kPi + r * dirs[d].x, kPi + r * dirs[d].y};
            const double w = first_band_frequency(a, med, geo, omega_star).root;
            const double x = r * r, y = omega_star - w;
            drops[d].push_back(y);
            fit.drops.push_back(y);
            sxy += x * y;
            sxx += x * x;
        }
    }
    fit.c_delta = 2.0 * sxy / sxx;
    if (!(fit.c_delta > 0.0)) throw CurvatureFitError("band_curvature: fitted c_delta is not positive");
    const double x = fit.radii.back() * fit.radii.back();
    for (const auto& dd : drops) {
        const double y = dd.back();
        fit.relative_residual = std::max(fit.relative_residual, std::abs(0.5 * fit.c_delta * x - y) / std::abs(y));
    }
    return fit;
}

}  // namespace bubbly
