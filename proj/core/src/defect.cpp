#include "bubbly/defect.hpp"

#include "bubbly/errors.hpp"
#include "bubbly/parallel.hpp"
#include "bubbly/spectral.hpp"

#include <Eigen/LU>
#include <Eigen/SVD>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace bubbly {

namespace {

const cplx I(0.0, 1.0);

constexpr std::size_t kBlock = 32;  // nodes per sequential accumulation block

cplx ipow(int p) {
    switch (((p % 4) + 4) % 4) {
        case 0: return 1.0;
        case 1: return I;
        case 2: return -1.0;
        default: return -I;
    }
}

// X(s alpha) for the diagonal swap s about alpha*: entry (m, n) -> i^{n-m} X_{-m,-n} in every block.
Matrix swap_transform(const FourierBlockMatrix& x) {
    const int N = x.N();
    FourierBlockMatrix y(N, false);
    for (int rb = 0; rb < 2; ++rb)
        for (int cb = 0; cb < 2; ++cb)
            for (int m = -N; m <= N; ++m)
                for (int n = -N; n <= N; ++n) y(rb, m, cb, n) = ipow(n - m) * x(rb, -m, cb, -n);
    return y.matrix();
}

Matrix node_inverse(double omega, Bloch alpha, const Medium& med, const Geometry& geo, LatticeSumCache& cache) {
    const FourierBlockMatrix a = assemble_A_alpha(omega, alpha, med, geo, cache);
    Eigen::PartialPivLU<Matrix> lu(a.matrix());
    if (!(lu.rcond() > 1e-14))
        throw InBandError("bz_average_inverse: A^alpha is singular at a quadrature node (frequency inside a band)");
    return lu.inverse();
}

}  // namespace

const char* to_string(Regime r) { return r == Regime::dilute ? "dilute" : "nondilute"; }

FourierBlockMatrix bz_average_inverse(double omega, const Medium& med, const Geometry& geo, const BZQuadrature& rule,
                                      unsigned workers, LatticeSumCache& cache) {
    med.validate();
    geo.validate();
    const std::size_t n = rule.nodes.size();
    if (n == 0) throw InvalidArgument("bz_average_inverse: empty quadrature rule");
    const int dim = 2 * (2 * geo.N + 1);
    const std::size_t blocks = (n + kBlock - 1) / kBlock;
    std::vector<Matrix> partial(blocks);
    parallel_for(
        blocks,
        [&](std::size_t b) {
            Matrix acc = Matrix::Zero(dim, dim);
            for (std::size_t i = b * kBlock; i < std::min(n, (b + 1) * kBlock); ++i) {
                const BZNode& nd = rule.nodes[i];
                FourierBlockMatrix x(geo.N, false, node_inverse(omega, nd.alpha, med, geo, cache));
                acc += nd.weight * x.matrix();
                if (rule.folded && nd.mirrored) acc += nd.weight * swap_transform(x);
            }
            partial[b] = std::move(acc);
        },
        workers);
    FourierBlockMatrix out(geo.N, false, pairwise_sum(partial, 0, blocks));
    if (rule.folded) {
        // Averaging over the four rotations about alpha* keeps only orders with n - m = 0 mod 4.
        const int N = geo.N;
        for (int rb = 0; rb < 2; ++rb)
            for (int cb = 0; cb < 2; ++cb)
                for (int m = -N; m <= N; ++m)
                    for (int k = -N; k <= N; ++k)
                        if ((((k - m) % 4) + 4) % 4 != 0) out(rb, m, cb, k) = 0.0;
    }
    return out;
}

FourierBlockMatrix bz_average_inverse(double omega, double omega_star, const Medium& med, const Geometry& geo,
                                      const BZQuadratureOptions& opt, unsigned workers) {
    const int levels = refinement_levels(omega, omega_star, opt);
    return bz_average_inverse(omega, med, geo, make_bz_quadrature(levels, opt), workers);
}

FourierBlockMatrix assemble_M_eps(double omega, const Medium& med, const Geometry& geo, const FourierBlockMatrix& average) {
    if (average.N() != geo.N) throw InvalidArgument("assemble_M_eps: truncation mismatch");
    const Matrix diff = assemble_A_D_eps(omega, med, geo).matrix() - assemble_A_D(omega, med, geo).matrix();
    Matrix m = Matrix::Identity(average.dim(), average.dim());
    m += diff * average.matrix();
    return FourierBlockMatrix(geo.N, false, std::move(m));
}

FourierBlockMatrix assemble_M_eps(double omega, double omega_star, const Medium& med, const Geometry& geo,
                                  const BZQuadratureOptions& opt, unsigned workers) {
    return assemble_M_eps(omega, med, geo, bz_average_inverse(omega, omega_star, med, geo, opt, workers));
}

double factor_S(const Geometry& geo) {
    const StaticSolution s = static_psi(kAlphaStar, geo);
    return geo.R * s.psi_norm2 - 2.0 * s.capacitance;
}

double asymptotic_exponent(const Medium& med, const Geometry& geo, double omega_star, double c_delta) {
    med.validate();
    geo.validate();
    if (!(omega_star > 0.0)) throw InvalidArgument("asymptotic_exponent: omega* must be positive");
    if (!(c_delta > 0.0)) throw InvalidArgument("asymptotic_exponent: c_delta must be positive");
    if (geo.eps == 0.0) throw InvalidArgument("asymptotic_exponent: eps = 0 has no defect");
    const StaticSolution s = static_psi(kAlphaStar, geo);
    const double R = geo.R, R3 = R * R * R, w = omega_star, delta = med.delta();
    const double S = R * s.psi_norm2 - 2.0 * s.capacitance;
    const double A = -2.0 * kPi * w * R3 * std::log(w * R) - kPi * w * R3 - (delta * R / w) * s.capacitance;
    const double B = delta * geo.eps * (std::log(R) + 2.0 * kPi * eta(w).real()) * S;
    return 2.0 * kPi * c_delta * A / B;
}

std::optional<double> asymptotic_defect_frequency(const Medium& med, const Geometry& geo, double omega_star, double c_delta) {
    const double e = asymptotic_exponent(med, geo, omega_star, c_delta);
    if (!(e < 0.0)) return std::nullopt;
    return omega_star + std::exp(e);
}

DefectResult find_defect_frequency(const Medium& med, const Geometry& geo, double omega_star, const DefectSearchOptions& opt) {
    med.validate();
    geo.validate();
    if (!(omega_star > 0.0)) throw InvalidArgument("find_defect_frequency: omega* must be positive");
    if (opt.scan_points < 4) throw InvalidArgument("find_defect_frequency: need at least 4 scan points");
    DefectResult res;
    res.omega_star = omega_star;
    res.gap_ceiling = omega_star * (1.0 + opt.ceiling_rel);
    if (geo.eps == 0.0) {
        res.note = "eps = 0: M is the identity, no defect mode";
        return res;
    }
    const double t_lo = std::log(omega_star * opt.floor_rel);
    const double t_hi = std::log(opt.search_fraction * (res.gap_ceiling - omega_star));
    if (!(t_hi > t_lo)) throw InvalidArgument("find_defect_frequency: empty search interval");

    auto omega_of = [&](double t) { return omega_star + std::exp(t); };
    auto M_at = [&](double t) { return assemble_M_eps(omega_of(t), omega_star, med, geo, opt.quad, opt.workers); };
    auto det_at = [&](double t) { return M_at(t).matrix().partialPivLu().determinant(); };

    const int P = opt.scan_points;
    std::vector<double> ts(P);
    std::vector<cplx> gs(P);
    for (int i = 0; i < P; ++i) {
        ts[i] = t_lo + (t_hi - t_lo) * i / (P - 1);
        gs[i] = det_at(ts[i]);
    }

    // Accepts a Muller root when the smallest singular vector of M passes the residual check.
    auto accept = [&](const MullerResult& r) {
        const FourierBlockMatrix m = M_at(r.root);
        Eigen::JacobiSVD<Matrix> svd(m.matrix(), Eigen::ComputeFullV);
        const auto& sv = svd.singularValues();
        const Vector v = svd.matrixV().col(sv.size() - 1);
        const double resid = (m.matrix() * v).norm() / sv(0);
        if (!(resid <= opt.null_tolerance)) return false;
        res.exists = true;
        res.omega_eps = omega_of(r.root);
        res.residual = resid;
        res.sigma_ratio = sv(sv.size() - 1) / sv(0);
        res.imag_residue = r.imag_residue;
        res.quadrature_levels = refinement_levels(*res.omega_eps, omega_star, opt.quad);
        // Fix the global phase so the largest component is real and positive.
        Eigen::Index k = 0;
        v.cwiseAbs().maxCoeff(&k);
        res.source_pair = v * (std::abs(v(k)) / v(k));
        return true;
    };

    const Interval bracket{t_lo, t_hi};
    auto try_muller = [&](double seed, std::optional<std::array<double, 3>> triple, int max_iter) {
        MullerOptions mo;
        mo.max_iter = max_iter;
        try {
            return accept(muller_find(det_at, seed, bracket, mo, triple));
        } catch (const NoRootFound&) {
            return false;
        }
    };

    for (int i = 0; i + 1 < P && !res.exists; ++i) {
        const bool re = std::signbit(gs[i].real()) != std::signbit(gs[i + 1].real());
        const bool im = std::signbit(gs[i].imag()) != std::signbit(gs[i + 1].imag());
        if (!re && !im) continue;
        const double mid = 0.5 * (ts[i] + ts[i + 1]);
        if (try_muller(mid, std::array<double, 3>{ts[i], mid, ts[i + 1]}, 100)) res.note = "root bracketed by sign change";
    }

    if (!res.exists) {
        // Restarts from the scan points with the smallest |det M|.
        std::vector<int> order(P);
        for (int i = 0; i < P; ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](int a, int b) { return std::abs(gs[a]) < std::abs(gs[b]); });
        for (int r = 0; r < std::min(opt.restarts, P) && !res.exists; ++r) {
            const int i = order[r];
            const double h = 0.25 * (t_hi - t_lo) / (P - 1);
            const double seed = std::clamp(ts[i], t_lo + h, t_hi - h);
            if (try_muller(seed, std::array<double, 3>{seed - h, seed, seed + h}, opt.restart_iterations)) res.note = "root found from restart";
        }
    }
    if (!res.exists) res.note = "no sign change of det M and no converged restart";
    return res;
}

DefectResult analyze_defect(const Medium& med, const Geometry& geo, const DefectSearchOptions& opt) {
    med.validate();
    geo.validate();
    const double omega_star = first_band_frequency(kAlphaStar, med, geo).root;
    Geometry base = geo;
    base.eps = 0.0;
    const CurvatureFit fit = band_curvature(med, base, omega_star);
    DefectResult res = find_defect_frequency(med, geo, omega_star, opt);
    res.c_delta = fit.c_delta;
    res.S_of_R = factor_S(geo);
    res.regime = res.S_of_R < 0.0 ? Regime::dilute : Regime::nondilute;
    if (geo.eps != 0.0) res.omega_eps_asymptotic = asymptotic_defect_frequency(med, geo, omega_star, fit.c_delta);
    return res;
}

namespace {

constexpr int kFarOrder = 36;  // regular-expansion order for the lattice beyond the nearest neighbours

const std::array<std::array<int, 2>, 9> kNear{{{0, 0}, {1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, 1}, {-1, 1}, {1, -1}, {-1, -1}}};

std::vector<cplx> angular(const CylinderTable& t, int nmax, double theta, bool hankel) {
    std::vector<cplx> out(2 * nmax + 1);
    for (int n = -nmax; n <= nmax; ++n) out[n + nmax] = (hankel ? t.h(n) : t.j(n)) * std::exp(I * (n * theta));
    return out;
}

// alpha-independent basis values at one point of the reference cell.
struct PointBasis {
    bool inside = false;
    std::vector<cplx> interior;                 // J_n(k_b r) e^{i n theta}
    std::array<std::vector<cplx>, 9> outgoing;  // H_n(k |x - m|) e^{i n arg(x - m)}, m in kNear
    std::vector<cplx> regular;                  // J_l(k r) e^{i l theta}, |l| <= kFarOrder
};

struct NodeCoefficients {
    std::array<cplx, 9> phase{};  // e^{i alpha . m}
    std::vector<cplx> src;        // c J_n(kR) psi_n
    std::vector<cplx> ext;        // c H_n(k_b R) phi_n
    std::vector<cplx> far;        // regular-expansion coefficients of all bubbles beyond kNear
};

// Field of the quasi-periodic layer potentials in the reference cell. Outside the disk the eight
// nearest copies are summed directly and the rest through a regular expansion about the origin,
// which converges out to distance 2 - R and so covers the whole cell for any R < 1/2.
class CellField {
public:
    CellField(double kw, double kb, double R, int N)
        : kw_(kw), kb_(kb), R_(R), N_(N), c_(-I * kPi * R / 2.0), disk_w_(N, kw * R), disk_b_(N, kb * R),
          edge_(kFarOrder + N, kw), diag_(kFarOrder + N, kw * std::sqrt(2.0)) {}

    PointBasis basis(double x, double y) const {
        const double r = std::hypot(x, y), th = std::atan2(y, x);
        PointBasis pb;
        pb.inside = r < R_;
        if (pb.inside) {
            pb.interior = angular(CylinderTable(N_, kb_ * r, false), N_, th, false);
            return pb;
        }
        for (std::size_t q = 0; q < kNear.size(); ++q) {
            const double dx = x - kNear[q][0], dy = y - kNear[q][1];
            pb.outgoing[q] = angular(CylinderTable(N_, kw_ * std::hypot(dx, dy)), N_, std::atan2(dy, dx), true);
        }
        pb.regular = angular(CylinderTable(kFarOrder, kw_ * r, false), kFarOrder, th, false);
        return pb;
    }

    // dens = (phi, psi) for the quasi-periodic problem at alpha.
    NodeCoefficients coefficients(Bloch al, const Vector& dens) const {
        const int N = N_, L = kFarOrder, M = L + N, d = 2 * N + 1;
        NodeCoefficients nc;
        for (std::size_t m = 0; m < kNear.size(); ++m) nc.phase[m] = std::exp(I * (kNear[m][0] * al.x + kNear[m][1] * al.y));
        const LatticeSumTable q = lattice_sums(kw_, al, M);
        std::vector<cplx> qfar(2 * M + 1);
        for (int n = -M; n <= M; ++n) {
            cplx v = q(n);
            for (std::size_t m = 1; m < kNear.size(); ++m) {
                const int mx = kNear[m][0], my = kNear[m][1];
                const CylinderTable& t = (mx != 0 && my != 0) ? diag_ : edge_;
                v -= t.h(n) * std::exp(I * (n * std::atan2(double(my), double(mx)))) * nc.phase[m];
            }
            qfar[n + M] = v;
        }
        nc.src.resize(d);
        nc.ext.resize(d);
        for (int n = -N; n <= N; ++n) {
            nc.src[n + N] = c_ * disk_w_.j(n) * dens(d + n + N);
            nc.ext[n + N] = c_ * disk_b_.h(n) * dens(n + N);
        }
        nc.far.resize(2 * L + 1);
        for (int l = -L; l <= L; ++l) {
            cplx v = 0.0;
            for (int n = -N; n <= N; ++n) v += ((n - l) % 2 == 0 ? 1.0 : -1.0) * qfar[n - l + M] * nc.src[n + N];
            nc.far[l + L] = v;
        }
        return nc;
    }

    cplx evaluate(const PointBasis& pb, const NodeCoefficients& nc) const {
        const int d = 2 * N_ + 1;
        cplx v = 0.0;
        if (pb.inside) {
            for (int n = 0; n < d; ++n) v += nc.ext[n] * pb.interior[n];
            return v;
        }
        for (std::size_t m = 0; m < kNear.size(); ++m) {
            cplx w = 0.0;
            for (int n = 0; n < d; ++n) w += nc.src[n] * pb.outgoing[m][n];
            v += nc.phase[m] * w;
        }
        for (int l = 0; l <= 2 * kFarOrder; ++l) v += nc.far[l] * pb.regular[l];
        return v;
    }

private:
    double kw_, kb_, R_;
    int N_;
    cplx c_;
    CylinderTable disk_w_, disk_b_, edge_, diag_;
};

}  // namespace

cplx single_layer_field(double k, Bloch alpha, double R, int N, const Vector& psi, double x, double y) {
    if (psi.size() != 2 * N + 1) throw InvalidArgument("single_layer_field: density has the wrong length");
    if (!(k > 0.0)) throw InvalidArgument("single_layer_field: wavenumber must be positive");
    if (std::abs(x) > 0.5 || std::abs(y) > 0.5) throw InvalidArgument("single_layer_field: point outside the reference cell");
    if (!(std::hypot(x, y) >= R)) throw InvalidArgument("single_layer_field: point inside the disk");
    const CellField cf(k, k, R, N);
    Vector dens = Vector::Zero(2 * (2 * N + 1));
    dens.tail(2 * N + 1) = psi;
    return cf.evaluate(cf.basis(x, y), cf.coefficients(alpha, dens));
}

ModeField reconstruct_mode(const DefectResult& defect, const Medium& med, const Geometry& geo, const BZQuadratureOptions& quad,
                           const ModeGrid& grid, unsigned workers) {
    med.validate();
    geo.validate();
    if (geo.eps == 0.0) throw InvalidArgument("reconstruct_mode: eps = 0 has no defect mode");
    if (!defect.exists || !defect.omega_eps) throw InvalidArgument("reconstruct_mode: no defect mode to reconstruct");
    const int d = 2 * geo.N + 1;
    if (defect.source_pair.size() != 2 * d) throw InvalidArgument("reconstruct_mode: source pair has the wrong length");
    if (grid.cells < 0 || grid.resolution < 1) throw InvalidArgument("reconstruct_mode: invalid grid");

    const double omega = *defect.omega_eps;
    const CellField cf(med.k_w(omega), med.k_b(omega), geo.R, geo.N);
    const int K = grid.cells, p = grid.resolution;

    // Sample points of the reference cell [-1/2, 1/2]^2, shared by all cells.
    std::vector<std::array<double, 2>> local;
    for (int a = 0; a < p; ++a)
        for (int b = 0; b < p; ++b) local.push_back({-0.5 + (a + 0.5) / p, -0.5 + (b + 0.5) / p});
    std::vector<PointBasis> basis;
    for (const auto& pt : local) basis.push_back(cf.basis(pt[0], pt[1]));

    BZQuadratureOptions qo = quad;
    qo.fold_symmetry = false;
    const BZQuadrature rule = make_bz_quadrature(refinement_levels(omega, defect.omega_star, qo), qo);
    const std::size_t nodes = rule.nodes.size();
    const std::size_t ncell = static_cast<std::size_t>(2 * K + 1) * (2 * K + 1);
    const std::size_t npt = local.size();
    const Vector rhs = -defect.source_pair;

    const std::size_t blocks = (nodes + kBlock - 1) / kBlock;
    std::vector<Vector> partial(blocks);
    parallel_for(
        blocks,
        [&](std::size_t blk) {
            Vector acc = Vector::Zero(static_cast<Eigen::Index>(ncell * npt));
            std::vector<cplx> ua(npt);
            for (std::size_t i = blk * kBlock; i < std::min(nodes, (blk + 1) * kBlock); ++i) {
                const BZNode& nd = rule.nodes[i];
                const FourierBlockMatrix a = assemble_A_alpha(omega, nd.alpha, med, geo);
                Eigen::PartialPivLU<Matrix> lu(a.matrix());
                if (!(lu.rcond() > 1e-14)) throw InBandError("reconstruct_mode: A^alpha singular at a quadrature node");
                const NodeCoefficients nc = cf.coefficients(nd.alpha, lu.solve(rhs));
                for (std::size_t s = 0; s < npt; ++s) ua[s] = cf.evaluate(basis[s], nc);
                // u(x0 + cell) picks up the Bloch phase e^{i alpha . cell}.
                const cplx ex = std::exp(I * nd.alpha.x), ey = std::exp(I * nd.alpha.y);
                const cplx px0 = std::pow(ex, -K);
                cplx py = nd.weight * std::pow(ey, -K);
                std::size_t cell = 0;
                for (int cy = -K; cy <= K; ++cy, py *= ey) {
                    cplx pxy = py * px0;
                    for (int cx = -K; cx <= K; ++cx, pxy *= ex, ++cell)
                        for (std::size_t s = 0; s < npt; ++s) acc(static_cast<Eigen::Index>(cell * npt + s)) += pxy * ua[s];
                }
            }
            partial[blk] = std::move(acc);
        },
        workers);
    const Vector u = pairwise_sum(partial, 0, blocks);

    ModeField out;
    out.cells = K;
    out.resolution = p;
    out.ring_max.assign(K + 1, 0.0);
    // Normalize by the defect-cell maximum, with its phase removed.
    const std::size_t center = static_cast<std::size_t>(K) * (2 * K + 1) + K;
    cplx peak = 0.0;
    for (std::size_t s = 0; s < npt; ++s) {
        const cplx v = u(static_cast<Eigen::Index>(center * npt + s));
        if (std::abs(v) > std::abs(peak)) peak = v;
    }
    if (peak == cplx(0.0)) throw AssemblyError("reconstruct_mode: reconstructed field vanishes in the defect cell");
    const cplx scale = 1.0 / peak;
    std::size_t cell = 0;
    for (int cy = -K; cy <= K; ++cy) {
        for (int cx = -K; cx <= K; ++cx, ++cell) {
            const int ring = std::max(std::abs(cx), std::abs(cy));
            for (std::size_t s = 0; s < npt; ++s) {
                ModeSample ms;
                ms.cell_x = cx;
                ms.cell_y = cy;
                ms.x = cx + local[s][0];
                ms.y = cy + local[s][1];
                ms.u = u(static_cast<Eigen::Index>(cell * npt + s)) * scale;
                out.ring_max[ring] = std::max(out.ring_max[ring], std::abs(ms.u));
                out.samples.push_back(ms);
            }
        }
    }
    return out;
}

}  // namespace bubbly
