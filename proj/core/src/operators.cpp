#include "bubbly/operators.hpp"

#include "bubbly/errors.hpp"

#include <Eigen/LU>

#include <array>
#include <cmath>
#include <string>

namespace bubbly {

namespace {

const cplx I(0.0, 1.0);

double parity(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

void require_positive_omega(double omega) {
    if (!std::isfinite(omega)) throw InvalidArgument("operator assembly: non-finite frequency");
    if (omega == 0.0) throw SingularArgument("operator assembly: omega = 0 puts the Hankel functions at their singularity");
    if (omega < 0.0) throw InvalidArgument("operator assembly: frequency must be positive");
}

// c * J_n(kR) * sum over the lattice coupling, shared by S and S-tilde.
void fill_single_layer(Matrix& s, Matrix* st, double k, double R, int N, const LatticeSumTable& q) {
    const CylinderTable t(N, k * R);
    const cplx c = -I * kPi * R / 2.0;
    const int d = 2 * N + 1;
    s.setZero(d, d);
    if (st) st->setZero(d, d);
    for (int m = -N; m <= N; ++m) {
        for (int n = -N; n <= N; ++n) {
            const cplx lat = c * t.j(n) * parity(n - m) * q(n - m);
            s(m + N, n + N) = lat * t.j(m);
            if (st) (*st)(m + N, n + N) = lat * k * t.jp(m);
        }
        s(m + N, m + N) += c * t.j(m) * t.h(m);
        // Exterior trace of the normal derivative: 1/2 + the principal value, which on a disk is c k J_n H_n'.
        if (st) (*st)(m + N, m + N) += c * k * t.j(m) * t.hp(m);
    }
}

bool near_zero(cplx v, cplx left, cplx right) {
    return std::abs(v) < 1e-12 * std::max(std::abs(left), std::abs(right));
}

}  // namespace

FourierBlockMatrix::FourierBlockMatrix(int N, bool diagonal_in_n)
    : N_(N), diagonal_(diagonal_in_n), m_(Matrix::Zero(2 * (2 * N + 1), 2 * (2 * N + 1))) {
    if (N < 0) throw InvalidArgument("FourierBlockMatrix: negative truncation order");
}

FourierBlockMatrix::FourierBlockMatrix(int N, bool diagonal_in_n, Matrix m) : N_(N), diagonal_(diagonal_in_n), m_(std::move(m)) {
    if (m_.rows() != dim() || m_.cols() != dim()) throw InvalidArgument("FourierBlockMatrix: dimension mismatch");
}

double distance_to_gamma(Bloch alpha) {
    const double two_pi = 2.0 * kPi;
    const double x = alpha.x - two_pi * std::round(alpha.x / two_pi);
    const double y = alpha.y - two_pi * std::round(alpha.y / two_pi);
    return std::hypot(x, y);
}

FourierBlockMatrix assemble_A_alpha(double omega, Bloch alpha, const Medium& med, const Geometry& geo, LatticeSumCache& cache) {
    require_positive_omega(omega);
    if (distance_to_gamma(alpha) == 0.0)
        throw UnsupportedError("assemble_A_alpha: alpha = 0 is not supported (static quasi-periodic layer not invertible)");
    const int N = geo.N;
    const double kw = med.k_w(omega);
    const double kb = med.k_b(omega);
    const auto q = cache.get(kw, alpha, 2 * N);

    Matrix s, st;
    fill_single_layer(s, &st, kw, geo.R, N, *q);

    const CylinderTable tb(N, kb * geo.R);
    const cplx c = -I * kPi * geo.R / 2.0;
    FourierBlockMatrix a(N, false);
    const int d = a.orders();
    Matrix& m = a.matrix();
    for (int n = -N; n <= N; ++n) {
        m(n + N, n + N) = c * tb.j(n) * tb.h(n);
        m(d + n + N, n + N) = c * kb * tb.jp(n) * tb.h(n);
    }
    m.block(0, d, d, d) = -s;
    m.block(d, d, d, d) = -med.delta() * st;
    return a;
}

Matrix single_layer_alpha(double k, Bloch alpha, double R, int N, LatticeSumCache& cache) {
    Matrix s;
    fill_single_layer(s, nullptr, k, R, N, *cache.get(k, alpha, 2 * N));
    return s;
}

FourierBlockMatrix assemble_A_disk(double omega, double radius, const Medium& med, int N) {
    require_positive_omega(omega);
    const double kw = med.k_w(omega), kb = med.k_b(omega);
    // Same table extents as assemble_A_D_eps, so eps = 0 reproduces A_D bit for bit.
    const CylinderTable tb(N + 1, kb * radius), tw(N + 1, kw * radius);
    const cplx c = -I * kPi * radius / 2.0;
    FourierBlockMatrix a(N, true);
    for (int n = -N; n <= N; ++n) {
        a(0, n, 0, n) = c * tb.j(n) * tb.h(n);
        a(0, n, 1, n) = -c * tw.j(n) * tw.h(n);
        a(1, n, 0, n) = c * kb * tb.jp(n) * tb.h(n);
        a(1, n, 1, n) = -c * med.delta() * kw * tw.j(n) * tw.hp(n);
    }
    return a;
}

FourierBlockMatrix assemble_A_D(double omega, const Medium& med, const Geometry& geo) {
    return assemble_A_disk(omega, geo.R, med, geo.N);
}

FourierBlockMatrix assemble_A_Dd(double omega, const Medium& med, const Geometry& geo) {
    return assemble_A_disk(omega, geo.R_d(), med, geo.N);
}

FourierBlockMatrix assemble_P1(double omega, const Medium& med, const Geometry& geo) {
    require_positive_omega(omega);
    const int N = geo.N;
    const double R = geo.R, Rd = geo.R_d();
    const double kw = med.k_w(omega), kb = med.k_b(omega);
    const CylinderTable b(N + 1, kb * R), bd(N + 1, kb * Rd), w(N + 1, kw * R), wd(N + 1, kw * Rd);
    FourierBlockMatrix p(N, true);
    for (int n = -N; n <= N; ++n) {
        if (near_zero(wd.j(n), wd.j(n - 1), wd.j(n + 1)))
            throw ResonantDenominatorError("assemble_P1: J_n(k R_d) vanishes for n = " + std::to_string(n));
        p(0, n, 0, n) = (R / Rd) * b.h(n) / bd.h(n);
        p(1, n, 1, n) = (R / Rd) * w.j(n) / wd.j(n);
    }
    return p;
}

FourierBlockMatrix assemble_P2(double omega, const Medium& med, const Geometry& geo) {
    require_positive_omega(omega);
    const int N = geo.N;
    const double kw = med.k_w(omega);
    const CylinderTable w(N + 1, kw * geo.R, false), wd(N + 1, kw * geo.R_d(), false);
    FourierBlockMatrix p(N, true);
    for (int n = -N; n <= N; ++n) {
        if (near_zero(w.j(n), w.j(n - 1), w.j(n + 1)) || near_zero(w.jp(n), w.j(n - 1), w.j(n + 1)))
            throw ResonantDenominatorError("assemble_P2: J_n or J_n' vanishes at k R for n = " + std::to_string(n));
        p(0, n, 0, n) = wd.j(n) / w.j(n);
        p(1, n, 1, n) = wd.jp(n) / w.jp(n);
    }
    return p;
}

FourierBlockMatrix assemble_A_D_eps(double omega, const Medium& med, const Geometry& geo) {
    require_positive_omega(omega);
    const int N = geo.N;
    const double R = geo.R, Rd = geo.R_d();
    const double kw = med.k_w(omega), kb = med.k_b(omega);
    const CylinderTable b(N + 1, kb * R), bd(N + 1, kb * Rd, false), w(N + 1, kw * R, false), wd(N + 1, kw * Rd);
    const cplx c = -I * kPi * R / 2.0;
    const double delta = med.delta();
    FourierBlockMatrix a(N, true);
    for (int n = -N; n <= N; ++n) {
        if (near_zero(wd.j(n), wd.j(n - 1), wd.j(n + 1)) || near_zero(wd.jp(n), wd.j(n - 1), wd.j(n + 1)))
            throw ResonantDenominatorError("assemble_A_D_eps: J_n or J_n' vanishes at k R_d for n = " + std::to_string(n));
        const cplx rj = w.j(n) / wd.j(n);
        const cplx rjp = w.jp(n) / wd.jp(n);
        a(0, n, 0, n) = c * rj * bd.j(n) * b.h(n);
        a(0, n, 1, n) = -c * rj * w.j(n) * wd.h(n);
        a(1, n, 0, n) = c * kb * rjp * bd.jp(n) * b.h(n);
        a(1, n, 1, n) = -c * delta * kw * rjp * w.j(n) * wd.hp(n);
    }
    return a;
}

Matrix static_single_layer(Bloch alpha, double R, int N) {
    const double d = distance_to_gamma(alpha);
    if (d == 0.0) throw UnsupportedError("static_single_layer: alpha = 0 is not supported");
    // S^{alpha,k} is analytic in h = k^2 up to the first resonance |alpha + 2 pi q|^2; stay well inside it.
    const double k0 = std::min(1e-2, 0.1 * d);
    constexpr int levels = 3;
    std::array<double, levels> h{};
    std::array<Matrix, levels> p;
    for (int i = 0; i < levels; ++i) {
        const double k = k0 / double(1 << i);
        h[i] = k * k;
        Matrix s;
        fill_single_layer(s, nullptr, k, R, N, lattice_sums(k, alpha, 2 * N));
        p[i] = std::move(s);
    }
    for (int m = 1; m < levels; ++m)
        for (int i = 0; i + m < levels; ++i) p[i] = (h[i] * p[i + 1] - h[i + m] * p[i]) / (h[i] - h[i + m]);
    return p[0];
}

StaticSolution static_psi(Bloch alpha, const Geometry& geo) {
    geo.validate();
    const Matrix s0 = static_single_layer(alpha, geo.R, geo.N);
    Eigen::PartialPivLU<Matrix> lu(s0);
    if (!std::isfinite(std::abs(lu.determinant())) || lu.rcond() < 1e-14)
        throw AssemblyError("static_psi: static quasi-periodic single layer is singular");
    Vector rhs = Vector::Zero(2 * geo.N + 1);
    rhs(geo.N) = 1.0;
    StaticSolution out;
    out.psi = lu.solve(rhs);
    const double len = 2.0 * kPi * geo.R;
    out.inner = len * out.psi(geo.N);
    out.capacitance = -out.inner.real();
    out.psi_norm2 = len * out.psi.squaredNorm();
    return out;
}

double quasiperiodic_capacitance(Bloch alpha, const Geometry& geo) { return static_psi(alpha, geo).capacitance; }

}  // namespace bubbly
