#include "bubbly/specfun.hpp"

#include "bubbly/errors.hpp"

#include <Eigen/Eigenvalues>

#include <array>
#include <cmath>
#include <string>

namespace bubbly {

namespace {

constexpr double kSeriesRadius = 10.0;
constexpr double kSmallRadius = 2.0;
constexpr int kLaguerreNodes = 32;
const cplx I(0.0, 1.0);

void check_args(int n, cplx z, int cap) {
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw InvalidArgument("cylinder function: non-finite argument");
    if (n < -cap || n > cap)
        throw InvalidArgument("cylinder function: order " + std::to_string(n) +
                              " exceeds cap " + std::to_string(cap));
}

// Orders 0..nmax, ascending series; exact enough only for modest |z|.
std::vector<cplx> j_series(int nmax, cplx z) {
    std::vector<cplx> out(nmax + 1);
    const cplx half = 0.5 * z;
    const cplx q = -half * half;
    cplx lead = 1.0;  // (z/2)^n / n!
    for (int n = 0; n <= nmax; ++n) {
        if (n > 0) lead *= half / double(n);
        cplx term = lead;
        cplx sum = term;
        for (int k = 1; k < 500; ++k) {
            term *= q / (double(k) * double(k + n));
            sum += term;
            if (std::abs(term) <= 1e-17 * std::abs(sum)) break;
        }
        out[n] = sum;
    }
    return out;
}

// Miller backward recurrence normalised by e^{-i s z} = J_0 + 2 sum (-i s)^n J_n,
// with s chosen so the normaliser does not cancel.
std::vector<cplx> j_miller(int nmax, cplx z) {
    const double az = std::abs(z);
    const int top = int(std::max<double>(nmax, az)) + 30 + int(std::sqrt(40.0 * std::max<double>(nmax, az)));
    const double s = z.imag() >= 0.0 ? 1.0 : -1.0;
    const cplx unit = -I * s;

    std::vector<cplx> raw(top + 2, 0.0);
    raw[top + 1] = 0.0;
    raw[top] = 1e-30;
    for (int n = top; n >= 1; --n) {
        raw[n - 1] = (2.0 * n / z) * raw[n] - raw[n + 1];
        if (std::abs(raw[n - 1]) > 1e250) {
            for (int m = n - 1; m <= top + 1; ++m) raw[m] *= 1e-250;
        }
    }
    cplx norm = raw[0];
    cplx phase = 1.0;
    for (int n = 1; n <= top; ++n) {
        phase *= unit;
        norm += 2.0 * phase * raw[n];
    }
    const cplx scale = std::exp(-I * s * z) / norm;
    std::vector<cplx> out(nmax + 1);
    for (int n = 0; n <= nmax; ++n) out[n] = raw[n] * scale;
    return out;
}

std::vector<cplx> j_orders(int nmax, cplx z) {
    if (z == cplx(0.0)) {
        std::vector<cplx> out(nmax + 1, 0.0);
        out[0] = 1.0;
        return out;
    }
    return std::abs(z) <= kSmallRadius ? j_series(nmax, z) : j_miller(nmax, z);
}

// Y_0, Y_1 from their logarithmic ascending series.
std::array<cplx, 2> y01_series(cplx z, cplx j0, cplx j1) {
    const cplx half = 0.5 * z;
    const cplx q = half * half;
    const cplx lg = std::log(half);

    cplx term = 1.0;  // (z^2/4)^k / (k!)^2
    double harmonic = 0.0;
    cplx s0 = 0.0;
    for (int k = 1; k < 500; ++k) {
        term *= q / (double(k) * double(k));
        harmonic += 1.0 / k;
        const cplx add = (k % 2 == 1 ? 1.0 : -1.0) * harmonic * term;
        s0 += add;
        if (std::abs(add) <= 1e-17 * std::abs(s0)) break;
    }
    const cplx y0 = (2.0 / kPi) * ((lg + kEulerGamma) * j0 + s0);

    // psi(k+1) + psi(k+2) = -2 gamma + H_k + H_{k+1}
    cplx t1 = 1.0;  // (z^2/4)^k / (k!(k+1)!)
    double hk = 0.0;
    cplx s1 = (-2.0 * kEulerGamma + 1.0) * t1;
    for (int k = 1; k < 500; ++k) {
        t1 *= q / (double(k) * double(k + 1));
        hk += 1.0 / k;
        const double psis = -2.0 * kEulerGamma + hk + hk + 1.0 / (k + 1);
        const cplx add = (k % 2 == 1 ? -1.0 : 1.0) * psis * t1;
        s1 += add;
        if (std::abs(add) <= 1e-17 * std::abs(s1)) break;
    }
    const cplx y1 = -2.0 / (kPi * z) + (2.0 / kPi) * lg * j1 - (1.0 / kPi) * half * s1;
    return {y0, y1};
}

struct LaguerreRule {
    std::array<double, kLaguerreNodes> x{};
    std::array<double, kLaguerreNodes> w{};  // normalised to unit total mass
};

LaguerreRule make_laguerre(double a) {
    Eigen::MatrixXd t = Eigen::MatrixXd::Zero(kLaguerreNodes, kLaguerreNodes);
    for (int i = 0; i < kLaguerreNodes; ++i) {
        t(i, i) = 2.0 * i + 1.0 + a;
        if (i + 1 < kLaguerreNodes) {
            const double b = std::sqrt((i + 1.0) * (i + 1.0 + a));
            t(i, i + 1) = b;
            t(i + 1, i) = b;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(t);
    LaguerreRule r;
    for (int i = 0; i < kLaguerreNodes; ++i) {
        r.x[i] = es.eigenvalues()(i);
        r.w[i] = es.eigenvectors()(0, i) * es.eigenvectors()(0, i);
    }
    return r;
}

// H_nu^(1)(z), nu in {0,1}, from the Laplace-type integral
// sqrt(2/(pi z)) e^{i(z - nu pi/2 - pi/4)} / Gamma(nu+1/2) int e^{-u} u^{nu-1/2} (1 + iu/(2z))^{nu-1/2} du,
// valid for -pi/2 < arg z <= pi.
cplx hankel_integral(int nu, cplx z) {
    static const LaguerreRule rule0 = make_laguerre(-0.5);
    static const LaguerreRule rule1 = make_laguerre(0.5);
    const LaguerreRule& r = nu == 0 ? rule0 : rule1;
    const double p = nu - 0.5;
    cplx sum = 0.0;
    for (int i = 0; i < kLaguerreNodes; ++i) sum += r.w[i] * std::pow(1.0 + I * r.x[i] / (2.0 * z), p);
    return std::sqrt(2.0 / (kPi * z)) * std::exp(I * (z - nu * kPi / 2.0 - kPi / 4.0)) * sum;
}

std::array<cplx, 2> h01_large(cplx z, const std::vector<cplx>& j) {
    const double arg = std::arg(z);
    if (arg > -kPi / 2.0) return {hankel_integral(0, z), hankel_integral(1, z)};
    // H1 = 2J - H2 with H2(z) = conj(H1(conj z)); conj z lies in the valid sector.
    const cplx zc = std::conj(z);
    return {2.0 * j[0] - std::conj(hankel_integral(0, zc)), 2.0 * j[1] - std::conj(hankel_integral(1, zc))};
}

std::vector<cplx> h_orders(int nmax, cplx z, const std::vector<cplx>& j) {
    std::array<cplx, 2> h01;
    if (std::abs(z) <= kSeriesRadius) {
        const auto y = y01_series(z, j[0], j[1]);
        h01 = {j[0] + I * y[0], j[1] + I * y[1]};
    } else {
        h01 = h01_large(z, j);
    }
    std::vector<cplx> h(nmax + 1);
    h[0] = h01[0];
    if (nmax >= 1) h[1] = h01[1];
    for (int n = 1; n < nmax; ++n) h[n + 1] = (2.0 * n / z) * h[n] - h[n - 1];
    return h;
}

double sign_for(int n) { return (n % 2 == 0) ? 1.0 : -1.0; }

}  // namespace

cplx bessel_j(int n, cplx z) {
    check_args(n, z, kMaxBesselOrder);
    const int a = std::abs(n);
    const cplx v = j_orders(std::max(a, 1), z)[a];
    return n < 0 ? sign_for(a) * v : v;
}

cplx hankel1(int n, cplx z) {
    check_args(n, z, kMaxBesselOrder);
    if (z == cplx(0.0)) throw SingularArgument("hankel1: logarithmic singularity at z = 0");
    const int a = std::abs(n);
    const auto j = j_orders(std::max(a, 1), z);
    const cplx v = h_orders(std::max(a, 1), z, j)[a];
    return n < 0 ? sign_for(a) * v : v;
}

std::vector<cplx> hankel1_orders(int nmax, cplx z) {
    check_args(nmax, z, kMaxBesselOrder);
    if (nmax < 0) throw InvalidArgument("hankel1_orders: negative order bound");
    if (z == cplx(0.0)) throw SingularArgument("hankel1: logarithmic singularity at z = 0");
    const int top = std::max(nmax, 1);
    // The integral path needs J only below the real axis.
    const bool need_j = std::abs(z) <= kSeriesRadius || std::arg(z) <= -kPi / 2.0;
    const auto j = need_j ? j_orders(top, z) : std::vector<cplx>(top + 1, 0.0);
    auto h = h_orders(top, z, j);
    h.resize(nmax + 1);
    return h;
}

cplx bessel_y(int n, cplx z) {
    check_args(n, z, kMaxBesselOrder);
    if (z == cplx(0.0)) throw SingularArgument("bessel_y: logarithmic singularity at z = 0");
    return (hankel1(n, z) - bessel_j(n, z)) / I;
}

cplx bessel_j_deriv(int n, cplx z) {
    check_args(n, z, kMaxBesselOrder - 1);
    return 0.5 * (bessel_j(n - 1, z) - bessel_j(n + 1, z));
}

cplx hankel1_deriv(int n, cplx z) {
    check_args(n, z, kMaxBesselOrder - 1);
    return 0.5 * (hankel1(n - 1, z) - hankel1(n + 1, z));
}

cplx eta(double k) {
    if (!std::isfinite(k)) throw InvalidArgument("eta: non-finite wavenumber");
    if (k <= 0.0) throw DomainError("eta: wavenumber must be positive");
    return cplx((std::log(k) + kEulerGamma - std::log(2.0)) / (2.0 * kPi), -0.25);
}

CylinderTable::CylinderTable(int nmax, cplx z, bool with_hankel) : nmax_(nmax), z_(z) {
    check_args(nmax, z, kMaxBesselOrder - 1);
    if (nmax < 0) throw InvalidArgument("CylinderTable: negative order bound");
    j_ = j_orders(nmax + 1, z);
    if (with_hankel) {
        if (z == cplx(0.0)) throw SingularArgument("CylinderTable: Hankel functions at z = 0");
        h_ = h_orders(nmax + 1, z, j_);
    }
}

cplx CylinderTable::reflect(int n, const std::vector<cplx>& v) const {
    if (v.empty()) throw InvalidArgument("CylinderTable: Hankel values not requested");
    const int a = std::abs(n);
    if (a > nmax_ + 1) throw InvalidArgument("CylinderTable: order outside table");
    return n < 0 ? sign_for(a) * v[a] : v[a];
}

cplx CylinderTable::jp(int n) const {
    if (std::abs(n) > nmax_) throw InvalidArgument("CylinderTable: derivative order outside table");
    return 0.5 * (j(n - 1) - j(n + 1));
}

cplx CylinderTable::hp(int n) const {
    if (std::abs(n) > nmax_) throw InvalidArgument("CylinderTable: derivative order outside table");
    return 0.5 * (h(n - 1) - h(n + 1));
}

}  // namespace bubbly
