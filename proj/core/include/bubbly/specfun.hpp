#pragma once

#include <complex>
#include <vector>

namespace bubbly {

using cplx = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kEulerGamma = 0.57721566490153286061;

/// Largest |n| accepted by the cylinder-function routines.
inline constexpr int kMaxBesselOrder = 128;

cplx bessel_j(int n, cplx z);
cplx bessel_y(int n, cplx z);
cplx hankel1(int n, cplx z);
cplx bessel_j_deriv(int n, cplx z);
cplx hankel1_deriv(int n, cplx z);

/// H_0^(1) .. H_nmax^(1) at one argument.
std::vector<cplx> hankel1_orders(int nmax, cplx z);

/// (ln k + gamma - ln 2)/(2 pi) - i/4, the constant term of the small-argument
/// expansion of -(i/4) H_0^(1)(k|x|) around its logarithm.
cplx eta(double k);

/// J_n, J_n', and optionally H_n, H_n' for every order in [-nmax, nmax] at one argument.
class CylinderTable {
public:
    CylinderTable(int nmax, cplx z, bool with_hankel = true);

    int nmax() const noexcept { return nmax_; }
    cplx z() const noexcept { return z_; }

    cplx j(int n) const { return reflect(n, j_); }
    cplx h(int n) const { return reflect(n, h_); }
    cplx jp(int n) const;
    cplx hp(int n) const;

private:
    cplx reflect(int n, const std::vector<cplx>& v) const;

    int nmax_;
    cplx z_;
    std::vector<cplx> j_;  // orders 0..nmax+1
    std::vector<cplx> h_;
};

}  // namespace bubbly
