#pragma once

#include "bubbly/lattice_sums.hpp"
#include "bubbly/medium.hpp"
#include "bubbly/specfun.hpp"

#include <Eigen/Dense>

namespace bubbly {

using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// Dense 2(2N+1) square matrix acting on the pair (phi, psi) of Fourier coefficient vectors.
/// Row/column layout: [phi_{-N}..phi_N, psi_{-N}..psi_N].
class FourierBlockMatrix {
public:
    FourierBlockMatrix() = default;
    FourierBlockMatrix(int N, bool diagonal_in_n);
    FourierBlockMatrix(int N, bool diagonal_in_n, Matrix m);

    int N() const noexcept { return N_; }
    int orders() const noexcept { return 2 * N_ + 1; }
    int dim() const noexcept { return 2 * orders(); }
    bool diagonal_in_n() const noexcept { return diagonal_; }

    int index(int block, int n) const { return block * orders() + n + N_; }
    cplx& operator()(int row_block, int m, int col_block, int n) { return m_(index(row_block, m), index(col_block, n)); }
    cplx operator()(int row_block, int m, int col_block, int n) const { return m_(index(row_block, m), index(col_block, n)); }

    Matrix& matrix() noexcept { return m_; }
    const Matrix& matrix() const noexcept { return m_; }

private:
    int N_ = 0;
    bool diagonal_ = false;
    Matrix m_;
};

/// Quasi-periodic boundary operator A^alpha(omega, delta) of the unperturbed crystal.
FourierBlockMatrix assemble_A_alpha(double omega, Bloch alpha, const Medium& med, const Geometry& geo,
                                    LatticeSumCache& cache = default_lattice_cache());

/// Single-disk operator A_D for a disk of the given radius (A_D at R, A_{D_d} at R_d).
FourierBlockMatrix assemble_A_disk(double omega, double radius, const Medium& med, int N);
FourierBlockMatrix assemble_A_D(double omega, const Medium& med, const Geometry& geo);
FourierBlockMatrix assemble_A_Dd(double omega, const Medium& med, const Geometry& geo);

/// Density map (phi, psi) on the unperturbed boundary -> densities on the defect boundary.
FourierBlockMatrix assemble_P1(double omega, const Medium& med, const Geometry& geo);
/// Trace map (H, d_nu H) on the unperturbed boundary -> traces on the defect boundary.
FourierBlockMatrix assemble_P2(double omega, const Medium& med, const Geometry& geo);

/// Closed form of P2^{-1} A_{D_d} P1.
FourierBlockMatrix assemble_A_D_eps(double omega, const Medium& med, const Geometry& geo);

/// Matrix of the quasi-periodic single layer S_D^{alpha,k} on the boundary (water wavenumber k).
Matrix single_layer_alpha(double k, Bloch alpha, double R, int N, LatticeSumCache& cache = default_lattice_cache());

/// Static (k -> 0) quasi-periodic single layer S_D^{alpha,0}, from Richardson extrapolation in k^2.
Matrix static_single_layer(Bloch alpha, double R, int N);

struct StaticSolution {
    Vector psi;                 // (S_D^{alpha,0})^{-1}[chi], Fourier coefficients
    double capacitance = 0.0;   // -<psi, chi>
    double psi_norm2 = 0.0;     // ||psi||^2 on the boundary
    cplx inner = 0.0;           // <psi, chi>, real and negative up to roundoff
};

StaticSolution static_psi(Bloch alpha, const Geometry& geo);
double quasiperiodic_capacitance(Bloch alpha, const Geometry& geo);

/// Distance from alpha to the nearest reciprocal lattice point 2 pi Z^2.
double distance_to_gamma(Bloch alpha);

}  // namespace bubbly
