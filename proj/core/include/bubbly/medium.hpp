#pragma once

namespace bubbly {

/// Material parameters of the water matrix (w) and the bubbles (b).
struct Medium {
    double rho_w = 5000.0;
    double kappa_w = 5000.0;
    double rho_b = 1.0;
    double kappa_b = 1.0;

    double delta() const { return rho_b / rho_w; }
    double v_w() const;
    double v_b() const;
    double k_w(double omega) const { return omega / v_w(); }
    double k_b(double omega) const { return omega / v_b(); }

    /// Throws InvalidArgument unless all parameters are positive and 0 < delta < 1.
    void validate() const;
};

/// Bubble radius R, defect perturbation eps (defect radius R + eps), Fourier truncation N.
struct Geometry {
    double R = 0.05;
    double eps = 0.0;
    int N = 7;

    double R_d() const { return R + eps; }

    /// Throws InvalidArgument unless 0 < R < 1/2, 0 < R + eps < 1/2 and N >= 1.
    void validate() const;
};

}  // namespace bubbly
