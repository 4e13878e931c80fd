#include "bubbly/medium.hpp"

#include "bubbly/errors.hpp"

#include <cmath>

namespace bubbly {

double Medium::v_w() const { return std::sqrt(kappa_w / rho_w); }
double Medium::v_b() const { return std::sqrt(kappa_b / rho_b); }

void Medium::validate() const {
    for (double v : {rho_w, kappa_w, rho_b, kappa_b})
        if (!std::isfinite(v) || v <= 0.0) throw InvalidArgument("Medium: densities and bulk moduli must be positive");
    if (!(delta() < 1.0)) throw InvalidArgument("Medium: contrast delta = rho_b/rho_w must lie in (0, 1)");
}

void Geometry::validate() const {
    if (!std::isfinite(R) || !(R > 0.0 && R < 0.5)) throw InvalidArgument("Geometry: R must lie in (0, 1/2)");
    if (!std::isfinite(eps) || !(R_d() > 0.0 && R_d() < 0.5))
        throw InvalidArgument("Geometry: defect radius R + eps must lie in (0, 1/2)");
    if (N < 1 || N > 30) throw InvalidArgument("Geometry: truncation order N must lie in [1, 30]");
}

}  // namespace bubbly
