#include "lcft/kpz.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace lcft {

double gamma_from_central_charge(double c_m) {
    if (!(c_m <= 1.0))
        throw Error(Errc::CentralChargeTooLarge, "c_m = " + std::to_string(c_m) + " must be <= 1");
    return (std::sqrt(25.0 - c_m) - std::sqrt(1.0 - c_m)) / std::sqrt(6.0);
}

double liouville_central_charge(double gamma) {
    const double q = gamma / 2.0 + 2.0 / gamma;
    return 1.0 + 6.0 * q * q;
}

double conformal_weight(const LiouvilleParams& p, double alpha) { return alpha / 2.0 * (p.q - alpha / 2.0); }

double alpha_from_weight(const LiouvilleParams& p, double delta_sigma) {
    // Q^2 - 4 = D^2 with D = 2/gamma - gamma/2, so the root is
    // min(gamma, 4/gamma) - 4 Delta_sigma / (|D| + sqrt(D^2 + 4 Delta_sigma)),
    // which returns gamma bit-exactly at Delta_sigma = 0.
    const double g = p.gamma;
    const double d = std::abs(2.0 / g - g / 2.0);
    double disc = d * d + 4.0 * delta_sigma;
    if (disc < 0.0) {
        if (disc < -64.0 * std::numeric_limits<double>::epsilon() * p.q * p.q)
            throw Error(Errc::NoRealSolution, "Delta_sigma must exceed 1 - Q^2/4");
        disc = 0.0;
    }
    const double base = std::min(g, 4.0 / g);
    if (delta_sigma == 0.0) return base;
    const double root = std::sqrt(disc);
    if (d + root == 0.0) return base;
    return base - 4.0 * delta_sigma / (d + root);
}

KpzSolution solve_kpz(const LiouvilleParams& p, double delta_sigma) {
    KpzSolution s;
    s.gamma = p.gamma;
    s.delta_sigma = delta_sigma;
    s.alpha = alpha_from_weight(p, delta_sigma);
    s.delta_alpha = conformal_weight(p, s.alpha);
    s.c_matter = 26.0 - liouville_central_charge(p.gamma);
    return s;
}

}  // namespace lcft
