#pragma once

#include "lcft/special.hpp"

namespace lcft {

struct KpzSolution {
    double gamma = 0.0;
    double alpha = 0.0;
    double delta_sigma = 0.0;
    double c_matter = 0.0;
    double delta_alpha = 0.0;
};

// Unique gamma in (0,2] with 1 + 6Q^2 + c_m = 26; requires c_m <= 1.
double gamma_from_central_charge(double c_m);
double liouville_central_charge(double gamma);

double conformal_weight(const LiouvilleParams& p, double alpha);

// Root alpha < Q of Delta_sigma + Delta_alpha = 1.
double alpha_from_weight(const LiouvilleParams& p, double delta_sigma);

KpzSolution solve_kpz(const LiouvilleParams& p, double delta_sigma);

}  // namespace lcft
