#pragma once

#include "lcft/sphere.hpp"

namespace lcft {

// Mean over phi of ln max(sqrt(a1 + Re(b1 e^{i phi})), sqrt(a2 + Re(b2 e^{i phi}))).
double mean_log_max(double a1, cplx b1, double a2, cplx b2);
// Mean of ln|w|_+ over the circle (c, eps).
double circle_log_plus(cplx c, double eps);
// Mean of ln|x - y| (same chart) or ln|1 - x u| (inner x, outer u) over two circles.
double circle_pair_log(Chart ca, cplx c_a, double eps_a, Chart cb, cplx c_b, double eps_b);

void assemble_covariance(SphereEnsemble& ens);
void factorize(SphereEnsemble& ens);

}  // namespace lcft

namespace lcft {

// Validates a correlation request and returns s.
double check_correlation_args(const LiouvilleParams& p, const std::vector<Insertion>& insertions);

// 2 mu^-s gamma^-1 Gamma(s) * prefactor * mean(rho^-s).
MCEstimate negative_moment_estimate(const LiouvilleParams& p, const std::vector<double>& rho, double s,
                                    double prefactor, std::uint64_t seed);

}  // namespace lcft
