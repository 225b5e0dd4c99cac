#pragma once

#include <complex>

#include "lcft/error.hpp"

namespace lcft {

using cplx = std::complex<double>;

// Coupling data shared by every module. mu_dual is +-inf when 4/gamma^2 is a
// positive integer (l(4/gamma^2) = 0) and negative when l(4/gamma^2) < 0.
struct LiouvilleParams {
    double gamma = 1.0;
    double q = 2.5;
    double mu = 1.0;
    double mu_dual = 0.0;
    bool closed_form_only = false;
};

LiouvilleParams make_params(double gamma, double mu);

// (4/gamma, mu_dual). Throws DegenerateDual when mu_dual is not finite.
LiouvilleParams dual_params(const LiouvilleParams& p);

// Throws GammaOutOfRange for closed-form-only couplings.
void require_probabilistic(const LiouvilleParams& p);

double mu_dual_of(double gamma, double mu);

// Complex Gamma (Lanczos, reflected for Re z < 1/2) and its reciprocal.
cplx gamma_fn(cplx z);
cplx rgamma(cplx z);
// Real reciprocal Gamma: exact 0 at the poles.
double rgamma(double x);

// l(x) = Gamma(x)/Gamma(1-x).
double l_ratio(double x);
cplx l_ratio(cplx x);

cplx upsilon(cplx z, double gamma);
double upsilon(double z, double gamma);

double upsilon_prime_zero(double gamma);
// Central difference of upsilon at 0, kept as a cross-check of upsilon_prime_zero.
double upsilon_prime_zero_fd(double gamma, double h = 1e-4);

double dozz_c(const LiouvilleParams& p, double a1, double a2, double a3);
double reflection_dozz(const LiouvilleParams& p, double alpha);

// Distance tolerance used to snap arguments onto the Upsilon zero lattice.
inline constexpr double kZeroLatticeTol = 1e-10;

bool on_upsilon_zero_lattice(cplx z, double gamma, double tol = kZeroLatticeTol);

// eps * dozz_c(alpha, eps, alpha) Richardson-extrapolated to eps -> 0 from
// eps in {1e-2, 1e-3, 1e-4}; the limit is 4 * reflection_dozz(alpha).
double two_point_limit(const LiouvilleParams& p, double alpha);

}  // namespace lcft
