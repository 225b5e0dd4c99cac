#pragma once

#include <array>
#include <cstdint>
#include <string>

#include "lcft/mc.hpp"
#include "lcft/special.hpp"
#include "lcft/sphere.hpp"

namespace lcft {

// Gauss series on |z| <= 0.7, absolute error target 1e-12.
cplx hyp2f1(double a, double b, double c, cplx z);

struct BpzCoefficients {
    double a = 0.0;
    double b = 0.0;
    double c = 0.0;
    double a_gamma = 0.0;
    double alpha0 = 0.0;
    std::array<double, 3> alphas{};
};

// alpha0 must be -gamma/2 or -2/gamma.
BpzCoefficients bpz_coefficients(const LiouvilleParams& p, double alpha0, const std::array<double, 3>& alphas);

struct FourPointSpec {
    double alpha0 = 0.0;
    std::array<double, 3> alphas{};
    cplx z{};
    double s = 0.0;
};

FourPointSpec make_four_point_spec(const LiouvilleParams& p, double alpha0, const std::array<double, 3>& alphas,
                                   cplx z);

double t_bpz(const LiouvilleParams& p, const FourPointSpec& spec);

// 2 mu^-s gamma^-1 Gamma(s) E[R(z)^-s] with R(z) the four-insertion chaos
// integral (alpha0 at z, alpha1 at 0, alpha2 at 1, alpha3 at infinity). Each
// sample averages R(z)^-s and R(conj z)^-s, which have the same law.
MCEstimate t_mc(const LiouvilleParams& p, const FourPointSpec& spec, std::size_t n_samples, std::uint64_t seed,
                const SamplingOptions& opt = {});
// ens must refine 0, 1 and infinity.
MCEstimate t_mc(const LiouvilleParams& p, const SphereEnsemble& ens, const FourPointSpec& spec,
                std::size_t n_samples, std::uint64_t seed, int threads = 0);

// B(alpha) multiplying C(alpha+gamma/2) in the small-z expansion, and its dual.
double b_coefficient(const LiouvilleParams& p, double alpha);
double b_dual_coefficient(const LiouvilleParams& p, double alpha);

enum class Identity { GammaShift, DualShift, ReflectionGamma, ReflectionDual, Crossing, DozzShift };

const char* identity_name(Identity id) noexcept;
Identity identity_from_name(const std::string& name);

// |LHS/RHS - 1| of the selected identity on dozz_c / reflection_dozz. The
// reflection identities read alphas[0] only. Throws PoleEncountered.
double shift_residual(const LiouvilleParams& p, const std::array<double, 3>& alphas, Identity which);

struct PeriodicityResult {
    double max_residual = 0.0;
    bool gamma_squared_rational = false;
};

// Closes C(alpha+gamma)/C(alpha) and C(alpha+4/gamma)/C(alpha) through the two
// shift identities and checks the two compositions commute, at n_points values
// of alpha1 starting from alphas[0].
PeriodicityResult periodicity_check(const LiouvilleParams& p, const std::array<double, 3>& alphas, int n_points);

bool gamma_squared_is_rational(double gamma, int max_denominator = 1000, double tol = 1e-12);

}  // namespace lcft
