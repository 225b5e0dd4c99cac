#pragma once

#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lcft/mc.hpp"
#include "lcft/special.hpp"

namespace lcft {

struct CylinderOptions {
    int n_theta = 64;
    double ds = 0.05;
    // Angular Fourier modes kept in the lateral noise; 0 means n_theta / 2.
    int modes = 0;
};

// Lateral noise on a grid of [s_min, s_max] x [0, 2 pi). The field is the
// mode-truncated series sum_{n <= N} (a_n(s) cos n theta + b_n(s) sin n theta)/sqrt(n)
// with independent stationary OU coefficients of rate n, so its covariance is
// sum_{n <= N} e^{-n|s-t|} cos(n (theta - theta'))/n.
struct CylinderEnsemble {
    std::vector<double> s_grid;
    std::vector<double> theta_grid;
    int modes = 0;
    double ds = 0.0;
    double variance = 0.0;  // H_N, the pointwise variance
    Eigen::MatrixXd basis;  // 2N x n_theta: cos rows then sin rows, scaled by 1/sqrt(n)
    std::vector<double> decay;  // e^{-n ds}
};

CylinderEnsemble make_cylinder(double s_min, double s_max, const CylinderOptions& opt = {});

// Exact kernel ln((e^-s v e^-t)/|e^-s e^{i th} - e^-t e^{i th'}|) and its truncation.
double lateral_covariance(double s, double th, double t, double th2);
double lateral_covariance_truncated(const CylinderEnsemble& ens, double s, double th, double t, double th2);

struct LateralSample {
    Eigen::MatrixXd y;      // rows follow s_grid, columns theta_grid
    std::vector<double> z;  // Z_s per row
};

LateralSample sample_lateral(const CylinderEnsemble& ens, double gamma, NormalSource& normal);
// Z_s only.
std::vector<double> sample_z(const CylinderEnsemble& ens, double gamma, NormalSource& normal);

struct DriftedPath {
    std::vector<double> times;
    std::vector<double> values;
    double nu = 0.0;
    bool conditioned = false;
};

DriftedPath sample_drifted_bm(double nu, double horizon, double step, NormalSource& normal);
// Brownian motion with drift -nu conditioned to stay negative, as minus the
// norm of a three-dimensional Brownian motion with drift of length nu.
DriftedPath sample_conditioned_bm(double nu, double horizon, double step, NormalSource& normal);

// M = sup (B_s - nu s) ~ Exp(2 nu).
double sample_max(double nu, NormalSource& normal);

struct IAlphaSample {
    double value = 0.0;
    // Conditional mean of the discarded part beyond the horizon (inf when gamma alpha >= 2).
    double tail_bound = 0.0;
};

double default_horizon(const LiouvilleParams& p, double alpha);

IAlphaSample sample_i_alpha(const LiouvilleParams& p, double alpha, const CylinderEnsemble& ens, NormalSource& normal);
// Same law through the Williams decomposition at the maximum.
IAlphaSample sample_i_alpha_williams(const LiouvilleParams& p, double alpha, const CylinderEnsemble& ens,
                                     NormalSource& normal);

// Two-sided rho(alpha) on ens (s_grid symmetric about 0).
double sample_rho_alpha(const LiouvilleParams& p, double alpha, const CylinderEnsemble& ens, NormalSource& normal);

struct Sandwich {
    double lower = 0.0;
    double glued = 0.0;
    double upper = 0.0;
};
Sandwich williams_sandwich(const LiouvilleParams& p, double alpha, const CylinderEnsemble& ens, NormalSource& normal);

std::vector<double> sample_i_alpha_many(const LiouvilleParams& p, double alpha, std::size_t n, std::uint64_t seed,
                                        const CylinderOptions& opt = {}, int threads = 0);

MCEstimate rbar_estimate(const LiouvilleParams& p, double alpha, std::size_t n_samples, std::uint64_t seed,
                         const CylinderOptions& opt = {}, int threads = 0);

double full_reflection(const LiouvilleParams& p, double alpha, double rbar);

struct TailFit {
    double slope = 0.0;
    double slope_err = 0.0;
    double expected = 0.0;
    std::pair<double, double> window{0.0, 0.0};
    std::vector<double> thresholds;
    std::vector<std::size_t> n_exceed;
    double hill_slope = 0.0;
    std::size_t n = 0;
};

TailFit tail_fit(const std::vector<double>& samples, double expected_slope_hint, std::uint64_t seed = kDefaultSeed,
                 int bootstrap = 200);

// (t, empirical survival) at up to `points` order statistics, survival strictly decreasing.
std::vector<std::pair<double, double>> survival_curve(const std::vector<double>& samples, std::size_t points);

// Observable of the unit-volume measure: the normalized row masses on s_grid.
using CylinderObservable = std::function<double(const std::vector<double>& s_grid, const std::vector<double>& mass)>;

MCEstimate quantum_sphere_expectation(const LiouvilleParams& p, double alpha, const CylinderObservable& obs,
                                      std::size_t n_samples, std::uint64_t seed, const CylinderOptions& opt = {},
                                      int threads = 0);

}  // namespace lcft
