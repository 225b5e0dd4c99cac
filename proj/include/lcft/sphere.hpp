#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lcft/mc.hpp"
#include "lcft/special.hpp"

namespace lcft {

// Vertex operator V_alpha(z); z is ignored when at_infinity is set.
struct Insertion {
    double alpha = 0.0;
    cplx z{};
    bool at_infinity = false;
};

Insertion insertion_at_infinity(double alpha);

// Cells live in one of two charts: Inner uses w = x, Outer uses w = 1/x. In
// both charts the metric |x|_+^-4 d^2x reads |w|_+^-4 d^2w and the kernel reads
// -ln|w1 - w2| + ln|w1|_+ + ln|w2|_+.
enum class Chart : std::uint8_t { Inner, Outer };

struct SubSample {
    cplx w;
    double mass;  // metric mass carried by this quadrature node
};

struct RefinementSite {
    Chart chart = Chart::Inner;
    cplx w{};
    double radius = 0.0;
};

struct EnsembleOptions {
    // Log-polar depth below the site radius, in units of ln r.
    double site_depth = 30.0;
    // Ring angular count halves every this many units of ln r.
    double halving_depth = 4.0;
    int min_ring_cells = 8;
    int background_subsamples = 7;
    int boundary_subsamples = 21;
    std::size_t max_cells = 16384;
};

struct SphereEnsemble {
    int resolution = 0;
    std::vector<Insertion> insertions;
    std::vector<RefinementSite> sites;
    std::vector<Chart> charts;
    std::vector<cplx> points;  // cell centres in chart coordinates
    std::vector<double> areas;
    std::vector<double> eps;
    std::vector<double> diag_var;
    std::vector<std::uint32_t> sub_begin;  // size n+1 into subsamples
    std::vector<SubSample> subsamples;
    // Lower triangle holds the Cholesky factor, the strict upper triangle the
    // original covariance (row i, column j > i stores C(i, j)).
    Eigen::MatrixXd cov_factor;
    double jitter = 0.0;

    std::size_t size() const { return points.size(); }
    // Plane coordinate of cell i; infinite for the outer-chart origin.
    cplx plane_point(std::size_t i) const;
    double covariance(std::size_t i, std::size_t j) const;
};

// Insertions with alpha > 0 become refinement sites.
SphereEnsemble build_ensemble(int resolution, const std::vector<Insertion>& insertions,
                              const EnsembleOptions& opt = {});

// Circle-average covariance of the circles (chart a, c_a, eps_a) and (chart b, c_b, eps_b).
double circle_covariance(Chart ca, cplx c_a, double eps_a, Chart cb, cplx c_b, double eps_b);

// Max |L L^T - C| / max |C| over the entries (i, j) with i, j in rows.
double factorization_residual(const SphereEnsemble& ens, const std::vector<std::size_t>& rows);

// Fills `out` (n x cols) with fields for samples first .. first+cols-1.
void sample_fields(const SphereEnsemble& ens, std::uint64_t seed, std::uint64_t first, Eigen::MatrixXd& out);
Eigen::VectorXd sample_field(const SphereEnsemble& ens, std::uint64_t seed, std::uint64_t index);

struct GmcMeasure {
    double gamma = 0.0;
    std::vector<double> weights;
    double total() const;
};

GmcMeasure gmc_weights(const Eigen::VectorXd& field, const SphereEnsemble& ens, double gamma);

// Cell integrals of F(x, z) g(x) d^2x for the Coulomb factor F; the
// insertions with alpha > 0 must be refinement sites of ens.
struct InsertionWeights {
    double gamma = 0.0;
    std::vector<Insertion> insertions;
    std::vector<double> fg;  // per cell: int F g / int g
};

InsertionWeights insertion_weights(const SphereEnsemble& ens, double gamma, const std::vector<Insertion>& insertions);

// ln F at chart point w.
double log_coulomb(Chart chart, cplx w, double gamma, const std::vector<Insertion>& insertions);

double rho_n_point(const GmcMeasure& m, const InsertionWeights& w);
double rho_n_point(const GmcMeasure& m, const SphereEnsemble& ens, const std::vector<Insertion>& insertions);

struct Admissibility {
    double s = 0.0;
    bool extended_ok = false;
    bool seiberg_ok = false;
    double moment_bound = 0.0;
};

Admissibility admissibility(const LiouvilleParams& p, const std::vector<double>& alphas);

struct SamplingOptions {
    int resolution = 40;
    int threads = 0;
    std::size_t batch = 32;
};

// Samples rho for each weight set on shared fields; values[k][i] is sample i of set k.
std::vector<std::vector<double>> sample_rho(const SphereEnsemble& ens, const std::vector<InsertionWeights>& sets,
                                            std::size_t n_samples, std::uint64_t seed, int threads,
                                            std::size_t batch = 32);

// 2 mu^-s gamma^-1 Gamma(s) prod |z_i - z_j|^(-alpha_i alpha_j) E[rho^-s].
MCEstimate correlation_estimate(const LiouvilleParams& p, const std::vector<Insertion>& insertions,
                                std::size_t n_samples, std::uint64_t seed, const SamplingOptions& opt = {});
MCEstimate correlation_estimate(const LiouvilleParams& p, const SphereEnsemble& ens,
                                const std::vector<Insertion>& insertions, std::size_t n_samples, std::uint64_t seed,
                                int threads = 0);

// Insertions (a1 at 0, a2 at 1, a3 at infinity).
MCEstimate structure_constant_estimate(const LiouvilleParams& p, double a1, double a2, double a3, std::size_t n_samples,
                                       std::uint64_t seed, const SamplingOptions& opt = {});
MCEstimate structure_constant_estimate(const LiouvilleParams& p, const SphereEnsemble& ens, double a1, double a2,
                                       double a3, std::size_t n_samples, std::uint64_t seed, int threads = 0);

// |z12|^(2 D12) |z23|^(2 D23) |z13|^(2 D13) for three finite points.
double three_point_prefactor(const LiouvilleParams& p, const std::array<double, 3>& alphas,
                             const std::array<cplx, 3>& zs);

// Empirical E[rho^p] for each p over growing prefixes of one sample set.
struct MomentCurve {
    std::vector<std::size_t> sizes;
    std::vector<double> moments;
};
MomentCurve moment_curve(const std::vector<double>& rho, double p, const std::vector<std::size_t>& sizes);

// Girsanov corollary on a small ensemble: E[(sum f_i M_i) F(X)] against
// sum f_i area_i E[F(X + gamma C(., i))].
struct GirsanovResult {
    double lhs = 0.0;
    double rhs = 0.0;
    double lhs_err = 0.0;
    double rhs_err = 0.0;
    // Standard error of the paired per-sample difference.
    double diff_err = 0.0;
};

using FieldObservable = std::function<double(const Eigen::VectorXd&)>;

GirsanovResult girsanov_residual(const SphereEnsemble& ens, double gamma, const std::vector<double>& f,
                                 const FieldObservable& obs, std::size_t n_samples, std::uint64_t seed,
                                 int threads = 0);

// Five fixed (f, F) pairs on an ensemble of at least 8 cells: constant F,
// exponential-linear F, one-cell support, quadratic F and a bounded oscillating F.
struct GirsanovPair {
    std::string name;
    std::vector<double> f;
    FieldObservable obs;
};
std::vector<GirsanovPair> standard_girsanov_pairs(const SphereEnsemble& ens);

struct DfCheck {
    double quadrature = 0.0;
    double closed_form = 0.0;
    double a3 = 0.0;
};

// a3 from gamma (a1 + a2 + a3) = 4.
DfCheck df_check(const LiouvilleParams& p, double a1, double a2);

struct DfResidue {
    double limit = 0.0;     // eps * C(a1, a2, a3 + eps) extrapolated to 0
    double expected = 0.0;  // -2 mu times the integral
};
DfResidue df_residue_check(const LiouvilleParams& p, double a1, double a2);

// Observable of the Liouville volume form: total mass xi and the normalized
// cell masses of rho(gamma, gamma, gamma)[.] / rho.
using VolumeObservable = std::function<double(double xi, const std::vector<double>& normalized,
                                              const SphereEnsemble& ens)>;

MCEstimate liouville_measure_expectation(const LiouvilleParams& p, const VolumeObservable& obs,
                                         std::size_t n_samples, std::uint64_t seed, const SamplingOptions& opt = {});
MCEstimate liouville_measure_expectation(const LiouvilleParams& p, const SphereEnsemble& ens,
                                         const VolumeObservable& obs, std::size_t n_samples, std::uint64_t seed,
                                         int threads = 0);

}  // namespace lcft
