#include "lcft/cylinder.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "lcft/error.hpp"

namespace lcft {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();

double drift_of(const LiouvilleParams& p, double alpha) {
    if (!(alpha > p.gamma / 2.0 && alpha < p.q))
        throw Error(Errc::AlphaOutOfRange, "alpha must lie in (gamma/2, Q)");
    return p.q - alpha;
}

void check_step(double nu, double step) {
    if (!(nu > 0.0)) throw Error(Errc::InvalidArgument, "drift must be positive");
    if (!(step > 0.0)) throw Error(Errc::InvalidArgument, "step must be positive");
    // The path must resolve the drift scale 1/nu^2 near the origin.
    if (step * std::max(1.0, nu * nu) > 0.25) throw Error(Errc::StepTooCoarse, "step too coarse for the drift");
}

// Values at k * step, k = 0 .. steps, of -|W| for W a 3d Brownian motion with drift (nu, 0, 0).
std::vector<double> conditioned_values(double nu, std::size_t steps, double step, NormalSource& normal) {
    std::vector<double> v(steps + 1, 0.0);
    const double sd = std::sqrt(step);
    double x = 0.0, y = 0.0, z = 0.0;
    for (std::size_t k = 1; k <= steps; ++k) {
        x += nu * step + sd * normal();
        y += sd * normal();
        z += sd * normal();
        v[k] = -std::sqrt(x * x + y * y + z * z);
    }
    return v;
}

std::vector<double> drifted_values(double nu, std::size_t steps, double step, NormalSource& normal) {
    std::vector<double> v(steps + 1, 0.0);
    const double sd = std::sqrt(step);
    for (std::size_t k = 1; k <= steps; ++k) v[k] = v[k - 1] - nu * step + sd * normal();
    return v;
}

std::size_t zero_row(const CylinderEnsemble& ens) {
    for (std::size_t k = 0; k < ens.s_grid.size(); ++k)
        if (std::abs(ens.s_grid[k]) < 0.5 * ens.ds) return k;
    throw Error(Errc::InvalidArgument, "grid does not contain s = 0");
}

void require_one_sided(const CylinderEnsemble& ens) {
    if (ens.s_grid.empty() || ens.s_grid.front() != 0.0)
        throw Error(Errc::InvalidArgument, "one-sided grid must start at s = 0");
}

void require_horizon(const LiouvilleParams& p, double nu, double horizon) {
    if (horizon < 10.0 / (p.gamma * nu)) throw Error(Errc::HorizonTooShort, "horizon below 10/(gamma nu)");
}

// Index of the last time the path sits at or above -m, moved to the closer side of the crossing.
std::size_t last_passage(const std::vector<double>& path, double m) {
    std::size_t k = 0;
    for (std::size_t i = 0; i < path.size(); ++i)
        if (path[i] >= -m) k = i;
    if (k + 1 < path.size() && std::abs(path[k + 1] + m) < std::abs(path[k] + m)) ++k;
    return k;
}

CylinderEnsemble one_sided(const LiouvilleParams& p, double alpha, const CylinderOptions& opt) {
    return make_cylinder(0.0, default_horizon(p, alpha), opt);
}

CylinderEnsemble two_sided(const LiouvilleParams& p, double alpha, const CylinderOptions& opt) {
    const double s = default_horizon(p, alpha);
    return make_cylinder(-s, s, opt);
}

// Two-sided exponent path: independent conditioned halves.
std::vector<double> two_sided_path(const CylinderEnsemble& ens, double nu, NormalSource& normal) {
    const std::size_t k0 = zero_row(ens);
    const std::size_t rows = ens.s_grid.size();
    const auto right = conditioned_values(nu, rows - 1 - k0, ens.ds, normal);
    const auto left = conditioned_values(nu, k0, ens.ds, normal);
    std::vector<double> b(rows);
    for (std::size_t k = 0; k < rows; ++k) b[k] = k >= k0 ? right[k - k0] : left[k0 - k];
    return b;
}

double trapezoid(const std::vector<double>& path, const std::vector<double>& z, double gamma, double ds) {
    double sum = 0.0;
    const std::size_t n = z.size();
    for (std::size_t k = 0; k < n; ++k) {
        const double w = (k == 0 || k + 1 == n) ? 0.5 : 1.0;
        sum += w * std::exp(gamma * path[k]) * z[k];
    }
    return sum * ds;
}

void check_moment_band(const LiouvilleParams& p, double x, MCEstimate& est) {
    est.diagnostics["exponent"] = x;
    est.diagnostics["variance_warning"] = 2.0 * x < 4.0 / (p.gamma * p.gamma) ? 0.0 : 1.0;
}

}  // namespace

CylinderEnsemble make_cylinder(double s_min, double s_max, const CylinderOptions& opt) {
    if (opt.n_theta < 4) throw Error(Errc::InvalidArgument, "n_theta must be at least 4");
    if (!(opt.ds > 0.0) || !(s_max > s_min)) throw Error(Errc::InvalidArgument, "empty cylinder grid");
    const int modes = opt.modes > 0 ? opt.modes : opt.n_theta / 2;
    if (modes > opt.n_theta / 2) throw Error(Errc::InvalidArgument, "more modes than the angular grid resolves");
    const auto steps = static_cast<std::size_t>(std::ceil((s_max - s_min) / opt.ds - 1e-9));
    if ((steps + 1) * static_cast<std::size_t>(opt.n_theta) > 16384ull * 256ull)
        throw Error(Errc::TooManyCells, "cylinder grid too large");
    CylinderEnsemble ens;
    ens.ds = opt.ds;
    ens.modes = modes;
    ens.s_grid.resize(steps + 1);
    for (std::size_t k = 0; k <= steps; ++k) {
        const double s = s_min + static_cast<double>(k) * opt.ds;
        // The row through s = 0 must sit exactly at 0.
        ens.s_grid[k] = std::abs(s) < 1e-9 * opt.ds ? 0.0 : s;
    }
    ens.theta_grid.resize(opt.n_theta);
    for (int j = 0; j < opt.n_theta; ++j) ens.theta_grid[j] = 2.0 * kPi * j / opt.n_theta;
    ens.basis.resize(2 * modes, opt.n_theta);
    for (int n = 1; n <= modes; ++n) {
        const double scale = 1.0 / std::sqrt(static_cast<double>(n));
        for (int j = 0; j < opt.n_theta; ++j) {
            ens.basis(n - 1, j) = scale * std::cos(n * ens.theta_grid[j]);
            ens.basis(modes + n - 1, j) = scale * std::sin(n * ens.theta_grid[j]);
        }
        ens.variance += 1.0 / n;
        ens.decay.push_back(std::exp(-n * opt.ds));
    }
    return ens;
}

double lateral_covariance(double s, double th, double t, double th2) {
    // ln((e^-s v e^-t)/|e^-s e^{i th} - e^-t e^{i th'}|) = -ln|1 - e^{-|s-t|} e^{i(th - th')}|.
    return -std::log(std::abs(1.0 - std::polar(std::exp(-std::abs(s - t)), th - th2)));
}

double lateral_covariance_truncated(const CylinderEnsemble& ens, double s, double th, double t, double th2) {
    double sum = 0.0;
    for (int n = 1; n <= ens.modes; ++n) sum += std::exp(-n * std::abs(s - t)) * std::cos(n * (th - th2)) / n;
    return sum;
}

namespace {

// Stationary OU coefficients, one row per s.
Eigen::MatrixXd sample_coefficients(const CylinderEnsemble& ens, NormalSource& normal) {
    const auto rows = static_cast<Eigen::Index>(ens.s_grid.size());
    const int m = ens.modes;
    Eigen::MatrixXd a(rows, 2 * m);
    for (int c = 0; c < 2 * m; ++c) a(0, c) = normal();
    for (Eigen::Index k = 1; k < rows; ++k)
        for (int c = 0; c < 2 * m; ++c) {
            const double rho = ens.decay[c % m];
            a(k, c) = rho * a(k - 1, c) + std::sqrt(1.0 - rho * rho) * normal();
        }
    return a;
}

std::vector<double> total_mass(const CylinderEnsemble& ens, const Eigen::MatrixXd& y, double gamma) {
    const double dth = 2.0 * kPi / static_cast<double>(ens.theta_grid.size());
    const Eigen::VectorXd z = (gamma * y.array() - 0.5 * gamma * gamma * ens.variance).exp().rowwise().sum() * dth;
    return {z.data(), z.data() + z.size()};
}

}  // namespace

LateralSample sample_lateral(const CylinderEnsemble& ens, double gamma, NormalSource& normal) {
    LateralSample out;
    out.y = sample_coefficients(ens, normal) * ens.basis;
    out.z = total_mass(ens, out.y, gamma);
    return out;
}

std::vector<double> sample_z(const CylinderEnsemble& ens, double gamma, NormalSource& normal) {
    const Eigen::MatrixXd y = sample_coefficients(ens, normal) * ens.basis;
    return total_mass(ens, y, gamma);
}

DriftedPath sample_drifted_bm(double nu, double horizon, double step, NormalSource& normal) {
    check_step(nu, step);
    const auto steps = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
    DriftedPath path{{}, drifted_values(nu, steps, step, normal), nu, false};
    for (std::size_t k = 0; k <= steps; ++k) path.times.push_back(static_cast<double>(k) * step);
    return path;
}

DriftedPath sample_conditioned_bm(double nu, double horizon, double step, NormalSource& normal) {
    check_step(nu, step);
    const auto steps = static_cast<std::size_t>(std::ceil(horizon / step - 1e-9));
    DriftedPath path{{}, conditioned_values(nu, steps, step, normal), nu, true};
    for (std::size_t k = 0; k <= steps; ++k) path.times.push_back(static_cast<double>(k) * step);
    return path;
}

double sample_max(double nu, NormalSource& normal) {
    if (!(nu > 0.0)) throw Error(Errc::InvalidArgument, "drift must be positive");
    return -std::log(normal.uniform_open()) / (2.0 * nu);
}

double default_horizon(const LiouvilleParams& p, double alpha) {
    const double nu = drift_of(p, alpha);
    return std::max(10.0, 12.0 / (p.gamma * nu));
}

IAlphaSample sample_i_alpha(const LiouvilleParams& p, double alpha, const CylinderEnsemble& ens,
                            NormalSource& normal) {
    const double nu = drift_of(p, alpha);
    require_one_sided(ens);
    require_horizon(p, nu, ens.s_grid.back());
    const double g = p.gamma;
    const auto z = sample_z(ens, g, normal);
    const auto b = drifted_values(nu, z.size() - 1, ens.ds, normal);
    IAlphaSample out;
    out.value = trapezoid(b, z, g, ens.ds);
    const double rate = 2.0 - g * alpha;
    out.tail_bound = rate > 0.0 ? 2.0 * kPi * std::exp(g * b.back()) / rate : kInf;
    return out;
}

IAlphaSample sample_i_alpha_williams(const LiouvilleParams& p, double alpha, const CylinderEnsemble& ens,
                                     NormalSource& normal) {
    const double nu = drift_of(p, alpha);
    require_one_sided(ens);
    require_horizon(p, nu, ens.s_grid.back());
    const double g = p.gamma;
    const std::size_t rows = ens.s_grid.size();
    const auto z = sample_z(ens, g, normal);
    const double m = sample_max(nu, normal);
    // Rising segment: M plus the time reversal of a conditioned path up to its last passage at -M.
    const auto up = conditioned_values(nu, rows - 1, ens.ds, normal);
    const std::size_t kl = std::min(last_passage(up, m), rows - 1);
    const auto down = conditioned_values(nu, rows - 1 - kl, ens.ds, normal);
    std::vector<double> x(rows);
    for (std::size_t k = 0; k < rows; ++k) x[k] = m + (k <= kl ? up[kl - k] : down[k - kl]);
    IAlphaSample out;
    out.value = trapezoid(x, z, g, ens.ds);
    const double rate = 2.0 - g * alpha;
    out.tail_bound = rate > 0.0 ? 2.0 * kPi * std::exp(g * x.back()) / rate : kInf;
    return out;
}

double sample_rho_alpha(const LiouvilleParams& p, double alpha, const CylinderEnsemble& ens, NormalSource& normal) {
    const double nu = drift_of(p, alpha);
    const auto z = sample_z(ens, p.gamma, normal);
    const auto b = two_sided_path(ens, nu, normal);
    return trapezoid(b, z, p.gamma, ens.ds);
}

Sandwich williams_sandwich(const LiouvilleParams& p, double alpha, const CylinderEnsemble& ens,
                           NormalSource& normal) {
    const double nu = drift_of(p, alpha);
    const double g = p.gamma;
    const auto z = sample_z(ens, g, normal);
    const double m = sample_max(nu, normal);
    const auto b = two_sided_path(ens, nu, normal);
    const std::size_t k0 = zero_row(ens);
    std::vector<double> left(k0 + 1);
    for (std::size_t k = 0; k <= k0; ++k) left[k] = b[k0 - k];
    const std::size_t kl = last_passage(left, m);
    // Riemann sums over nested index ranges, so the ordering holds pathwise.
    Sandwich out;
    const double scale = std::exp(g * m) * ens.ds;
    for (std::size_t k = 0; k < z.size(); ++k) {
        const double term = std::exp(g * b[k]) * z[k] * scale;
        out.upper += term;
        if (k + kl >= k0) out.glued += term;
        if (k >= k0) out.lower += term;
    }
    return out;
}

std::vector<double> sample_i_alpha_many(const LiouvilleParams& p, double alpha, std::size_t n, std::uint64_t seed,
                                        const CylinderOptions& opt, int threads) {
    const auto ens = one_sided(p, alpha, opt);
    std::vector<double> out(n);
    parallel_batches(n, 256, resolve_threads(threads), [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            NormalSource normal(sample_stream(seed, i));
            out[i] = sample_i_alpha(p, alpha, ens, normal).value;
        }
    });
    return out;
}

MCEstimate rbar_estimate(const LiouvilleParams& p, double alpha, std::size_t n_samples, std::uint64_t seed,
                         const CylinderOptions& opt, int threads) {
    require_probabilistic(p);
    const double x = 2.0 * drift_of(p, alpha) / p.gamma;
    const auto ens = two_sided(p, alpha, opt);
    std::vector<double> values(n_samples);
    parallel_batches(n_samples, 64, resolve_threads(threads), [&](std::size_t, std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            NormalSource normal(sample_stream(seed, i));
            values[i] = std::pow(sample_rho_alpha(p, alpha, ens, normal), x);
        }
    });
    auto est = summarize(values, seed);
    check_moment_band(p, x, est);
    return est;
}

double full_reflection(const LiouvilleParams& p, double alpha, double rbar) {
    const double x = 2.0 * (p.q - alpha) / p.gamma;
    if (std::abs(x - std::round(x)) < 1e-12 && std::round(x) >= 0.0)
        throw Error(Errc::PoleOfReflection, "Gamma(-2(Q-alpha)/gamma) has a pole");
    return std::pow(p.mu, x) * std::tgamma(-x) * x * rbar;
}

MCEstimate quantum_sphere_expectation(const LiouvilleParams& p, double alpha, const CylinderObservable& obs,
                                      std::size_t n_samples, std::uint64_t seed, const CylinderOptions& opt,
                                      int threads) {
    require_probabilistic(p);
    const double x = 2.0 * drift_of(p, alpha) / p.gamma;
    const auto ens = two_sided(p, alpha, opt);
    std::vector<double> f(n_samples), w(n_samples);
    parallel_batches(n_samples, 64, resolve_threads(threads), [&](std::size_t, std::size_t begin, std::size_t end) {
        std::vector<double> mass(ens.s_grid.size());
        for (std::size_t i = begin; i < end; ++i) {
            NormalSource normal(sample_stream(seed, i));
            const auto z = sample_z(ens, p.gamma, normal);
            const auto b = two_sided_path(ens, drift_of(p, alpha), normal);
            double rho = 0.0;
            for (std::size_t k = 0; k < z.size(); ++k) {
                const double wk = (k == 0 || k + 1 == z.size()) ? 0.5 : 1.0;
                mass[k] = wk * std::exp(p.gamma * b[k]) * z[k] * ens.ds;
                rho += mass[k];
            }
            for (auto& m : mass) m /= rho;
            f[i] = obs(ens.s_grid, mass);
            w[i] = std::pow(rho, x);
        }
    });
    auto est = self_normalized(f, w, seed);
    check_moment_band(p, x, est);
    return est;
}

}  // namespace lcft
