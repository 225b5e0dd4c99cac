#include <algorithm>
#include <cmath>
#include <numeric>

#include <boost/random/gamma_distribution.hpp>

#include "lcft/sphere.hpp"
#include "sphere_internal.hpp"

namespace lcft {

namespace {

void require_gamma(double gamma) {
    if (!(gamma > 0.0 && gamma < 2.0)) throw Error(Errc::GammaOutOfRange, "sampling requires gamma in (0, 2)");
}

bool is_site(const SphereEnsemble& ens, const Insertion& ins) {
    for (const auto& s : ens.sites) {
        if (ins.at_infinity) {
            if (s.chart == Chart::Outer && s.w == cplx(0.0)) return true;
            continue;
        }
        const cplx w = s.chart == Chart::Inner ? ins.z : (ins.z == cplx(0.0) ? cplx(1e300) : 1.0 / ins.z);
        if (std::abs(w - s.w) <= 1e-12 * std::max(1.0, std::abs(s.w))) return true;
    }
    return false;
}

void run_field_batches(const SphereEnsemble& ens, std::size_t n_samples, std::uint64_t seed, int threads,
                       std::size_t batch,
                       const std::function<void(std::size_t, std::size_t, const Eigen::MatrixXd&)>& body) {
    parallel_batches(n_samples, batch, threads, [&](std::size_t, std::size_t begin, std::size_t end) {
        Eigen::MatrixXd fields(static_cast<Eigen::Index>(ens.size()), static_cast<Eigen::Index>(end - begin));
        sample_fields(ens, seed, begin, fields);
        body(begin, end, fields);
    });
}

// exp(gamma X - gamma^2/2 V) scaled by the cell weights, columnwise totals.
Eigen::ArrayXXd chaos_factors(const SphereEnsemble& ens, const Eigen::MatrixXd& fields, double gamma) {
    const Eigen::Map<const Eigen::ArrayXd> var(ens.diag_var.data(), static_cast<Eigen::Index>(ens.size()));
    Eigen::ArrayXXd e = gamma * fields.array();
    e.colwise() -= 0.5 * gamma * gamma * var;
    return e.exp();
}

std::vector<double> alphas_of(const std::vector<Insertion>& ins) {
    std::vector<double> a;
    for (const auto& i : ins) a.push_back(i.alpha);
    return a;
}

double pair_prefactor(const std::vector<Insertion>& ins) {
    double lp = 0.0;
    for (std::size_t i = 0; i < ins.size(); ++i)
        for (std::size_t j = i + 1; j < ins.size(); ++j) {
            if (ins[i].at_infinity || ins[j].at_infinity) continue;
            lp -= ins[i].alpha * ins[j].alpha * std::log(std::abs(ins[i].z - ins[j].z));
        }
    return std::exp(lp);
}

}  // namespace

void sample_fields(const SphereEnsemble& ens, std::uint64_t seed, std::uint64_t first, Eigen::MatrixXd& out) {
    const Eigen::Index n = static_cast<Eigen::Index>(ens.size());
    Eigen::MatrixXd z(n, out.cols());
    for (Eigen::Index c = 0; c < out.cols(); ++c) {
        NormalSource normal(sample_stream(seed, first + static_cast<std::uint64_t>(c)));
        for (Eigen::Index i = 0; i < n; ++i) z(i, c) = normal();
    }
    out.noalias() = ens.cov_factor.triangularView<Eigen::Lower>() * z;
}

Eigen::VectorXd sample_field(const SphereEnsemble& ens, std::uint64_t seed, std::uint64_t index) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(ens.size()), 1);
    sample_fields(ens, seed, index, out);
    return out.col(0);
}

double GmcMeasure::total() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

GmcMeasure gmc_weights(const Eigen::VectorXd& field, const SphereEnsemble& ens, double gamma) {
    require_gamma(gamma);
    GmcMeasure m;
    m.gamma = gamma;
    m.weights.resize(ens.size());
    for (std::size_t i = 0; i < ens.size(); ++i)
        m.weights[i] = std::exp(gamma * field(static_cast<Eigen::Index>(i)) - 0.5 * gamma * gamma * ens.diag_var[i]) *
                       ens.areas[i];
    return m;
}

double log_coulomb(Chart chart, cplx w, double gamma, const std::vector<Insertion>& insertions) {
    double total = 0.0, sum = 0.0;
    for (const auto& ins : insertions) total += ins.alpha;
    if (chart == Chart::Inner) {
        const double lplus = std::max(0.0, std::log(std::abs(w)));
        if (total != 0.0) sum += total * lplus;
        for (const auto& ins : insertions)
            if (!ins.at_infinity && ins.alpha != 0.0) sum -= ins.alpha * std::log(std::abs(w - ins.z));
        return gamma * sum;
    }
    const double lu = std::log(std::abs(w));
    if (lu <= 0.0) {
        for (const auto& ins : insertions) {
            if (ins.alpha == 0.0) continue;
            if (ins.at_infinity)
                sum -= ins.alpha * lu;
            else
                sum -= ins.alpha * std::log(std::abs(1.0 - ins.z * w));
        }
    } else {
        for (const auto& ins : insertions)
            if (!ins.at_infinity && ins.alpha != 0.0) sum -= ins.alpha * (std::log(std::abs(1.0 - ins.z * w)) - lu);
    }
    return gamma * sum;
}

InsertionWeights insertion_weights(const SphereEnsemble& ens, double gamma, const std::vector<Insertion>& insertions) {
    for (const auto& ins : insertions)
        if (ins.alpha > 0.0 && !is_site(ens, ins))
            throw Error(Errc::InsertionMismatch, "insertion with positive weight is not a refinement site");
    InsertionWeights w;
    w.gamma = gamma;
    w.insertions = insertions;
    w.fg.resize(ens.size());
    for (std::size_t i = 0; i < ens.size(); ++i) {
        double acc = 0.0;
        for (std::uint32_t k = ens.sub_begin[i]; k < ens.sub_begin[i + 1]; ++k) {
            const auto& s = ens.subsamples[k];
            acc += s.mass * std::exp(log_coulomb(ens.charts[i], s.w, gamma, insertions));
        }
        w.fg[i] = acc / ens.areas[i];
    }
    return w;
}

double rho_n_point(const GmcMeasure& m, const InsertionWeights& w) {
    if (m.weights.size() != w.fg.size()) throw Error(Errc::InsertionMismatch, "weights built for another ensemble");
    double acc = 0.0;
    for (std::size_t i = 0; i < w.fg.size(); ++i) acc += w.fg[i] * m.weights[i];
    return acc;
}

double rho_n_point(const GmcMeasure& m, const SphereEnsemble& ens, const std::vector<Insertion>& insertions) {
    return rho_n_point(m, insertion_weights(ens, m.gamma, insertions));
}

Admissibility admissibility(const LiouvilleParams& p, const std::vector<double>& alphas) {
    Admissibility a;
    const double g = p.gamma;
    a.s = (std::accumulate(alphas.begin(), alphas.end(), 0.0) - 2.0 * p.q) / g;
    a.moment_bound = 4.0 / (g * g);
    bool below_q = true;
    for (double al : alphas) {
        a.moment_bound = std::min(a.moment_bound, 2.0 / g * (p.q - al));
        below_q = below_q && al < p.q;
    }
    a.extended_ok = below_q && -a.s < a.moment_bound;
    a.seiberg_ok = below_q && a.s > 0.0;
    return a;
}

std::vector<std::vector<double>> sample_rho(const SphereEnsemble& ens, const std::vector<InsertionWeights>& sets,
                                            std::size_t n_samples, std::uint64_t seed, int threads,
                                            std::size_t batch) {
    for (const auto& s : sets) {
        require_gamma(s.gamma);
        if (s.fg.size() != ens.size()) throw Error(Errc::InsertionMismatch, "weights built for another ensemble");
    }
    std::vector<std::vector<double>> out(sets.size(), std::vector<double>(n_samples));
    std::vector<Eigen::VectorXd> cell_w;
    for (const auto& s : sets) {
        Eigen::VectorXd v(static_cast<Eigen::Index>(ens.size()));
        for (std::size_t i = 0; i < ens.size(); ++i) v(static_cast<Eigen::Index>(i)) = s.fg[i] * ens.areas[i];
        cell_w.push_back(std::move(v));
    }
    run_field_batches(ens, n_samples, seed, threads, batch,
                      [&](std::size_t begin, std::size_t, const Eigen::MatrixXd& fields) {
                          double last_gamma = -1.0;
                          Eigen::ArrayXXd e;
                          for (std::size_t k = 0; k < sets.size(); ++k) {
                              if (sets[k].gamma != last_gamma) {
                                  e = chaos_factors(ens, fields, sets[k].gamma);
                                  last_gamma = sets[k].gamma;
                              }
                              const Eigen::VectorXd rho = e.matrix().transpose() * cell_w[k];
                              for (Eigen::Index c = 0; c < rho.size(); ++c)
                                  out[k][begin + static_cast<std::size_t>(c)] = rho(c);
                          }
                      });
    return out;
}

MCEstimate negative_moment_estimate(const LiouvilleParams& p, const std::vector<double>& rho, double s,
                                    double prefactor, std::uint64_t seed) {
    std::vector<double> v(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) v[i] = std::pow(rho[i], -s);
    MCEstimate e = summarize(v, seed);
    double vmax = 0.0, vsum = 0.0;
    for (double x : v) {
        vmax = std::max(vmax, x);
        vsum += x;
    }
    const double scale = 2.0 * std::pow(p.mu, -s) / p.gamma * std::tgamma(s) * prefactor;
    e.value *= scale;
    e.std_error *= std::abs(scale);
    e.diagnostics["ess"] = static_cast<double>(rho.size());
    e.diagnostics["max_weight_share"] = vsum > 0.0 ? vmax / vsum : 0.0;
    e.diagnostics["s"] = s;
    return e;
}

double check_correlation_args(const LiouvilleParams& p, const std::vector<Insertion>& insertions) {
    require_probabilistic(p);
    const Admissibility a = admissibility(p, alphas_of(insertions));
    if (!a.extended_ok) throw Error(Errc::InadmissibleWeights, "weights violate the extended Seiberg bounds");
    if (a.s <= 0.0 && std::abs(a.s - std::round(a.s)) < 1e-12)
        throw Error(Errc::GammaPole, "s is a nonpositive integer");
    return a.s;
}

MCEstimate correlation_estimate(const LiouvilleParams& p, const SphereEnsemble& ens,
                                const std::vector<Insertion>& insertions, std::size_t n_samples, std::uint64_t seed,
                                int threads) {
    const double s = check_correlation_args(p, insertions);
    const auto w = insertion_weights(ens, p.gamma, insertions);
    const auto rho = sample_rho(ens, {w}, n_samples, seed, threads);
    MCEstimate e = negative_moment_estimate(p, rho[0], s, pair_prefactor(insertions), seed);
    e.diagnostics["cells"] = static_cast<double>(ens.size());
    return e;
}

MCEstimate correlation_estimate(const LiouvilleParams& p, const std::vector<Insertion>& insertions,
                                std::size_t n_samples, std::uint64_t seed, const SamplingOptions& opt) {
    check_correlation_args(p, insertions);
    const SphereEnsemble ens = build_ensemble(opt.resolution, insertions);
    return correlation_estimate(p, ens, insertions, n_samples, seed, opt.threads);
}

namespace {
std::vector<Insertion> standard_triple(double a1, double a2, double a3) {
    return {{a1, cplx(0.0), false}, {a2, cplx(1.0), false}, insertion_at_infinity(a3)};
}
}  // namespace

MCEstimate structure_constant_estimate(const LiouvilleParams& p, const SphereEnsemble& ens, double a1, double a2,
                                       double a3, std::size_t n_samples, std::uint64_t seed, int threads) {
    return correlation_estimate(p, ens, standard_triple(a1, a2, a3), n_samples, seed, threads);
}

MCEstimate structure_constant_estimate(const LiouvilleParams& p, double a1, double a2, double a3,
                                       std::size_t n_samples, std::uint64_t seed, const SamplingOptions& opt) {
    return correlation_estimate(p, standard_triple(a1, a2, a3), n_samples, seed, opt);
}

double three_point_prefactor(const LiouvilleParams& p, const std::array<double, 3>& a,
                             const std::array<cplx, 3>& z) {
    auto delta = [&](double al) { return al / 2.0 * (p.q - al / 2.0); };
    const double d1 = delta(a[0]), d2 = delta(a[1]), d3 = delta(a[2]);
    const double d12 = d3 - d1 - d2, d23 = d1 - d2 - d3, d13 = d2 - d1 - d3;
    return std::pow(std::abs(z[0] - z[1]), 2.0 * d12) * std::pow(std::abs(z[1] - z[2]), 2.0 * d23) *
           std::pow(std::abs(z[0] - z[2]), 2.0 * d13);
}

MomentCurve moment_curve(const std::vector<double>& rho, double p, const std::vector<std::size_t>& sizes) {
    MomentCurve c;
    double acc = 0.0;
    std::size_t done = 0;
    for (std::size_t n : sizes) {
        n = std::min(n, rho.size());
        for (; done < n; ++done) acc += std::pow(rho[done], p);
        c.sizes.push_back(n);
        c.moments.push_back(n > 0 ? acc / static_cast<double>(n) : 0.0);
    }
    return c;
}

MCEstimate liouville_measure_expectation(const LiouvilleParams& p, const SphereEnsemble& ens,
                                         const VolumeObservable& obs, std::size_t n_samples, std::uint64_t seed,
                                         int threads) {
    require_probabilistic(p);
    const double g = p.gamma;
    const double shape = (3.0 * g - 2.0 * p.q) / g;
    const Admissibility a = admissibility(p, {g, g, g});
    if (!(shape > 0.0) || !a.extended_ok)
        throw Error(Errc::InadmissibleWeights, "volume form needs (3 gamma - 2Q)/gamma > 0");
    const auto w = insertion_weights(ens, g, standard_triple(g, g, g));
    std::vector<double> f(n_samples), rw(n_samples);
    run_field_batches(ens, n_samples, seed, threads, 16,
                      [&](std::size_t begin, std::size_t end, const Eigen::MatrixXd& fields) {
                          const Eigen::ArrayXXd e = chaos_factors(ens, fields, g);
                          std::vector<double> cells(ens.size());
                          for (std::size_t c = begin; c < end; ++c) {
                              const auto col = static_cast<Eigen::Index>(c - begin);
                              double rho = 0.0;
                              for (std::size_t i = 0; i < ens.size(); ++i) {
                                  cells[i] = w.fg[i] * ens.areas[i] * e(static_cast<Eigen::Index>(i), col);
                                  rho += cells[i];
                              }
                              for (double& x : cells) x /= rho;
                              Rng rng = sample_stream(seed, c, 1);
                              boost::random::gamma_distribution<double> gd(shape, 1.0 / p.mu);
                              const double xi = gd(rng);
                              f[c] = obs(xi, cells, ens);
                              rw[c] = std::pow(rho, -shape);
                          }
                      });
    MCEstimate e = self_normalized(f, rw, seed);
    e.diagnostics["shape"] = shape;
    return e;
}

MCEstimate liouville_measure_expectation(const LiouvilleParams& p, const VolumeObservable& obs,
                                         std::size_t n_samples, std::uint64_t seed, const SamplingOptions& opt) {
    require_probabilistic(p);
    const double g = p.gamma;
    const SphereEnsemble ens = build_ensemble(opt.resolution, standard_triple(g, g, g));
    return liouville_measure_expectation(p, ens, obs, n_samples, seed, opt.threads);
}

}  // namespace lcft
