#include <cmath>

#include "lcft/sphere.hpp"

namespace lcft {

GirsanovResult girsanov_residual(const SphereEnsemble& ens, double gamma, const std::vector<double>& f,
                                 const FieldObservable& obs, std::size_t n_samples, std::uint64_t seed,
                                 int threads) {
    if (ens.size() > 256) throw Error(Errc::TooManyCells, "Girsanov check expects at most 256 cells");
    if (f.size() != ens.size()) throw Error(Errc::InvalidArgument, "f must have one entry per cell");
    if (!(gamma > 0.0 && gamma < 2.0)) throw Error(Errc::GammaOutOfRange, "sampling requires gamma in (0, 2)");
    const auto n = static_cast<Eigen::Index>(ens.size());
    std::vector<Eigen::Index> support;
    for (Eigen::Index i = 0; i < n; ++i)
        if (f[static_cast<std::size_t>(i)] != 0.0) support.push_back(i);
    std::vector<Eigen::VectorXd> shifts;
    for (Eigen::Index i : support) {
        Eigen::VectorXd c(n);
        for (Eigen::Index j = 0; j < n; ++j)
            c(j) = gamma * ens.covariance(static_cast<std::size_t>(j), static_cast<std::size_t>(i));
        shifts.push_back(std::move(c));
    }
    std::vector<double> lhs(n_samples), rhs(n_samples), diff(n_samples);
    parallel_batches(n_samples, 64, threads, [&](std::size_t, std::size_t begin, std::size_t end) {
        Eigen::MatrixXd fields(n, static_cast<Eigen::Index>(end - begin));
        sample_fields(ens, seed, begin, fields);
        for (std::size_t s = begin; s < end; ++s) {
            const Eigen::VectorXd x = fields.col(static_cast<Eigen::Index>(s - begin));
            double mass = 0.0;
            for (Eigen::Index i : support) {
                const auto ui = static_cast<std::size_t>(i);
                mass += f[ui] * ens.areas[ui] * std::exp(gamma * x(i) - 0.5 * gamma * gamma * ens.diag_var[ui]);
            }
            lhs[s] = mass * obs(x);
            double r = 0.0;
            for (std::size_t k = 0; k < support.size(); ++k) {
                const auto ui = static_cast<std::size_t>(support[k]);
                r += f[ui] * ens.areas[ui] * obs(x + shifts[k]);
            }
            rhs[s] = r;
            diff[s] = lhs[s] - rhs[s];
        }
    });
    GirsanovResult g;
    const MCEstimate l = summarize(lhs, seed), r = summarize(rhs, seed), d = summarize(diff, seed);
    g.lhs = l.value;
    g.rhs = r.value;
    g.lhs_err = l.std_error;
    g.rhs_err = r.std_error;
    g.diff_err = d.std_error;
    return g;
}

std::vector<GirsanovPair> standard_girsanov_pairs(const SphereEnsemble& ens) {
    const std::size_t n = ens.size();
    if (n < 8) throw Error(Errc::InvalidArgument, "standard Girsanov pairs need at least 8 cells");
    const auto at = [](std::size_t i) { return static_cast<Eigen::Index>(i); };
    auto unit = [n](std::initializer_list<std::pair<std::size_t, double>> entries) {
        std::vector<double> f(n, 0.0);
        for (const auto& [i, v] : entries) f[i] = v;
        return f;
    };
    const std::size_t mid = n / 2, last = n - 1;
    std::vector<GirsanovPair> pairs;
    pairs.push_back({"constant", unit({{3, 1.0}, {mid, 0.5}}), [](const Eigen::VectorXd&) { return 1.0; }});
    pairs.push_back({"exp_linear", std::vector<double>(n, 1.0), [=](const Eigen::VectorXd& x) {
                         return std::exp(0.3 * x(at(1)) - 0.2 * x(at(mid)));
                     }});
    pairs.push_back({"single_cell", unit({{5, 2.0}}),
                     [](const Eigen::VectorXd& x) { return std::tanh(x(0)) + 1.0; }});
    pairs.push_back({"quadratic", unit({{2, 1.0}, {last, 1.0}}),
                     [=](const Eigen::VectorXd& x) { return x(at(2)) * x(at(last)); }});
    pairs.push_back({"cosine", std::vector<double>(n, 1.0),
                     [=](const Eigen::VectorXd& x) { return std::cos(x(at(0)) - x(at(mid))); }});
    return pairs;
}

}  // namespace lcft
