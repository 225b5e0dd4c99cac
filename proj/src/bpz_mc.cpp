#include <cmath>

#include "lcft/bpz.hpp"

namespace lcft {

namespace {

std::vector<Insertion> quadruple(const FourPointSpec& spec, cplx z) {
    return {{spec.alpha0, z, false},
            {spec.alphas[0], cplx(0.0), false},
            {spec.alphas[1], cplx(1.0), false},
            insertion_at_infinity(spec.alphas[2])};
}

void check_four_point(const LiouvilleParams& p, const FourPointSpec& spec) {
    require_probabilistic(p);
    const Admissibility a = admissibility(p, {spec.alpha0, spec.alphas[0], spec.alphas[1], spec.alphas[2]});
    if (!(a.s > 0.0) || !a.extended_ok)
        throw Error(Errc::InadmissibleWeights, "four-point weights need s > 0 and the extended Seiberg bounds");
    if (spec.alpha0 > 0.0) throw Error(Errc::InadmissibleWeights, "alpha0 must be non-positive");
}

}  // namespace

MCEstimate t_mc(const LiouvilleParams& p, const SphereEnsemble& ens, const FourPointSpec& spec,
                std::size_t n_samples, std::uint64_t seed, int threads) {
    check_four_point(p, spec);
    const double s = (spec.alpha0 + spec.alphas[0] + spec.alphas[1] + spec.alphas[2] - 2.0 * p.q) / p.gamma;
    const auto w = insertion_weights(ens, p.gamma, quadruple(spec, spec.z));
    const auto wc = insertion_weights(ens, p.gamma, quadruple(spec, std::conj(spec.z)));
    const auto rho = sample_rho(ens, {w, wc}, n_samples, seed, resolve_threads(threads));
    std::vector<double> v(n_samples);
    for (std::size_t i = 0; i < n_samples; ++i) v[i] = 0.5 * (std::pow(rho[0][i], -s) + std::pow(rho[1][i], -s));
    MCEstimate e = summarize(v, seed);
    const double scale = 2.0 * std::pow(p.mu, -s) / p.gamma * std::tgamma(s);
    e.value *= scale;
    e.std_error *= scale;
    e.diagnostics["s"] = s;
    e.diagnostics["cells"] = static_cast<double>(ens.size());
    return e;
}

MCEstimate t_mc(const LiouvilleParams& p, const FourPointSpec& spec, std::size_t n_samples, std::uint64_t seed,
                const SamplingOptions& opt) {
    check_four_point(p, spec);
    // alpha0 <= 0 needs no refinement site, so the grid only depends on 0, 1 and infinity.
    const SphereEnsemble ens = build_ensemble(
        opt.resolution, {{spec.alphas[0], cplx(0.0), false}, {spec.alphas[1], cplx(1.0), false},
                         insertion_at_infinity(spec.alphas[2])});
    return t_mc(p, ens, spec, n_samples, seed, opt.threads);
}

}  // namespace lcft
