#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include "lcft/bpz.hpp"
#include "lcft/cli.hpp"
#include "lcft/cylinder.hpp"
#include "lcft/kpz.hpp"
#include "lcft/sphere.hpp"

namespace lcft::cli {

namespace {

constexpr int kGirsanovMaxCells = 256;

void take(ResultRecord& r, const MCEstimate& e) {
    r.value = e.value;
    r.std_error = e.std_error;
    r.n_samples = e.n_samples;
    r.seed = e.seed;
    for (const auto& [k, v] : e.diagnostics) r.diagnostics[k] = v;
}

void eval_upsilon(const RunConfig& cfg, ResultRecord& r) {
    const cplx z = cfg.zs[0];
    if (z.imag() == 0.0) {
        r.value = upsilon(z.real(), cfg.gamma);
        r.diagnostics["imag"] = 0.0;
    } else {
        const cplx u = upsilon(z, cfg.gamma);
        r.value = u.real();
        r.diagnostics["imag"] = u.imag();
    }
}

void mc_threepoint(const RunConfig& cfg, const LiouvilleParams& p, ResultRecord& r) {
    const SamplingOptions opt{cfg.grid_resolution, cfg.threads};
    const auto& a = cfg.alphas;
    if (cfg.zs.empty()) {
        take(r, structure_constant_estimate(p, a[0], a[1], a[2], cfg.n_samples, cfg.seed, opt));
        r.diagnostics["structure_constant"] = *r.value;
        r.diagnostics["structure_constant_err"] = *r.std_error;
    } else {
        std::vector<Insertion> ins;
        for (int k = 0; k < 3; ++k) ins.push_back({a[k], cfg.zs[k], false});
        take(r, correlation_estimate(p, ins, cfg.n_samples, cfg.seed, opt));
        const double pref = three_point_prefactor(p, {a[0], a[1], a[2]}, {cfg.zs[0], cfg.zs[1], cfg.zs[2]});
        r.diagnostics["structure_constant"] = *r.value / pref;
        r.diagnostics["structure_constant_err"] = *r.std_error / pref;
    }
    const double exact = dozz_c(p, a[0], a[1], a[2]);
    r.diagnostics["dozz"] = exact;
    r.diagnostics["relative_deviation"] = r.diagnostics["structure_constant"] / exact - 1.0;
}

void mc_fourpoint(const RunConfig& cfg, const LiouvilleParams& p, ResultRecord& r) {
    const double alpha0 = cfg.alpha0.value_or(-0.5 * p.gamma);
    const auto spec = make_four_point_spec(p, alpha0, {cfg.alphas[0], cfg.alphas[1], cfg.alphas[2]}, cfg.zs[0]);
    take(r, t_mc(p, spec, cfg.n_samples, cfg.seed, SamplingOptions{cfg.grid_resolution, cfg.threads}));
    r.diagnostics["alpha0"] = alpha0;
    try {
        r.diagnostics["t_bpz"] = t_bpz(p, spec);
    } catch (const Error&) {
        // Outside the hypergeometric disc or off the degenerate weights: no closed form to compare.
    }
}

void tail(const RunConfig& cfg, const LiouvilleParams& p, ResultRecord& r) {
    const double alpha = cfg.alphas[0];
    const auto samples = sample_i_alpha_many(p, alpha, cfg.n_samples, cfg.seed, {}, cfg.threads);
    const TailFit fit = tail_fit(samples, -2.0 * (p.q - alpha) / p.gamma, cfg.seed);
    r.value = fit.slope;
    r.std_error = fit.slope_err;
    r.n_samples = fit.n;
    r.seed = cfg.seed;
    r.diagnostics["expected"] = fit.expected;
    r.diagnostics["window_lo"] = fit.window.first;
    r.diagnostics["window_hi"] = fit.window.second;
    r.diagnostics["hill_slope"] = fit.hill_slope;
    r.diagnostics["thresholds"] = static_cast<double>(fit.thresholds.size());
    r.survival = survival_curve(samples, cfg.points);
}

void rbar(const RunConfig& cfg, const LiouvilleParams& p, ResultRecord& r) {
    const double alpha = cfg.alphas[0];
    take(r, rbar_estimate(p, alpha, cfg.n_samples, cfg.seed, {}, cfg.threads));
    const double unit = full_reflection(p, alpha, 1.0);
    r.diagnostics["full_reflection"] = unit * *r.value;
    r.diagnostics["full_reflection_err"] = std::abs(unit) * *r.std_error;
    r.diagnostics["reflection_dozz"] = reflection_dozz(p, alpha);
}

void verify(const RunConfig& cfg, const LiouvilleParams& p, ResultRecord& r) {
    constexpr Identity kAll[] = {Identity::GammaShift,     Identity::DualShift, Identity::ReflectionGamma,
                                 Identity::ReflectionDual, Identity::Crossing,  Identity::DozzShift};
    double worst = 0.0;
    int failures = 0;
    for (std::size_t k = 0; k + 2 < cfg.alphas.size(); k += 3) {
        const std::array<double, 3> a = {cfg.alphas[k], cfg.alphas[k + 1], cfg.alphas[k + 2]};
        for (Identity id : kAll) {
            double res = std::numeric_limits<double>::quiet_NaN();
            try {
                res = shift_residual(p, a, id);
                worst = std::max(worst, res);
            } catch (const Error&) {
                ++failures;
            }
            r.table.push_back({identity_name(id), {a.begin(), a.end()}, res});
        }
    }
    r.value = worst;
    r.diagnostics["failures"] = failures;
}

void kpz(const RunConfig& cfg, ResultRecord& r) {
    const double gamma = cfg.central_charge ? gamma_from_central_charge(*cfg.central_charge) : cfg.gamma;
    const auto p = make_params(gamma, cfg.mu);
    const KpzSolution s = solve_kpz(p, cfg.delta_sigma.value_or(0.0));
    r.gamma = gamma;
    r.value = s.alpha;
    r.diagnostics["gamma"] = s.gamma;
    r.diagnostics["q"] = p.q;
    r.diagnostics["c_matter"] = s.c_matter;
    r.diagnostics["delta_sigma"] = s.delta_sigma;
    r.diagnostics["delta_alpha"] = s.delta_alpha;
}

void df(const RunConfig& cfg, const LiouvilleParams& p, ResultRecord& r) {
    const DfCheck d = df_check(p, cfg.alphas[0], cfg.alphas[1]);
    r.value = d.quadrature;
    r.diagnostics["closed_form"] = d.closed_form;
    r.diagnostics["a3"] = d.a3;
    r.diagnostics["relative_error"] = std::abs(d.quadrature / d.closed_form - 1.0);
}

// Largest bare ensemble within both the configured resolution and the cell cap.
SphereEnsemble girsanov_ensemble(int max_resolution) {
    SphereEnsemble best = build_ensemble(2, {});
    for (int res = 3; res <= max_resolution; ++res) {
        SphereEnsemble next = build_ensemble(res, {});
        if (next.size() > kGirsanovMaxCells) break;
        best = std::move(next);
    }
    return best;
}

void girsanov(const RunConfig& cfg, const LiouvilleParams& p, ResultRecord& r) {
    require_probabilistic(p);
    const SphereEnsemble ens = girsanov_ensemble(cfg.grid_resolution);
    double worst = 0.0;
    for (const auto& pair : standard_girsanov_pairs(ens)) {
        const GirsanovResult g = girsanov_residual(ens, p.gamma, pair.f, pair.obs, cfg.n_samples, cfg.seed, cfg.threads);
        const double z = g.diff_err > 0.0 ? std::abs(g.lhs - g.rhs) / g.diff_err : 0.0;
        worst = std::max(worst, z);
        r.diagnostics[pair.name + "_lhs"] = g.lhs;
        r.diagnostics[pair.name + "_rhs"] = g.rhs;
        r.diagnostics[pair.name + "_z"] = z;
    }
    r.value = worst;
    r.n_samples = cfg.n_samples;
    r.seed = cfg.seed;
    r.diagnostics["cells"] = static_cast<double>(ens.size());
}

void dispatch(const RunConfig& cfg, ResultRecord& r) {
    if (cfg.command == Command::Kpz) return kpz(cfg, r);
    const LiouvilleParams p = make_params(cfg.gamma, cfg.mu);
    const auto& a = cfg.alphas;
    switch (cfg.command) {
        case Command::EvalDozz:
            r.value = dozz_c(p, a[0], a[1], a[2]);
            break;
        case Command::EvalUpsilon:
            eval_upsilon(cfg, r);
            break;
        case Command::Reflection:
            r.value = reflection_dozz(p, a[0]);
            r.diagnostics["two_point_limit"] = two_point_limit(p, a[0]);
            break;
        case Command::McThreepoint:
            mc_threepoint(cfg, p, r);
            break;
        case Command::McFourpoint:
            mc_fourpoint(cfg, p, r);
            break;
        case Command::Tail:
            tail(cfg, p, r);
            break;
        case Command::Rbar:
            rbar(cfg, p, r);
            break;
        case Command::Verify:
            verify(cfg, p, r);
            break;
        case Command::DfCheck:
            df(cfg, p, r);
            break;
        case Command::Girsanov:
            girsanov(cfg, p, r);
            break;
        case Command::Kpz:
            break;
    }
}

}  // namespace

const char* version() noexcept { return LCFT_VERSION; }

ResultRecord execute(const RunConfig& cfg) {
    const auto start = std::chrono::steady_clock::now();
    ResultRecord r;
    r.command = command_name(cfg.command);
    r.gamma = cfg.gamma;
    r.mu = cfg.mu;
    r.alphas = cfg.alphas;
    r.zs = cfg.zs;
    r.version = version();
    try {
        dispatch(cfg, r);
    } catch (const Error& e) {
        // what() carries a "Code: " prefix already stored in `code`.
        std::string msg = e.what();
        const std::string prefix = std::string(errc_name(e.code())) + ": ";
        if (msg.rfind(prefix, 0) == 0) msg.erase(0, prefix.size());
        r.error = ErrorRecord{errc_name(e.code()), msg};
    } catch (const std::exception& e) {
        r.error = ErrorRecord{"InternalError", e.what()};
    }
    if (r.error) {
        r.value.reset();
        r.std_error.reset();
        r.diagnostics.clear();
        r.survival.clear();
        r.table.clear();
    }
    r.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return r;
}

int exit_code(Errc c) noexcept {
    switch (c) {
        case Errc::QuadratureFailure:
        case Errc::ShiftPoleFailure:
        case Errc::FactorizationFailure:
        case Errc::TooManyCells:
        case Errc::HorizonTooShort:
        case Errc::StepTooCoarse:
        case Errc::WindowEmpty:
        case Errc::IoError:
            return 1;
        default:
            return 2;
    }
}

int exit_code(const ResultRecord& r) noexcept {
    if (!r.error) return 0;
    for (int k = 0; k <= static_cast<int>(Errc::IoError); ++k) {
        const auto c = static_cast<Errc>(k);
        if (r.error->code == errc_name(c)) return exit_code(c);
    }
    return 1;
}

}  // namespace lcft::cli
