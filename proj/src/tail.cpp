#include <algorithm>
#include <cmath>
#include <functional>

#include "lcft/cylinder.hpp"
#include "lcft/error.hpp"

namespace lcft {

namespace {

constexpr std::size_t kMinExceed = 100;
constexpr int kThresholds = 24;

struct Fit {
    double slope = 0.0;
    std::vector<double> thresholds;
    std::vector<std::size_t> counts;
};

// top: the largest values in decreasing order (at least n/10 + 1 of them).
Fit fit_top(const std::vector<double>& top, std::size_t n) {
    const std::size_t c_hi = n / 10;
    Fit fit;
    const double ratio = std::log(static_cast<double>(c_hi) / kMinExceed);
    std::size_t last_c = 0;
    for (int k = 0; k < kThresholds; ++k) {
        const auto c = static_cast<std::size_t>(
            std::lround(static_cast<double>(c_hi) * std::exp(-ratio * k / (kThresholds - 1))));
        if (c == last_c) continue;
        last_c = c;
        const double t = top[c];
        if (!fit.thresholds.empty() && t <= fit.thresholds.back()) continue;
        // Exceedances strictly above t.
        const auto count =
            static_cast<std::size_t>(std::lower_bound(top.begin(), top.end(), t, std::greater<>()) - top.begin());
        if (count == 0 || !(t > 0.0)) continue;
        fit.thresholds.push_back(t);
        fit.counts.push_back(count);
    }
    if (fit.thresholds.size() < 2) throw Error(Errc::WindowEmpty, "no spread of thresholds in the exceedance window");
    double mx = 0.0, my = 0.0;
    const double m = static_cast<double>(fit.thresholds.size());
    for (std::size_t i = 0; i < fit.thresholds.size(); ++i) {
        mx += std::log(fit.thresholds[i]);
        my += std::log(static_cast<double>(fit.counts[i]) / static_cast<double>(n));
    }
    mx /= m;
    my /= m;
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < fit.thresholds.size(); ++i) {
        const double dx = std::log(fit.thresholds[i]) - mx;
        sxy += dx * (std::log(static_cast<double>(fit.counts[i]) / static_cast<double>(n)) - my);
        sxx += dx * dx;
    }
    if (!(sxx > 0.0)) throw Error(Errc::WindowEmpty, "degenerate thresholds");
    fit.slope = sxy / sxx;
    return fit;
}

std::vector<double> top_values(std::vector<double> v, std::size_t keep) {
    keep = std::min(keep, v.size());
    std::partial_sort(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(keep), v.end(), std::greater<>());
    v.resize(keep);
    return v;
}

}  // namespace

TailFit tail_fit(const std::vector<double>& samples, double expected_slope_hint, std::uint64_t seed, int bootstrap) {
    const std::size_t n = samples.size();
    if (n / 10 < kMinExceed + 1) throw Error(Errc::WindowEmpty, "too few samples for the exceedance window");
    for (double x : samples)
        if (!std::isfinite(x)) throw Error(Errc::InvalidArgument, "non-finite sample");
    const std::size_t keep = n / 10 + 1;
    const auto top = top_values(samples, keep);
    const Fit fit = fit_top(top, n);

    TailFit out;
    out.n = n;
    out.slope = fit.slope;
    out.expected = expected_slope_hint;
    out.thresholds = fit.thresholds;
    out.n_exceed = fit.counts;
    out.window = {fit.thresholds.front(), fit.thresholds.back()};

    // Hill estimator on the top 1%, kept as a cross-check.
    const std::size_t k = std::max<std::size_t>(kMinExceed, n / 100);
    if (top[k] > 0.0) {
        double hill = 0.0;
        for (std::size_t i = 0; i < k; ++i) hill += std::log(top[i] / top[k]);
        out.hill_slope = -static_cast<double>(k) / hill;
    }

    if (bootstrap > 1) {
        Rng rng = sample_stream(seed, 0, 7);
        std::uniform_int_distribution<std::size_t> pick(0, n - 1);
        std::vector<double> slopes;
        std::vector<double> resample(n);
        for (int b = 0; b < bootstrap; ++b) {
            for (auto& x : resample) x = samples[pick(rng)];
            try {
                slopes.push_back(fit_top(top_values(resample, keep), n).slope);
            } catch (const Error&) {
                // A degenerate resample carries no slope information.
            }
        }
        double mean = 0.0;
        for (double s : slopes) mean += s;
        mean /= static_cast<double>(slopes.size());
        double var = 0.0;
        for (double s : slopes) var += (s - mean) * (s - mean);
        out.slope_err = slopes.size() > 1 ? std::sqrt(var / static_cast<double>(slopes.size() - 1)) : 0.0;
    }
    return out;
}

std::vector<std::pair<double, double>> survival_curve(const std::vector<double>& samples, std::size_t points) {
    std::vector<double> v = samples;
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    std::vector<std::pair<double, double>> out;
    if (n < 2 || points == 0) return out;
    const double span = std::log(static_cast<double>(n));
    for (std::size_t k = 0; k < points; ++k) {
        // Exceedance counts spaced geometrically from n - 1 down to 1.
        const double frac = points == 1 ? 0.0 : static_cast<double>(k) / static_cast<double>(points - 1);
        const auto c = static_cast<std::size_t>(std::lround(std::exp(span * (1.0 - frac))));
        const std::size_t idx = n - std::clamp<std::size_t>(c, 1, n - 1) - 1;
        const double t = v[idx];
        const auto above = static_cast<std::size_t>(v.end() - std::upper_bound(v.begin(), v.end(), t));
        if (above == 0) continue;
        const double s = static_cast<double>(above) / static_cast<double>(n);
        if (!out.empty() && (t <= out.back().first || s >= out.back().second)) continue;
        out.emplace_back(t, s);
    }
    return out;
}

}  // namespace lcft
