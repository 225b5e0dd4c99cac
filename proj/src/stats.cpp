#include <algorithm>
#include <cmath>

#include "lcft/mc.hpp"

namespace lcft {

MCEstimate summarize(const std::vector<double>& values, std::uint64_t seed) {
    MCEstimate e;
    e.seed = seed;
    e.n_samples = values.size();
    if (values.empty()) return e;
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    e.value = mean;
    e.std_error = values.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
    return e;
}

MCEstimate self_normalized(const std::vector<double>& f, const std::vector<double>& w, std::uint64_t seed) {
    MCEstimate e;
    e.seed = seed;
    e.n_samples = f.size();
    double sw = 0.0, swf = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        sw += w[i];
        swf += w[i] * f[i];
    }
    if (sw <= 0.0) return e;
    e.value = swf / sw;
    double var = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double d = w[i] * (f[i] - e.value);
        var += d * d;
    }
    e.std_error = std::sqrt(var) / sw;
    e.diagnostics["ess"] = effective_sample_size(w);
    return e;
}

double effective_sample_size(const std::vector<double>& w) {
    double s = 0.0, s2 = 0.0;
    for (double x : w) {
        s += x;
        s2 += x * x;
    }
    return s2 > 0.0 ? s * s / s2 : 0.0;
}

double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf) {
    std::sort(samples.begin(), samples.end());
    const double n = static_cast<double>(samples.size());
    double d = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const double f = cdf(samples[i]);
        d = std::max({d, static_cast<double>(i + 1) / n - f, f - static_cast<double>(i) / n});
    }
    return d;
}

}  // namespace lcft
