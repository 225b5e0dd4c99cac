#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include <boost/random/normal_distribution.hpp>

namespace lcft {

inline constexpr std::uint64_t kDefaultSeed = 0xD022;

// Monte Carlo result. std_error is the standard error of the mean.
struct MCEstimate {
    double value = 0.0;
    double std_error = 0.0;
    std::uint64_t n_samples = 0;
    std::uint64_t seed = kDefaultSeed;
    std::map<std::string, double> diagnostics;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

using Rng = std::mt19937_64;

// Independent stream for sample `index`; `lane` separates streams used for
// different purposes within one sample.
Rng sample_stream(std::uint64_t seed, std::uint64_t index, std::uint64_t lane = 0);

class NormalSource {
public:
    explicit NormalSource(Rng rng) : rng_(std::move(rng)) {}
    double operator()() { return dist_(rng_); }
    double uniform() { return std::uniform_real_distribution<double>(0.0, 1.0)(rng_); }
    // Uniform on (0, 1], safe for logarithms.
    double uniform_open() { return 1.0 - uniform(); }
    Rng& engine() { return rng_; }

private:
    Rng rng_;
    boost::random::normal_distribution<double> dist_;
};

// 0 means: LCFT_THREADS if set, else hardware concurrency.
int resolve_threads(int hint);

// Runs body(batch, begin, end) over [0, n) cut into fixed-size batches. The
// partition does not depend on the thread count; the first exception (by
// batch index) is rethrown.
void parallel_batches(std::size_t n, std::size_t batch_size, int threads,
                      const std::function<void(std::size_t, std::size_t, std::size_t)>& body);

// Sequential mean and standard error of the mean.
MCEstimate summarize(const std::vector<double>& values, std::uint64_t seed);

// sum(w f)/sum(w) with the delta-method standard error; reports "ess".
MCEstimate self_normalized(const std::vector<double>& f, const std::vector<double>& w, std::uint64_t seed);

double effective_sample_size(const std::vector<double>& w);

// Two-sided one-sample Kolmogorov-Smirnov statistic.
double ks_statistic(std::vector<double> samples, const std::function<double(double)>& cdf);

// Asymptotic critical value of sqrt(n) D at level 0.01.
inline constexpr double kKsCritical01 = 1.6276;

}  // namespace lcft
