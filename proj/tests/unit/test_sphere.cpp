#include "doctest.h"

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>

#include "lcft/sphere.hpp"

using namespace lcft;

namespace {

constexpr double kPi = std::numbers::pi;

// tests/oracle/probabilistic_oracle.py
constexpr double kDfPlane1515 = 27.5007432720642183;
constexpr double kDfPlane1214 = 24.8544134912596263;
constexpr double kCircleVar105 = 2.42144283872061694;
constexpr double kCircleVar07075 = 1.76184742115437507;

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

std::vector<Insertion> triple(double a1, double a2, double a3) {
    return {{a1, cplx(0.0), false}, {a2, cplx(1.0), false}, insertion_at_infinity(a3)};
}

double total_area(const SphereEnsemble& e) { return std::accumulate(e.areas.begin(), e.areas.end(), 0.0); }

double joint_sigma(const MCEstimate& a, const MCEstimate& b) { return std::hypot(a.std_error, b.std_error); }

}  // namespace

TEST_CASE("cell masses integrate the metric over the sphere") {
    const auto bare = build_ensemble(64, {});
    CHECK(rel(total_area(bare), 2.0 * kPi) <= 1e-3);
    const auto ens = build_ensemble(16, triple(1.8, 1.8, 1.8));
    CHECK(rel(total_area(ens), 2.0 * kPi) <= 1e-3);
    for (std::size_t i = 0; i < ens.size(); ++i) {
        CHECK(ens.areas[i] > 0.0);
        CHECK(ens.eps[i] > 0.0);
    }
}

TEST_CASE("ensemble construction is deterministic and refines at insertions") {
    const auto a = build_ensemble(10, triple(1.5, 1.6, 1.7));
    const auto b = build_ensemble(10, triple(1.5, 1.6, 1.7));
    REQUIRE(a.size() == b.size());
    CHECK(a.points == b.points);
    CHECK(a.areas == b.areas);
    CHECK(a.eps == b.eps);
    CHECK(a.cov_factor == b.cov_factor);
    for (cplx z : {cplx(0.0), cplx(1.0)}) {
        double nearest = 1e9;
        for (std::size_t i = 0; i < a.size(); ++i)
            if (a.charts[i] == Chart::Inner) nearest = std::min(nearest, std::abs(a.points[i] - z));
        CHECK(nearest <= 1.0 / (10.0 * 10.0));
    }
    CHECK(a.sites.size() == 3);
}

TEST_CASE("invalid ensembles are rejected") {
    CHECK_THROWS_AS(build_ensemble(1, {}), Error);
    CHECK_THROWS_AS(build_ensemble(8, {{1.0, cplx(0.5), false}, {1.2, cplx(0.5), false}}), Error);
    EnsembleOptions small;
    small.max_cells = 100;
    try {
        (void)build_ensemble(16, {}, small);
        FAIL("expected TooManyCells");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::TooManyCells);
    }
}

TEST_CASE("covariance of disjoint circles equals the kernel at the centres") {
    const cplx x(0.2, 0.0), y(-0.3, 0.1);
    CHECK(std::abs(circle_covariance(Chart::Inner, x, 0.05, Chart::Inner, y, 0.04) + std::log(std::abs(x - y))) <=
          1e-12);
    const cplx u(1.5, 0.2), v(-0.4, 0.0);
    const double k_uv = -std::log(std::abs(u - v)) + std::log(std::abs(u));
    CHECK(std::abs(circle_covariance(Chart::Inner, u, 0.1, Chart::Inner, v, 0.1) - k_uv) <= 1e-12);
    // Outer chart point w = 0.5 is x = 2.
    const double k_cross = -std::log(std::abs(1.0 - 0.3 * 0.5));
    CHECK(std::abs(circle_covariance(Chart::Inner, cplx(0.3), 0.05, Chart::Outer, cplx(0.5), 0.1) - k_cross) <=
          1e-12);
    CHECK(std::abs(circle_covariance(Chart::Outer, cplx(0.5), 0.1, Chart::Inner, cplx(0.3), 0.05) - k_cross) <=
          1e-12);
}

TEST_CASE("circle variance matches the quadrature oracle") {
    CHECK(rel(circle_covariance(Chart::Inner, 1.05, 0.1, Chart::Inner, 1.05, 0.1), kCircleVar105) <= 1e-10);
    const cplx c(0.7, 0.75);
    CHECK(rel(circle_covariance(Chart::Inner, c, 0.2, Chart::Inner, c, 0.2), kCircleVar07075) <= 1e-10);
    // Inside the unit disk the variance is ln(1/eps).
    CHECK(std::abs(circle_covariance(Chart::Inner, 0.3, 0.01, Chart::Inner, 0.3, 0.01) + std::log(0.01)) <= 1e-13);
}

TEST_CASE("covariance factorization reproduces the matrix") {
    const auto ens = build_ensemble(16, triple(1.8, 1.8, 1.8));
    const std::size_t n = ens.size();
    CHECK(factorization_residual(ens, {0, 1, 17, n / 3, n / 2, n - 2, n - 1}) <= 1e-8);
    for (std::size_t i : {std::size_t{0}, n / 2, n - 1}) CHECK(ens.covariance(i, i) == ens.diag_var[i]);
    CHECK(ens.covariance(3, n - 4) == ens.covariance(n - 4, 3));
}

TEST_CASE("sampled fields have the prescribed covariance") {
    const auto ens = build_ensemble(6, {});
    const std::size_t n = ens.size(), m = 20000;
    const std::size_t i = 0, j = n / 2;
    Eigen::MatrixXd f(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    sample_fields(ens, 17, 0, f);
    const Eigen::Index ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
    const double cii = ens.covariance(i, i), cjj = ens.covariance(j, j), cij = ens.covariance(i, j);
    CHECK(std::abs(f.row(ii).mean()) <= 4.0 * std::sqrt(cii / m));
    const double sij = f.row(ii).dot(f.row(jj)) / m;
    CHECK(std::abs(sij - cij) <= 4.0 * std::sqrt((cii * cjj + cij * cij) / m));
    const double sii = f.row(ii).squaredNorm() / m;
    CHECK(std::abs(sii - cii) <= 4.0 * std::sqrt(2.0 * cii * cii / m));
    // Column k of a batch equals the single draw k.
    CHECK(sample_field(ens, 17, 5) == f.col(5));
}

TEST_CASE("chaos weights: small gamma and normalization") {
    const auto ens = build_ensemble(8, {});
    const Eigen::VectorXd x = sample_field(ens, 3, 0);
    const auto m = gmc_weights(x, ens, 1e-200);
    CHECK(m.weights == ens.areas);
    CHECK_THROWS_AS(gmc_weights(x, ens, 2.0), Error);

    const std::size_t n = 10000;
    const auto w = insertion_weights(ens, 1.0, {});
    const auto rho = sample_rho(ens, {w}, n, 5, 1);
    const auto est = summarize(rho[0], 5);
    CHECK(std::abs(est.value - total_area(ens)) <= 3.0 * est.std_error);
}

TEST_CASE("high moments of the total mass fail to stabilize") {
    const auto ens = build_ensemble(8, {});
    const auto w = insertion_weights(ens, 1.0, {});
    const auto rho = sample_rho(ens, {w}, 40000, 9, 1)[0];
    const std::vector<std::size_t> sizes{2500, 5000, 10000, 20000, 40000};
    const auto low = moment_curve(rho, 1.0, sizes);
    const auto high = moment_curve(rho, 4.5, sizes);
    CHECK(rel(low.moments.front(), low.moments.back()) <= 0.05);
    const double drift_low = std::abs(std::log(low.moments.back() / low.moments.front()));
    const double drift_high = std::abs(std::log(high.moments.back() / high.moments.front()));
    CHECK(drift_high > 10.0 * drift_low);
}

TEST_CASE("rho matches a direct re-summation over quadrature nodes") {
    const auto ins = triple(1.8, 1.8, 1.8);
    const auto ens = build_ensemble(10, ins);
    const double g = 1.0;
    const auto m = gmc_weights(sample_field(ens, 21, 0), ens, g);
    double direct = 0.0;
    for (std::size_t i = 0; i < ens.size(); ++i) {
        double fg = 0.0;
        for (std::uint32_t k = ens.sub_begin[i]; k < ens.sub_begin[i + 1]; ++k) {
            const auto& s = ens.subsamples[k];
            const cplx x = ens.charts[i] == Chart::Inner ? s.w : 1.0 / s.w;
            const double lplus = std::max(0.0, std::log(std::abs(x)));
            const double lf = g * (5.4 * lplus - 1.8 * std::log(std::abs(x)) - 1.8 * std::log(std::abs(x - 1.0)));
            fg += s.mass * std::exp(lf);
        }
        direct += m.weights[i] / ens.areas[i] * fg;
    }
    CHECK(rel(rho_n_point(m, ens, ins), direct) <= 1e-9);
    CHECK_THROWS_AS(insertion_weights(ens, g, {{1.0, cplx(0.5), false}}), Error);
    // Non-positive weights need no refinement site.
    CHECK_NOTHROW(insertion_weights(ens, g, {{-0.5, cplx(0.5), false}}));
}

TEST_CASE("admissibility bounds") {
    const auto p = make_params(1.0, 1.0);
    const auto a = admissibility(p, {1.8, 1.8, 1.8});
    CHECK(std::abs(a.s - 0.4) <= 1e-14);
    CHECK(a.seiberg_ok);
    CHECK(a.extended_ok);
    CHECK_FALSE(admissibility(p, {2.5, 1.0, 1.0}).extended_ok);
    CHECK_FALSE(admissibility(p, {2.6, 1.9, 1.9}).extended_ok);
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> u(-1.0, 2.5);
    for (int i = 0; i < 200; ++i) CHECK_FALSE(admissibility(p, {u(rng), u(rng)}).extended_ok);
    // Below the Seiberg line but within the extended bounds.
    const auto b = admissibility(p, {1.2, 1.2, 1.2});
    CHECK(b.extended_ok);
    CHECK_FALSE(b.seiberg_ok);
}

TEST_CASE("correlation argument errors") {
    const auto p = make_params(1.0, 1.0);
    const auto ens = build_ensemble(6, triple(1.3, 1.3, 1.4));
    try {
        (void)structure_constant_estimate(p, ens, 1.3, 1.3, 1.4, 10, 1, 1);
        FAIL("expected GammaPole");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::GammaPole);
    }
    try {
        (void)structure_constant_estimate(p, ens, 2.6, 1.3, 1.4, 10, 1, 1);
        FAIL("expected InadmissibleWeights");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InadmissibleWeights);
    }
    CHECK_THROWS_AS(structure_constant_estimate(make_params(2.5, 1.0), 1.0, 1.0, 1.0, 10, 1), Error);
}

TEST_CASE("structure constant estimate: mu scaling, permutation and closed form") {
    const auto p = make_params(1.0, 1.0);
    const auto ens = build_ensemble(12, triple(1.5, 1.8, 1.9));
    const auto e1 = structure_constant_estimate(p, ens, 1.5, 1.8, 1.9, 20000, 4, 1);
    const auto e2 = structure_constant_estimate(make_params(1.0, 2.0), ens, 1.5, 1.8, 1.9, 20000, 4, 1);
    const double s = e1.diagnostics.at("s");
    CHECK(rel(e2.value, e1.value * std::pow(2.0, -s)) <= 1e-12);
    const auto e3 = structure_constant_estimate(p, ens, 1.9, 1.5, 1.8, 20000, 4, 1);
    CHECK(std::abs(e1.value - e3.value) <= 3.0 * joint_sigma(e1, e3));
    const double exact = dozz_c(p, 1.5, 1.8, 1.9);
    CHECK(std::abs(e1.value - exact) <= std::max(3.0 * e1.std_error, 0.1 * exact));
    CHECK(e1.diagnostics.at("cells") == static_cast<double>(ens.size()));
}

TEST_CASE("estimate follows the Gamma(s) pole as s decreases") {
    const auto p = make_params(1.0, 1.0);
    const auto ens = build_ensemble(10, triple(1.65, 1.65, 1.72));
    const auto e = structure_constant_estimate(p, ens, 1.65, 1.65, 1.72, 20000, 8, 1);
    CHECK(e.diagnostics.at("s") == doctest::Approx(0.02).epsilon(1e-12));
    CHECK(e.value > 20.0);
    CHECK(rel(e.value, dozz_c(p, 1.65, 1.65, 1.72)) <= 0.05);
}

TEST_CASE("three-point function scales with the conformal prefactor") {
    const auto p = make_params(1.0, 1.0);
    const std::array<double, 3> a{1.7, 1.8, 1.9};
    std::vector<MCEstimate> scaled;
    for (double z3 : {2.0, 5.0}) {
        const std::vector<Insertion> ins{{a[0], cplx(0.0), false}, {a[1], cplx(1.0), false}, {a[2], cplx(z3), false}};
        auto e = correlation_estimate(p, ins, 20000, 6, SamplingOptions{12, 1, 32});
        const double pref = three_point_prefactor(p, a, {cplx(0.0), cplx(1.0), cplx(z3)});
        e.value /= pref;
        e.std_error /= pref;
        scaled.push_back(e);
    }
    CHECK(std::abs(scaled[0].value - scaled[1].value) <= 3.0 * joint_sigma(scaled[0], scaled[1]));
}

TEST_CASE("Girsanov identity on a small ensemble") {
    const auto ens = build_ensemble(8, {});
    REQUIRE(ens.size() <= 256);
    const std::size_t n = ens.size();
    const double g = 1.0;
    std::vector<double> f(n, 0.0);
    f[3] = 1.0;
    f[n / 2] = 0.5;
    double sum_fa = 0.0;
    for (std::size_t i = 0; i < n; ++i) sum_fa += f[i] * ens.areas[i];

    const auto one = girsanov_residual(ens, g, f, [](const Eigen::VectorXd&) { return 1.0; }, 20000, 2, 1);
    CHECK(std::abs(one.rhs - sum_fa) <= 1e-12 * sum_fa);
    CHECK(std::abs(one.lhs - sum_fa) <= 3.0 * one.lhs_err);

    // F = exp(c . X): both sides equal sum_i f_i area_i exp(c^T C c / 2 + gamma (C c)_i).
    Eigen::VectorXd c = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n));
    c(1) = 0.3;
    c(static_cast<Eigen::Index>(n / 2)) = -0.2;
    Eigen::MatrixXd cov(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) cov(i, j) = ens.covariance(i, j);
    const Eigen::VectorXd cc = cov * c;
    double exact = 0.0;
    for (std::size_t i = 0; i < n; ++i) exact += f[i] * ens.areas[i] * std::exp(0.5 * c.dot(cc) + g * cc(i));
    const auto lin = girsanov_residual(ens, g, f, [&](const Eigen::VectorXd& x) { return std::exp(c.dot(x)); },
                                       20000, 2, 1);
    CHECK(std::abs(lin.lhs - lin.rhs) <= 3.0 * lin.diff_err);
    CHECK(std::abs(lin.lhs - exact) <= 3.0 * lin.lhs_err);
    CHECK(std::abs(lin.rhs - exact) <= 3.0 * lin.rhs_err);

    // One-cell support: rhs is a single shifted expectation.
    std::vector<double> single(n, 0.0);
    single[5] = 2.0;
    const auto obs = [&](const Eigen::VectorXd& x) { return std::tanh(x(0)) + 1.0; };
    const auto r = girsanov_residual(ens, g, single, obs, 20000, 2, 1);
    double shifted = 0.0;
    for (std::uint64_t k = 0; k < 20000; ++k) {
        const Eigen::VectorXd x = sample_field(ens, 2, k);
        shifted += std::tanh(x(0) + g * ens.covariance(0, 5)) + 1.0;
    }
    CHECK(rel(r.rhs, 2.0 * ens.areas[5] * shifted / 20000.0) <= 1e-9);
    CHECK(std::abs(r.lhs - r.rhs) <= 3.0 * r.diff_err);

    CHECK_THROWS_AS(girsanov_residual(build_ensemble(16, {}), g, std::vector<double>(1, 0.0), obs, 10, 1, 1), Error);
}

TEST_CASE("Dotsenko-Fateev integral against its closed form") {
    const auto p = make_params(1.0, 1.0);
    const auto d = df_check(p, 1.5, 1.5);
    CHECK(d.a3 == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(rel(d.quadrature, kDfPlane1515) <= 1e-8);
    CHECK(rel(d.closed_form, kDfPlane1515) <= 1e-10);
    const auto d2 = df_check(p, 1.2, 1.4);
    CHECK(rel(d2.quadrature, kDfPlane1214) <= 1e-8);
    CHECK(rel(d2.closed_form, kDfPlane1214) <= 1e-8);
    // x -> 1 - x exchanges a1 and a2.
    CHECK(rel(df_check(p, 1.4, 1.2).quadrature, d2.quadrature) <= 1e-9);
    try {
        (void)df_check(p, 2.1, 1.5);
        FAIL("expected NonIntegrable");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::NonIntegrable);
    }
    const auto r = df_residue_check(p, 1.5, 1.5);
    CHECK(rel(r.limit, r.expected) <= 1e-4);
}

TEST_CASE("Liouville volume form") {
    const auto p = make_params(1.5, 1.0);
    const double shape = (3.0 * p.gamma - 2.0 * p.q) / p.gamma;
    const auto ens = build_ensemble(8, triple(1.5, 1.5, 1.5));
    const auto unit = liouville_measure_expectation(
        p, ens, [](double, const std::vector<double>&, const SphereEnsemble&) { return 1.0; }, 4000, 3, 1);
    CHECK(unit.value == doctest::Approx(1.0).epsilon(1e-14));
    const auto xi = liouville_measure_expectation(
        p, ens, [](double x, const std::vector<double>&, const SphereEnsemble&) { return x; }, 4000, 3, 1);
    CHECK(unit.diagnostics.at("shape") == doctest::Approx(shape).epsilon(1e-14));
    CHECK(std::abs(xi.value - shape / p.mu) <= 3.0 * xi.std_error);
    const auto disk = [](double, const std::vector<double>& w, const SphereEnsemble& e) {
        double m = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i)
            if (std::abs(e.plane_point(i)) < 1.0) m += w[i];
        return m;
    };
    const auto d1 = liouville_measure_expectation(p, ens, disk, 4000, 3, 1);
    const auto d2 = liouville_measure_expectation(p, ens, disk, 4000, 4, 1);
    CHECK(d1.value > 0.0);
    CHECK(d1.value < 1.0);
    CHECK(std::abs(d1.value - d2.value) <= 3.0 * joint_sigma(d1, d2));
    CHECK_THROWS_AS(liouville_measure_expectation(make_params(1.0, 1.0), ens, disk, 10, 1), Error);
}
