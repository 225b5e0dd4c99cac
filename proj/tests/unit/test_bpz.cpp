#include "doctest.h"

#include <cmath>
#include <random>

#include "lcft/bpz.hpp"

using namespace lcft;

namespace {

// mpmath references (tests/oracle/closed_form_oracle.py).
constexpr double kAGamma = -0.0602739465199758;
constexpr double kTbpz02 = 4.2377529425125661711;
constexpr double kTbpz03p01i = 4.2240060503182553811;
constexpr double kHypRe = 0.7671525541860109374;
constexpr double kHypIm = -0.21798667620408675248;

const std::array<double, 3> kStd = {1.9, 1.9, 1.9};

}  // namespace

TEST_CASE("hyp2f1 series") {
    CHECK(hyp2f1(0.3, 0.4, 0.5, 0.0) == cplx(1.0));
    for (cplx z : {cplx(0.3, 0.0), cplx(-0.6, 0.2), cplx(0.1, 0.69), cplx(0.7, 0.0)}) {
        const cplx ref = -std::log(1.0 - z) / z;
        CHECK(std::abs(hyp2f1(1.0, 1.0, 2.0, z) - ref) <= 1e-12);
        CHECK(std::abs(hyp2f1(0.3, -1.7, 0.45, z) - hyp2f1(-1.7, 0.3, 0.45, z)) <= 1e-14);
    }
    const cplx h = hyp2f1(0.3, -0.7, 0.45, cplx(0.5, 0.4));
    CHECK(std::abs(h - cplx(kHypRe, kHypIm)) <= 1e-12);
    // Terminating series.
    CHECK(std::abs(hyp2f1(-2.0, 1.0, 1.0, cplx(0.5)) - 0.25) <= 1e-15);
    try {
        (void)hyp2f1(1.0, 1.0, -2.0, 0.1);
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::DegenerateC);
    }
    try {
        (void)hyp2f1(1.0, 1.0, 2.0, cplx(0.6, 0.6));
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::DomainExceeded);
    }
}

TEST_CASE("BPZ coefficients") {
    const auto p = make_params(1.0, 1.0);
    auto k = bpz_coefficients(p, -0.5, {1.8, 1.9, 1.9});
    CHECK(k.c == doctest::Approx(0.65).epsilon(1e-15));
    k = bpz_coefficients(p, -0.5, kStd);
    CHECK(k.a == doctest::Approx(0.05).epsilon(1e-14));
    CHECK(k.b == doctest::Approx(0.35).epsilon(1e-14));
    CHECK(k.c == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(std::abs(k.a_gamma / kAGamma - 1.0) < 1e-12);

    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        const double g = 0.5 + 1.4 * u(rng);
        const auto pp = make_params(g, 1.0);
        const std::array<double, 3> al = {pp.q * (0.3 + 0.6 * u(rng)), pp.q * (0.6 + 0.35 * u(rng)),
                                          pp.q * (0.6 + 0.35 * u(rng))};
        try {
            const auto kk = bpz_coefficients(pp, -g / 2.0, al);
            CHECK(std::abs(2.0 * (1.0 - kk.c) - g * (pp.q - al[0])) <= 1e-12);
            CHECK(std::isfinite(kk.a_gamma));
        } catch (const Error& e) {
            CHECK(e.code() == Errc::IntegerDegeneracy);
        }
    }
    // Sign-definite near the standard quadruple.
    for (double d1 : {-0.05, 0.0, 0.05})
        for (double d2 : {-0.05, 0.0, 0.05}) {
            const auto kk = bpz_coefficients(p, -0.5, {1.9 + d1, 1.9 + d2, 1.9});
            CHECK(kk.a_gamma < 0.0);
        }
    CHECK_THROWS_AS(bpz_coefficients(p, -0.7, kStd), Error);
    try {
        (void)bpz_coefficients(p, -0.5, {0.5, 1.9, 1.9});  // c = 0
        FAIL("expected error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::IntegerDegeneracy);
    }
}

TEST_CASE("t_bpz reference values and small-z behaviour") {
    const auto p = make_params(1.0, 1.0);
    const double lambda = dozz_c(p, 1.4, 1.9, 1.9);
    CHECK(t_bpz(p, make_four_point_spec(p, -0.5, kStd, 0.0)) == doctest::Approx(lambda).epsilon(1e-14));
    CHECK(std::abs(t_bpz(p, make_four_point_spec(p, -0.5, kStd, 0.2)) / kTbpz02 - 1.0) < 1e-11);
    const double t1 = t_bpz(p, make_four_point_spec(p, -0.5, kStd, cplx(0.3, 0.1)));
    CHECK(std::abs(t1 / kTbpz03p01i - 1.0) < 1e-11);
    CHECK(t_bpz(p, make_four_point_spec(p, -0.5, kStd, cplx(0.3, -0.1))) == doctest::Approx(t1).epsilon(1e-14));

    const auto k = bpz_coefficients(p, -0.5, kStd);
    const double expected = std::min(2.0 * (1.0 - k.c), 2.0);
    const double zs[3] = {1e-4, 1e-5, 1e-6};
    double dev[3];
    for (int i = 0; i < 3; ++i) dev[i] = std::abs(t_bpz(p, make_four_point_spec(p, -0.5, kStd, zs[i])) - lambda);
    for (int i = 0; i < 2; ++i) {
        const double slope = std::log(dev[i] / dev[i + 1]) / std::log(zs[i] / zs[i + 1]);
        CHECK(std::abs(slope - expected) < 0.02);
    }
    CHECK(make_four_point_spec(p, -0.5, kStd, 0.2).s == doctest::Approx(0.2).epsilon(1e-14));
}

TEST_CASE("shift and crossing residuals at the documented points") {
    const auto p = make_params(1.0, 1.0);
    CHECK(shift_residual(p, {1.8, 1.7, 1.9}, Identity::GammaShift) <= 1e-8);
    CHECK(shift_residual(p, kStd, Identity::Crossing) <= 1e-8);
    CHECK(shift_residual(p, {1.3, 0.0, 0.0}, Identity::ReflectionGamma) <= 1e-8);
    CHECK(shift_residual(p, {1.3, 1.7, 1.9}, Identity::DozzShift) <= 1e-8);
    // gamma = 1 has an infinite dual constant.
    CHECK_THROWS_AS((void)shift_residual(p, {1.3, 1.7, 1.9}, Identity::DualShift), Error);
    const auto p2 = make_params(1.1, 1.0);
    CHECK(shift_residual(p2, {1.3, 1.7, 1.9}, Identity::DualShift) <= 1e-8);
    CHECK(shift_residual(p2, {1.3, 0.0, 0.0}, Identity::ReflectionDual) <= 1e-8);
    for (Identity id : {Identity::GammaShift, Identity::DualShift, Identity::ReflectionGamma,
                        Identity::ReflectionDual, Identity::Crossing, Identity::DozzShift})
        CHECK(identity_from_name(identity_name(id)) == id);
}

TEST_CASE("periodicity closure") {
    const auto p = make_params(1.1, 1.0);
    const auto r = periodicity_check(p, {0.93, 1.7, 1.9}, 5);
    CHECK(r.max_residual <= 1e-7);
    CHECK(r.gamma_squared_rational);
    const auto pi3 = make_params(M_PI / 3.0, 1.0);
    const auto r3 = periodicity_check(pi3, {0.93, 1.7, 1.9}, 5);
    CHECK(r3.max_residual <= 1e-7);
    CHECK_FALSE(r3.gamma_squared_rational);
    CHECK(periodicity_check(p, kStd, 0).max_residual == 0.0);
    CHECK(gamma_squared_is_rational(std::sqrt(2.0)));
    CHECK(periodicity_check(make_params(std::sqrt(1.5), 1.0), kStd, 0).gamma_squared_rational);
}
