#include "doctest.h"

#include <cmath>

#include "lcft/bpz.hpp"

using namespace lcft;

namespace {

const std::array<double, 3> kStd = {1.9, 1.9, 1.9};

SphereEnsemble triple_ensemble(int resolution) {
    return build_ensemble(resolution, {{kStd[0], cplx(0.0), false}, {kStd[1], cplx(1.0), false},
                                       insertion_at_infinity(kStd[2])});
}

}  // namespace

TEST_CASE("t_mc at z = 0 merges alpha0 into alpha1") {
    const auto p = make_params(1.0, 1.0);
    const auto ens = triple_ensemble(6);
    const auto spec = make_four_point_spec(p, -0.5, kStd, cplx(0.0));
    const auto four = t_mc(p, ens, spec, 400, 11, 2);
    const auto three = structure_constant_estimate(p, ens, kStd[0] - 0.5, kStd[1], kStd[2], 400, 11, 2);
    CHECK(four.value == doctest::Approx(three.value).epsilon(1e-10));
    CHECK(four.std_error == doctest::Approx(three.std_error).epsilon(1e-8));
}

TEST_CASE("t_mc is symmetric under conjugation of z") {
    const auto p = make_params(1.0, 1.0);
    const auto ens = triple_ensemble(6);
    const auto a = t_mc(p, ens, make_four_point_spec(p, -0.5, kStd, cplx(0.3, 0.1)), 300, 5, 3);
    const auto b = t_mc(p, ens, make_four_point_spec(p, -0.5, kStd, cplx(0.3, -0.1)), 300, 5, 1);
    CHECK(a.value == b.value);
    CHECK(a.std_error == b.std_error);
    CHECK(a.diagnostics.at("cells") == static_cast<double>(ens.size()));
}

TEST_CASE("t_mc tracks t_bpz on a coarse grid") {
    const auto p = make_params(1.0, 1.0);
    const auto ens = triple_ensemble(8);
    for (cplx z : {cplx(0.2), cplx(0.3, 0.1)}) {
        const auto spec = make_four_point_spec(p, -0.5, kStd, z);
        const auto e = t_mc(p, ens, spec, 6000, kDefaultSeed);
        const double exact = t_bpz(p, spec);
        CHECK(std::abs(e.value - exact) < std::max(3.0 * e.std_error, 0.03 * exact));
        CHECK(e.std_error < 0.01 * exact);
    }
}

TEST_CASE("t_mc rejects inadmissible quadruples") {
    const auto p = make_params(1.0, 1.0);
    FourPointSpec spec = make_four_point_spec(p, -0.5, kStd, cplx(0.2));
    spec.alpha0 = 0.25;
    CHECK_THROWS_AS(t_mc(p, spec, 10, 1), Error);
    try {
        t_mc(p, spec, 10, 1);
    } catch (const Error& e) {
        CHECK(e.code() == Errc::InadmissibleWeights);
    }
    FourPointSpec low = make_four_point_spec(p, -0.5, {0.5, 0.5, 0.5}, cplx(0.2));
    CHECK_THROWS_AS(t_mc(p, low, 10, 1), Error);
    CHECK_THROWS_AS(t_mc(make_params(2.5, 1.0), make_four_point_spec(p, -0.5, kStd, cplx(0.2)), 10, 1), Error);
}
