#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/tanh_sinh.hpp>

#include "lcft/sphere.hpp"

namespace lcft {

namespace {

constexpr double kPi = std::numbers::pi;

// int over |x| < 1 of |x|^(-A) |x - 1|^(-b) d^2x plus the inverted exterior,
// written as int_0^1 (r^(1-A) + r^(A+b-3)) J(r) dr with
// J(r) = 2 int_0^pi ((1-r)^2 + 4 r sin^2(theta/2))^(-b/2) dtheta.
double df_integral(double big_a, double b) {
    boost::math::quadrature::tanh_sinh<double> outer(12), inner(12);
    auto j_of = [&](double r, double one_minus_r) {
        auto g = [&](double th, double thc) {
            // thc is the signed distance to the nearer endpoint.
            const double half = th < 0.5 * kPi ? 0.5 * th : 0.5 * (kPi - thc);
            const double s = std::sin(half);
            const double base = one_minus_r * one_minus_r + 4.0 * r * s * s;
            return std::pow(std::max(base, std::numeric_limits<double>::min()), -0.5 * b);
        };
        return 2.0 * inner.integrate(g, 0.0, kPi, 1e-11);
    };
    auto f = [&](double r, double rc) {
        const double one_minus_r = r >= 0.5 ? rc : 1.0 - r;
        return (std::pow(r, 1.0 - big_a) + std::pow(r, big_a + b - 3.0)) * j_of(r, one_minus_r);
    };
    return outer.integrate(f, 0.0, 1.0, 1e-10);
}

}  // namespace

DfCheck df_check(const LiouvilleParams& p, double a1, double a2) {
    const double g = p.gamma;
    DfCheck r;
    r.a3 = 4.0 / g - a1 - a2;
    const double big_a = g * a1, b = g * a2;
    if (!(big_a < 2.0 && b < 2.0 && big_a + b > 2.0))
        throw Error(Errc::NonIntegrable, "need gamma a1 < 2, gamma a2 < 2 and gamma (a1 + a2) > 2");
    r.quadrature = df_integral(big_a, b);
    r.closed_form = kPi / (l_ratio(big_a / 2.0) * l_ratio(b / 2.0) * l_ratio(g * r.a3 / 2.0));
    return r;
}

DfResidue df_residue_check(const LiouvilleParams& p, double a1, double a2) {
    const DfCheck d = df_check(p, a1, a2);
    auto f = [&](double eps) { return eps * dozz_c(p, a1, a2, d.a3 + eps); };
    const double f2 = f(1e-2), f3 = f(1e-3), f4 = f(1e-4);
    const double r1 = (10.0 * f3 - f2) / 9.0;
    const double r2 = (10.0 * f4 - f3) / 9.0;
    DfResidue r;
    r.limit = (100.0 * r2 - r1) / 99.0;
    r.expected = -2.0 * p.mu * d.closed_form;
    return r;
}

}  // namespace lcft
