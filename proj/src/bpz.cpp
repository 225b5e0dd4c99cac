#include "lcft/bpz.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace lcft {

namespace {

constexpr double kPi = std::numbers::pi;

bool near_integer(double x, double tol = 1e-12) { return std::abs(x - std::round(x)) <= tol; }

double gamma_checked(double x) {
    if (x <= 0.0 && near_integer(x, 0.0)) throw Error(Errc::PoleEncountered, "Gamma pole at " + std::to_string(x));
    return std::tgamma(x);
}

}  // namespace

cplx hyp2f1(double a, double b, double c, cplx z) {
    if (c <= 0.0 && near_integer(c, 0.0)) throw Error(Errc::DegenerateC, "c is a nonpositive integer");
    const double r = std::abs(z);
    if (r > 0.7 + 1e-15) throw Error(Errc::DomainExceeded, "|z| must be <= 0.7");
    cplx term = 1.0;
    cplx sum = 1.0;
    for (int k = 0; k < 5000; ++k) {
        const double kk = static_cast<double>(k);
        const double coef = (a + kk) * (b + kk) / ((c + kk) * (kk + 1.0));
        term *= coef * z;
        sum += term;
        if (term == cplx(0.0)) return sum;
        // Past the hump the ratio decreases towards |z|; bound the tail geometrically.
        const double next = std::abs((a + kk + 1.0) * (b + kk + 1.0) / ((c + kk + 1.0) * (kk + 2.0))) * r;
        if (kk > std::abs(a) + std::abs(b) + std::abs(c) && next < 1.0) {
            const double ratio_bound = std::max(next, r);
            if (std::abs(term) * ratio_bound / (1.0 - ratio_bound) < 1e-13) return sum;
        }
    }
    throw Error(Errc::DomainExceeded, "hypergeometric series did not converge");
}

BpzCoefficients bpz_coefficients(const LiouvilleParams& p, double alpha0, const std::array<double, 3>& al) {
    const double g = p.gamma;
    if (std::abs(alpha0 + g / 2.0) > 1e-12 && std::abs(alpha0 + 2.0 / g) > 1e-12)
        throw Error(Errc::InvalidArgument, "alpha0 must be -gamma/2 or -2/gamma");
    BpzCoefficients k;
    k.alpha0 = alpha0;
    k.alphas = al;
    const double q = p.q;
    k.a = alpha0 / 2.0 * (q - 2.0 * alpha0 - al[0] - al[1] - al[2]) - 0.5;
    k.b = alpha0 / 2.0 * (q - al[0] - al[1] + al[2]) + 0.5;
    k.c = 1.0 + alpha0 * (q - al[0]);
    if (near_integer(k.c) || near_integer(k.c - k.a - k.b))
        throw Error(Errc::IntegerDegeneracy, "c or c-a-b is an integer");
    const double a = k.a, b = k.b, c = k.c;
    const double gc = gamma_checked(c);
    k.a_gamma = -(gc * gc * gamma_checked(1.0 - a) * gamma_checked(1.0 - b) * gamma_checked(a - c + 1.0) *
                  gamma_checked(b - c + 1.0)) *
                rgamma(2.0 - c) * rgamma(2.0 - c) * rgamma(c - a) * rgamma(c - b) * rgamma(a) * rgamma(b);
    return k;
}

FourPointSpec make_four_point_spec(const LiouvilleParams& p, double alpha0, const std::array<double, 3>& alphas,
                                   cplx z) {
    if (z == cplx(1.0)) throw Error(Errc::InvalidArgument, "cross-ratio point must differ from 1");
    FourPointSpec s;
    s.alpha0 = alpha0;
    s.alphas = alphas;
    s.z = z;
    s.s = (alpha0 + alphas[0] + alphas[1] + alphas[2] - 2.0 * p.q) / p.gamma;
    return s;
}

double t_bpz(const LiouvilleParams& p, const FourPointSpec& spec) {
    const BpzCoefficients k = bpz_coefficients(p, spec.alpha0, spec.alphas);
    const double lambda = dozz_c(p, spec.alphas[0] + spec.alpha0, spec.alphas[1], spec.alphas[2]);
    const cplx z = spec.z;
    const double f_minus = std::norm(hyp2f1(k.a, k.b, k.c, z));
    double f_plus = 0.0;
    if (z != cplx(0.0)) {
        if (1.0 - k.c <= 0.0) throw Error(Errc::DomainExceeded, "z^(1-c) unbounded at z = 0 for c >= 1");
        f_plus = std::pow(std::abs(z), 2.0 * (1.0 - k.c)) *
                 std::norm(hyp2f1(1.0 + k.a - k.c, 1.0 + k.b - k.c, 2.0 - k.c, z));
    }
    return lambda * (f_minus + k.a_gamma * f_plus);
}

double b_coefficient(const LiouvilleParams& p, double alpha) {
    const double g = p.gamma;
    return -p.mu * kPi /
           (l_ratio(-g * g / 4.0) * l_ratio(g * alpha / 2.0) * l_ratio(2.0 + g * g / 4.0 - g * alpha / 2.0));
}

double b_dual_coefficient(const LiouvilleParams& p, double alpha) {
    const double g = p.gamma;
    const double h = 4.0 / (g * g);
    return -p.mu_dual * kPi / (l_ratio(-h) * l_ratio(2.0 * alpha / g) * l_ratio(2.0 + h - 2.0 * alpha / g));
}

const char* identity_name(Identity id) noexcept {
    switch (id) {
        case Identity::GammaShift: return "gamma-shift";
        case Identity::DualShift: return "dual-shift";
        case Identity::ReflectionGamma: return "reflection-gamma";
        case Identity::ReflectionDual: return "reflection-dual";
        case Identity::Crossing: return "crossing";
        case Identity::DozzShift: return "dozz-shift";
    }
    return "unknown";
}

Identity identity_from_name(const std::string& name) {
    for (Identity id : {Identity::GammaShift, Identity::DualShift, Identity::ReflectionGamma,
                        Identity::ReflectionDual, Identity::Crossing, Identity::DozzShift})
        if (name == identity_name(id)) return id;
    throw Error(Errc::InvalidArgument, "unknown identity " + name);
}

namespace {

// C(a1 + h/2)/C(a1 - h/2) predicted by the shift identity with step h in
// {gamma, 4/gamma}; `scale` is gamma/2 or 2/gamma and `m` is mu or mu_dual.
double half_shift_rhs(double a1, double a2, double a3, double scale, double m) {
    const double ab = a1 + a2 + a3;
    const double q = scale + 1.0 / scale;  // Q written in the step's own units
    const double s2 = scale * scale;
    const double num = l_ratio(-s2) * l_ratio(scale * a1) * l_ratio(scale * a1 - s2) *
                       l_ratio(scale / 2.0 * (ab - 2.0 * a1 - scale));
    const double den = l_ratio(scale / 2.0 * (ab - scale - 2.0 * q)) * l_ratio(scale / 2.0 * (ab - 2.0 * a3 - scale)) *
                       l_ratio(scale / 2.0 * (ab - 2.0 * a2 - scale));
    return -num / (kPi * m * den);
}

double gamma_step_rhs(const LiouvilleParams& p, double a1, double a2, double a3) {
    return half_shift_rhs(a1, a2, a3, p.gamma / 2.0, p.mu);
}

double dual_step_rhs(const LiouvilleParams& p, double a1, double a2, double a3) {
    if (!std::isfinite(p.mu_dual)) throw Error(Errc::PoleEncountered, "dual cosmological constant is infinite");
    return half_shift_rhs(a1, a2, a3, 2.0 / p.gamma, p.mu_dual);
}

double checked_ratio(double lhs, double rhs) {
    if (!std::isfinite(lhs) || !std::isfinite(rhs) || rhs == 0.0)
        throw Error(Errc::PoleEncountered, "identity side is zero or non-finite");
    return std::abs(lhs / rhs - 1.0);
}

}  // namespace

double shift_residual(const LiouvilleParams& p, const std::array<double, 3>& al, Identity which) {
    const double g = p.gamma;
    const double a1 = al[0], a2 = al[1], a3 = al[2];
    try {
        switch (which) {
            case Identity::GammaShift: {
                const double lhs = dozz_c(p, a1 + g / 2.0, a2, a3) / dozz_c(p, a1 - g / 2.0, a2, a3);
                return checked_ratio(lhs, gamma_step_rhs(p, a1, a2, a3));
            }
            case Identity::DualShift: {
                const double lhs = dozz_c(p, a1 + 2.0 / g, a2, a3) / dozz_c(p, a1 - 2.0 / g, a2, a3);
                return checked_ratio(lhs, dual_step_rhs(p, a1, a2, a3));
            }
            case Identity::ReflectionGamma: {
                const double rhs = -p.mu * kPi * reflection_dozz(p, a1 + g / 2.0) /
                                   (l_ratio(-g * g / 4.0) * l_ratio(g * a1 / 2.0) *
                                    l_ratio(2.0 + g * g / 4.0 - g * a1 / 2.0));
                return checked_ratio(reflection_dozz(p, a1), rhs);
            }
            case Identity::ReflectionDual: {
                if (!std::isfinite(p.mu_dual))
                    throw Error(Errc::PoleEncountered, "dual cosmological constant is infinite");
                const double h = 4.0 / (g * g);
                const double rhs = -p.mu_dual * kPi * reflection_dozz(p, a1 + 2.0 / g) /
                                   (l_ratio(-h) * l_ratio(2.0 * a1 / g) * l_ratio(2.0 + h - 2.0 * a1 / g));
                return checked_ratio(reflection_dozz(p, a1), rhs);
            }
            case Identity::Crossing: {
                const BpzCoefficients k = bpz_coefficients(p, -g / 2.0, al);
                const double lhs = b_coefficient(p, a1) * dozz_c(p, a1 + g / 2.0, a2, a3);
                const double rhs = k.a_gamma * dozz_c(p, a1 - g / 2.0, a2, a3);
                return checked_ratio(lhs, rhs);
            }
            case Identity::DozzShift: {
                const double ab = a1 + a2 + a3;
                const double q = p.q;
                const double lhs = dozz_c(p, a1 + g, a2, a3) / dozz_c(p, a1, a2, a3);
                const double rhs = -l_ratio(-g * g / 4.0) / (kPi * p.mu) * l_ratio(g * a1 / 2.0) *
                                   l_ratio(g * a1 / 2.0 + g * g / 4.0) * l_ratio(g / 4.0 * (ab - 2.0 * a1 - g)) /
                                   (l_ratio(g / 4.0 * (ab - 2.0 * q)) * l_ratio(g / 4.0 * (ab - 2.0 * a2)) *
                                    l_ratio(g / 4.0 * (ab - 2.0 * a3)));
                return checked_ratio(lhs, rhs);
            }
        }
    } catch (const Error& e) {
        if (e.code() == Errc::PoleEncountered) throw;
        throw Error(Errc::PoleEncountered, e.what());
    }
    throw Error(Errc::InvalidArgument, "unknown identity");
}

bool gamma_squared_is_rational(double gamma, int max_denominator, double tol) {
    const double g2 = gamma * gamma;
    for (int d = 1; d <= max_denominator; ++d) {
        const double n = std::round(g2 * d);
        if (std::abs(g2 - n / d) <= tol) return true;
    }
    return false;
}

PeriodicityResult periodicity_check(const LiouvilleParams& p, const std::array<double, 3>& al, int n_points) {
    PeriodicityResult res;
    res.gamma_squared_rational = gamma_squared_is_rational(p.gamma);
    const double g = p.gamma;
    const double a2 = al[1], a3 = al[2];
    // Irrational stride keeps the sample points off any lattice.
    const double stride = 0.0618033988749895;
    try {
        for (int k = 0; k < n_points; ++k) {
            const double a = al[0] + stride * k;
            const double c0 = dozz_c(p, a, a2, a3);
            const double by_gamma = gamma_step_rhs(p, a + g / 2.0, a2, a3);
            const double by_dual = dual_step_rhs(p, a + 2.0 / g, a2, a3);
            const double r1 = checked_ratio(dozz_c(p, a + g, a2, a3) / c0, by_gamma);
            const double r2 = checked_ratio(dozz_c(p, a + 4.0 / g, a2, a3) / c0, by_dual);
            const double gd = by_gamma * dual_step_rhs(p, a + g + 2.0 / g, a2, a3);
            const double dg = by_dual * gamma_step_rhs(p, a + 4.0 / g + g / 2.0, a2, a3);
            const double r3 = checked_ratio(gd, dg);
            res.max_residual = std::max({res.max_residual, r1, r2, r3});
        }
    } catch (const Error& e) {
        if (e.code() == Errc::PoleEncountered) throw;
        throw Error(Errc::PoleEncountered, e.what());
    }
    return res;
}

}  // namespace lcft
