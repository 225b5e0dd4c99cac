#include "lcft/special.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace lcft {

namespace {

constexpr double kPi = std::numbers::pi;

bool is_nonpositive_integer(double x, double tol = 0.0) {
    if (x > tol) return false;
    return std::abs(x - std::round(x)) <= tol;
}

// Godfrey's g = 607/128 Lanczos coefficients, relative error below 1e-15 on Re z >= 1/2.
constexpr double kLanczosG = 607.0 / 128.0;
constexpr std::array<double, 15> kLanczos = {
    0.99999999999999709182,     57.156235665862923517,      -59.597960355475491248,
    14.136097974741747174,      -0.49191381609762019978,    .33994649984811888699e-4,
    .46523628927048575665e-4,   -.98374475304879564677e-4,  .15808870322491248884e-3,
    -.21026444172410488319e-3,  .21743961811521264320e-3,   -.16431810653676389022e-3,
    .84418223983852743293e-4,   -.26190838401581408670e-4,  .36899182659531622704e-5};

cplx log_gamma_right(cplx z) {
    // Valid for Re z >= 1/2.
    z -= 1.0;
    cplx acc = kLanczos[0];
    for (std::size_t k = 1; k < kLanczos.size(); ++k) acc += kLanczos[k] / (z + static_cast<double>(k));
    const cplx t = z + kLanczosG + 0.5;
    return 0.5 * std::log(2.0 * kPi) + (z + 0.5) * std::log(t) - t + std::log(acc);
}

// sinh(x)/x - 1 without cancellation for small |x|.
cplx sinhc_m1(cplx x) {
    if (std::abs(x) < 0.5) {
        const cplx x2 = x * x;
        cplx term = x2 / 6.0;
        cplx sum = term;
        for (int k = 2; k < 12; ++k) {
            term *= x2 / static_cast<double>((2 * k) * (2 * k + 1));
            sum += term;
        }
        return sum;
    }
    return std::sinh(x) / x - 1.0;
}

// Integrand of ln Upsilon, a = Q/2 - z. Finite at t = 0 with limit -a^2.
cplx log_upsilon_integrand(double t, cplx a, double g, double q) {
    if (t == 0.0) return -a * a;
    const cplx a2 = a * a;
    if (t < 2.0) {
        const cplx u = sinhc_m1(a * (t / 2.0));
        const double v = std::real(sinhc_m1(cplx(g * t / 4.0)));
        const double w = std::real(sinhc_m1(cplx(t / g)));
        const cplx num = 2.0 * u + u * u - v - w - v * w;
        return a2 * (std::expm1(-t) - num / ((1.0 + v) * (1.0 + w))) / t;
    }
    // e^{(a-q/2)t} - 2e^{-qt/2} + e^{(-a-q/2)t} in product form; the sum cancels for small a.
    const cplx sh = std::sinh(a * (t / 2.0));
    const cplx ratio = 4.0 * std::exp(-q * t / 2.0) * sh * sh /
                       (-std::expm1(-g * t / 2.0) * -std::expm1(-2.0 * t / g));
    return (a2 * std::exp(-t) - ratio) / t;
}

cplx log_upsilon_strip(cplx z, double g) {
    const double q = g / 2.0 + 2.0 / g;
    const cplx a = q / 2.0 - z;
    if (a == cplx(0.0)) return 0.0;
    const double kappa = std::min({1.0, z.real(), q - z.real()});
    const double t_max = 40.0 / kappa;
    auto f = [&](double t) { return log_upsilon_integrand(t, a, g, q); };
    using GK = boost::math::quadrature::gauss_kronrod<double, 31>;
    const std::array<double, 4> cuts = {0.0, 1.0, 4.0, t_max};
    cplx total = 0.0;
    double err_total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        double err = 0.0;
        total += GK::integrate(f, cuts[i], cuts[i + 1], 20, 1e-12, &err);
        err_total += err;
    }
    if (!(err_total <= 1e-10) || !std::isfinite(total.real()) || !std::isfinite(total.imag()))
        throw Error(Errc::QuadratureFailure, "ln Upsilon error estimate " + std::to_string(err_total));
    return total;
}

}  // namespace

double mu_dual_of(double gamma, double mu) {
    const double g2 = gamma * gamma;
    const double l_dual = l_ratio(4.0 / g2);
    const double base = std::pow(mu * kPi * l_ratio(g2 / 4.0), 4.0 / g2);
    if (l_dual == 0.0) return std::numeric_limits<double>::infinity();
    return base / (kPi * l_dual);
}

LiouvilleParams make_params(double gamma, double mu) {
    if (!(gamma > 0.0) || !std::isfinite(gamma)) throw Error(Errc::NonPositiveGamma, "gamma must be > 0");
    if (!(mu > 0.0) || !std::isfinite(mu)) throw Error(Errc::NonPositiveMu, "mu must be > 0");
    LiouvilleParams p;
    p.gamma = gamma;
    p.q = gamma / 2.0 + 2.0 / gamma;
    p.mu = mu;
    p.mu_dual = mu_dual_of(gamma, mu);
    p.closed_form_only = gamma >= 2.0;
    return p;
}

LiouvilleParams dual_params(const LiouvilleParams& p) {
    if (!std::isfinite(p.mu_dual) || p.mu_dual == 0.0)
        throw Error(Errc::DegenerateDual, "dual cosmological constant is not finite at this gamma");
    LiouvilleParams d;
    d.gamma = 4.0 / p.gamma;
    d.q = p.q;
    d.mu = p.mu_dual;
    d.mu_dual = p.mu;
    d.closed_form_only = d.gamma >= 2.0;
    return d;
}

void require_probabilistic(const LiouvilleParams& p) {
    if (p.closed_form_only || !(p.gamma > 0.0 && p.gamma < 2.0))
        throw Error(Errc::GammaOutOfRange, "probabilistic modules require gamma in (0,2)");
}

cplx gamma_fn(cplx z) {
    if (z.imag() == 0.0) {
        if (is_nonpositive_integer(z.real()))
            throw Error(Errc::PoleAtNonpositiveInteger, "Gamma pole at " + std::to_string(z.real()));
        return std::tgamma(z.real());
    }
    if (z.real() < 0.5) return kPi / (std::sin(kPi * z) * gamma_fn(1.0 - z));
    return std::exp(log_gamma_right(z));
}

cplx rgamma(cplx z) {
    if (z.imag() == 0.0) return rgamma(z.real());
    if (z.real() < 0.5) return std::sin(kPi * z) * gamma_fn(1.0 - z) / kPi;
    return std::exp(-log_gamma_right(z));
}

double rgamma(double x) {
    if (is_nonpositive_integer(x)) return 0.0;
    return 1.0 / std::tgamma(x);
}

double l_ratio(double x) {
    if (is_nonpositive_integer(x))
        throw Error(Errc::PoleAtNonpositiveInteger, "l(x) pole at x = " + std::to_string(x));
    return std::tgamma(x) * rgamma(1.0 - x);
}

cplx l_ratio(cplx x) {
    if (x.imag() == 0.0) return l_ratio(x.real());
    return gamma_fn(x) * rgamma(1.0 - x);
}

bool on_upsilon_zero_lattice(cplx z, double gamma, double tol) {
    if (std::abs(z.imag()) > tol) return false;
    const double g = gamma > 2.0 ? 4.0 / gamma : gamma;
    const double q = g / 2.0 + 2.0 / g;
    const double small = g / 2.0;
    const double large = 2.0 / g;
    auto hits = [&](double r) {
        // r >= -tol: is r = m*small + n*large for some m, n >= 0?
        if (r < -tol) return false;
        for (double n = 0.0; n * large <= r + tol; n += 1.0) {
            const double rest = r - n * large;
            const double m = std::round(rest / small);
            if (m >= 0.0 && std::abs(rest - m * small) <= tol) return true;
        }
        return false;
    };
    const double x = z.real();
    return hits(-x) || hits(x - q);
}

cplx upsilon(cplx z, double gamma) {
    if (!(gamma > 0.0)) throw Error(Errc::NonPositiveGamma, "gamma must be > 0");
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
        throw Error(Errc::InvalidArgument, "upsilon argument must be finite");
    const double g = gamma > 2.0 ? 4.0 / gamma : gamma;
    if (on_upsilon_zero_lattice(z, g)) return 0.0;

    // Continue with the small shift g/2 only, into the band [1/g, 1/g + g/2]
    // centred at Q/2. Away from the zero lattice no l factor vanishes or blows up.
    const double step = g / 2.0;
    const double lo = 1.0 / g;
    const double hi = 1.0 / g + step;
    auto shift_factor = [&](cplx w) {
        cplx f;
        try {
            f = l_ratio(g * w / 2.0) * std::pow(cplx(step), 1.0 - g * w);
        } catch (const Error&) {
            throw Error(Errc::ShiftPoleFailure, "l pole hit during continuation");
        }
        if (!std::isfinite(f.real()) || !std::isfinite(f.imag()) || f == cplx(0.0))
            throw Error(Errc::ShiftPoleFailure, "shift factor degenerate during continuation");
        return f;
    };

    cplx w = z;
    cplx factor = 1.0;
    if (z.real() < lo) {
        const int k = static_cast<int>(std::ceil((lo - z.real()) / step));
        for (int j = 0; j < k; ++j) {
            factor /= shift_factor(w);
            w += step;
        }
    } else if (z.real() > hi) {
        const int k = static_cast<int>(std::ceil((z.real() - hi) / step));
        for (int j = 0; j < k; ++j) {
            w -= step;
            factor *= shift_factor(w);
        }
    }
    return factor * std::exp(log_upsilon_strip(w, g));
}

double upsilon(double z, double gamma) { return upsilon(cplx(z), gamma).real(); }

double upsilon_prime_zero(double gamma) {
    const double g = gamma > 2.0 ? 4.0 / gamma : gamma;
    return upsilon(g / 2.0, g);
}

double upsilon_prime_zero_fd(double gamma, double h) {
    return (upsilon(h, gamma) - upsilon(-h, gamma)) / (2.0 * h);
}

double dozz_c(const LiouvilleParams& p, double a1, double a2, double a3) {
    const double g = p.gamma;
    const double q = p.q;
    const double ab = a1 + a2 + a3;
    const double den[4] = {upsilon(ab / 2.0 - q, g), upsilon(ab / 2.0 - a1, g), upsilon(ab / 2.0 - a2, g),
                           upsilon(ab / 2.0 - a3, g)};
    const double num = upsilon_prime_zero(g) * upsilon(a1, g) * upsilon(a2, g) * upsilon(a3, g);
    const double den_prod = den[0] * den[1] * den[2] * den[3];
    if (den_prod == 0.0) throw Error(Errc::PoleOfDozz, "a denominator Upsilon sits on the zero lattice");
    if (num == 0.0) return 0.0;
    const double base = kPi * p.mu * l_ratio(g * g / 4.0) * std::pow(g / 2.0, 2.0 - g * g / 2.0);
    if (!(base > 0.0)) throw Error(Errc::InvalidArgument, "DOZZ prefactor base must be positive");
    return std::pow(base, (2.0 * q - ab) / g) * num / den_prod;
}

double reflection_dozz(const LiouvilleParams& p, double alpha) {
    const double g = p.gamma;
    const double d = p.q - alpha;
    if (d == 0.0) return -1.0;
    const double x1 = g * d / 2.0;
    const double x2 = 2.0 * d / g;
    constexpr double tol = 1e-12;
    if (is_nonpositive_integer(-x1, tol) || is_nonpositive_integer(-x2, tol))
        throw Error(Errc::PoleOfReflection, "alpha = " + std::to_string(alpha) + " is a divergence point");
    const double base = kPi * p.mu * l_ratio(g * g / 4.0);
    if (!(base > 0.0)) throw Error(Errc::InvalidArgument, "reflection prefactor base must be positive");
    return -std::pow(base, 2.0 * d / g) * std::tgamma(-x1) * rgamma(x1) * std::tgamma(-x2) * rgamma(x2);
}

double two_point_limit(const LiouvilleParams& p, double alpha) {
    auto f = [&](double eps) { return eps * dozz_c(p, alpha, eps, alpha); };
    const double f2 = f(1e-2), f3 = f(1e-3), f4 = f(1e-4);
    const double r1 = (10.0 * f3 - f2) / 9.0;
    const double r2 = (10.0 * f4 - f3) / 9.0;
    return (100.0 * r2 - r1) / 99.0;
}

}  // namespace lcft
