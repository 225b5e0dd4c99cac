#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lcft/sphere.hpp"
#include "sphere_internal.hpp"

namespace lcft {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Mean over phi of (1/2) ln(a + Re(b e^{i phi})), valid for a >= |b|.
double mean_half_log(double a, cplx b) {
    const double d = std::max(a * a - std::norm(b), 0.0);
    return 0.5 * std::log(0.5 * (a + std::sqrt(d)));
}

double arc_integral(double a, cplx b, double lo, double hi) {
    auto f = [&](double phi) {
        const double v = a + (b * std::polar(1.0, phi)).real();
        return 0.5 * std::log(std::max(v, 1e-300));
    };
    return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(f, lo, hi, 12, 1e-13);
}

}  // namespace

double mean_log_max(double a1, cplx b1, double a2, cplx b2) {
    const double da = a1 - a2;
    const cplx db = b1 - b2;
    const double ndb = std::abs(db);
    if (ndb <= std::abs(da)) return da >= 0.0 ? mean_half_log(a1, b1) : mean_half_log(a2, b2);
    // Branch 1 dominates where |phi + beta| < psi.
    const double beta = std::arg(db);
    const double psi = std::acos(std::clamp(-da / ndb, -1.0, 1.0));
    const double in1 = arc_integral(a1, b1, -beta - psi, -beta + psi);
    const double in2 = arc_integral(a2, b2, -beta + psi, -beta - psi + kTwoPi);
    return (in1 + in2) / kTwoPi;
}

double circle_log_plus(cplx c, double eps) {
    // Mean of ln max(1, |c + eps e^{i phi}|).
    const double r = std::abs(c);
    if (r + eps <= 1.0) return 0.0;
    if (r - eps >= 1.0) return std::log(r);
    return mean_log_max(1.0, 0.0, std::norm(c) + eps * eps, 2.0 * std::conj(c) * eps);
}

double circle_pair_log(Chart ca, cplx c_a, double eps_a, Chart cb, cplx c_b, double eps_b) {
    if (ca == cb) {
        const cplx p = c_b - c_a;
        const double d = std::abs(p);
        if (d >= eps_a + eps_b) return std::log(d);
        if (d + eps_b <= eps_a) return std::log(eps_a);
        if (d + eps_a <= eps_b) return std::log(eps_b);
        return mean_log_max(eps_a * eps_a, 0.0, std::norm(p) + eps_b * eps_b, 2.0 * std::conj(p) * eps_b);
    }
    if (ca == Chart::Outer) {
        std::swap(c_a, c_b);
        std::swap(eps_a, eps_b);
    }
    // c_a is an inner-chart circle, c_b an outer-chart circle in u = 1/x.
    const cplx q = 1.0 - c_a * c_b;
    const double e2 = eps_a * eps_a;
    return mean_log_max(e2 * (std::norm(c_b) + eps_b * eps_b), 2.0 * e2 * std::conj(c_b) * eps_b,
                        std::norm(q) + std::norm(c_a) * eps_b * eps_b, -2.0 * std::conj(q) * c_a * eps_b);
}

double circle_covariance(Chart ca, cplx c_a, double eps_a, Chart cb, cplx c_b, double eps_b) {
    return -circle_pair_log(ca, c_a, eps_a, cb, c_b, eps_b) + circle_log_plus(c_a, eps_a) +
           circle_log_plus(c_b, eps_b);
}

void assemble_covariance(SphereEnsemble& ens) {
    const std::size_t n = ens.size();
    std::vector<double> hplus(n);
    for (std::size_t i = 0; i < n; ++i) hplus[i] = circle_log_plus(ens.points[i], ens.eps[i]);
    ens.diag_var.resize(n);
    for (std::size_t i = 0; i < n; ++i) ens.diag_var[i] = -std::log(ens.eps[i]) + 2.0 * hplus[i];
    ens.cov_factor.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    auto& m = ens.cov_factor;
    for (std::size_t j = 0; j < n; ++j) {
        const auto jj = static_cast<Eigen::Index>(j);
        m(jj, jj) = ens.diag_var[j];
        for (std::size_t i = j + 1; i < n; ++i) {
            const double c = -circle_pair_log(ens.charts[i], ens.points[i], ens.eps[i], ens.charts[j], ens.points[j],
                                              ens.eps[j]) +
                             hplus[i] + hplus[j];
            const auto ii = static_cast<Eigen::Index>(i);
            m(ii, jj) = c;
            m(jj, ii) = c;
        }
    }
}

void factorize(SphereEnsemble& ens) {
    auto& m = ens.cov_factor;
    const Eigen::Index n = m.rows();
    const double trace = std::accumulate(ens.diag_var.begin(), ens.diag_var.end(), 0.0);
    for (int attempt = 0; attempt < 6; ++attempt) {
        ens.jitter = attempt == 0 ? 0.0 : trace * std::pow(10.0, -15 + attempt);
        for (Eigen::Index j = 0; j < n; ++j) {
            m(j, j) = ens.diag_var[static_cast<std::size_t>(j)] + ens.jitter;
            for (Eigen::Index i = j + 1; i < n; ++i) m(i, j) = m(j, i);
        }
        Eigen::LLT<Eigen::Ref<Eigen::MatrixXd>, Eigen::Lower> llt(m);
        if (llt.info() == Eigen::Success) return;
    }
    throw Error(Errc::FactorizationFailure, "covariance not positive definite after maximal jitter");
}

double SphereEnsemble::covariance(std::size_t i, std::size_t j) const {
    if (i == j) return diag_var[i];
    if (i > j) std::swap(i, j);
    return cov_factor(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

double factorization_residual(const SphereEnsemble& ens, const std::vector<std::size_t>& rows) {
    const auto& l = ens.cov_factor;
    double worst = 0.0, scale = 0.0;
    for (std::size_t i : rows)
        for (std::size_t j : rows) {
            const auto ii = static_cast<Eigen::Index>(i), jj = static_cast<Eigen::Index>(j);
            const Eigen::Index k = std::min(ii, jj) + 1;
            const double llt = l.row(ii).head(k).dot(l.row(jj).head(k));
            const double c = ens.covariance(i, j);
            worst = std::max(worst, std::abs(llt - c));
            scale = std::max(scale, std::abs(c));
        }
    return scale > 0.0 ? worst / scale : worst;
}

}  // namespace lcft
