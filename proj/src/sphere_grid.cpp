#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss.hpp>

#include "lcft/sphere.hpp"
#include "sphere_internal.hpp"

namespace lcft {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kInf = std::numeric_limits<double>::infinity();
// exp of the mean of ln|x - y| over two uniform points of the unit square.
constexpr double kSquareLogRadius = 0.44704915590366253083;
constexpr double kMaxSiteRadius = 0.3;
constexpr double kSiteSpacing = 0.3;

double metric(cplx w) {
    const double r = std::abs(w);
    return r <= 1.0 ? 1.0 : 1.0 / (r * r * r * r);
}

cplx to_chart(Chart from, cplx w, Chart to) {
    if (from == to) return w;
    if (w == cplx(0.0)) return cplx(kInf, 0.0);
    return 1.0 / w;
}

// Image of the disk (c, r) under w -> 1/w: a disk, or the exterior of a disk
// when the origin lies inside.
struct Region {
    cplx c;
    double r;
    bool exterior;
    bool contains(cplx w) const {
        if (!std::isfinite(w.real())) return exterior;
        const double d = std::abs(w - c);
        return exterior ? d > r : d < r;
    }
};

Region disk_image(cplx c, double r) {
    const double den = std::norm(c) - r * r;
    return {std::conj(c) / den, r / std::abs(den), den < 0.0};
}

struct Geometry {
    std::vector<RefinementSite> sites;

    // -1 inner background, -2 outer background, k >= 0 site k.
    int owner(Chart chart, cplx w) const {
        for (std::size_t k = 0; k < sites.size(); ++k) {
            const auto& s = sites[k];
            const cplx v = to_chart(chart, w, s.chart);
            if (std::isfinite(v.real()) && std::abs(v - s.w) < s.radius) return static_cast<int>(k);
        }
        const bool inside = std::abs(w) <= 1.0;
        if (chart == Chart::Inner) return inside ? -1 : -2;
        return inside ? -2 : -1;
    }
};

bool sites_overlap(const RefinementSite& a, const RefinementSite& b) {
    if (a.chart == b.chart) return std::abs(a.w - b.w) < a.radius + b.radius;
    const Region img = disk_image(b.w, b.radius);
    const double d = std::abs(a.w - img.c);
    return img.exterior ? d + a.radius > img.r : d < a.radius + img.r;
}

std::vector<RefinementSite> place_sites(const std::vector<Insertion>& insertions) {
    std::vector<RefinementSite> sites;
    for (const auto& ins : insertions) {
        if (ins.alpha <= 0.0) continue;
        RefinementSite s;
        if (ins.at_infinity) {
            s.chart = Chart::Outer;
            s.w = 0.0;
        } else if (std::abs(ins.z) <= 1.0) {
            s.chart = Chart::Inner;
            s.w = ins.z;
        } else {
            s.chart = Chart::Outer;
            s.w = 1.0 / ins.z;
        }
        sites.push_back(s);
    }
    for (std::size_t k = 0; k < sites.size(); ++k) {
        double dmin = kInf;
        for (std::size_t j = 0; j < sites.size(); ++j) {
            if (j == k) continue;
            const cplx v = to_chart(sites[j].chart, sites[j].w, sites[k].chart);
            if (std::isfinite(v.real())) dmin = std::min(dmin, std::abs(v - sites[k].w));
        }
        sites[k].radius = std::min(kMaxSiteRadius, kSiteSpacing * dmin);
    }
    for (int round = 0; round < 60; ++round) {
        bool clash = false;
        for (std::size_t k = 0; k < sites.size(); ++k)
            for (std::size_t j = k + 1; j < sites.size(); ++j)
                if (sites_overlap(sites[k], sites[j])) {
                    sites[k].radius *= 0.7;
                    sites[j].radius *= 0.7;
                    clash = true;
                }
        if (!clash) return sites;
    }
    throw Error(Errc::InvalidArgument, "refinement sites cannot be separated");
}

struct Builder {
    SphereEnsemble& ens;
    const EnsembleOptions& opt;

    void add_cell(Chart chart, cplx centre, double euclid_area, const std::vector<SubSample>& subs) {
        double mass = 0.0;
        for (const auto& s : subs) mass += s.mass;
        if (!(mass > 0.0)) return;
        if (ens.points.size() >= opt.max_cells)
            throw Error(Errc::TooManyCells, "grid exceeds " + std::to_string(opt.max_cells) + " cells");
        ens.charts.push_back(chart);
        ens.points.push_back(centre);
        ens.areas.push_back(mass);
        ens.eps.push_back(kSquareLogRadius * std::sqrt(euclid_area));
        ens.subsamples.insert(ens.subsamples.end(), subs.begin(), subs.end());
        ens.sub_begin.push_back(static_cast<std::uint32_t>(ens.subsamples.size()));
    }

    void site_rings(const RefinementSite& s, double h) {
        using GL = boost::math::quadrature::gauss<double, 4>;
        const auto& nodes = GL::abscissa();
        const auto& wts = GL::weights();
        std::vector<std::pair<double, double>> gl;  // node in [-1,1], weight
        for (std::size_t k = 0; k < nodes.size(); ++k) {
            gl.emplace_back(nodes[k], wts[k]);
            if (nodes[k] != 0.0) gl.emplace_back(-nodes[k], wts[k]);
        }
        int n0 = static_cast<int>(std::lround(2.0 * kPi * s.radius / h / 8.0)) * 8;
        n0 = std::max(n0, opt.min_ring_cells);
        double t = 0.0;
        for (int level = 0; t < opt.site_depth - 1e-12; ++level) {
            const int n = std::max(opt.min_ring_cells, static_cast<int>(std::lround(n0 / std::pow(2.0, level))));
            const double t_end = std::min(opt.site_depth, (level + 1) * opt.halving_depth);
            const double span = t_end - t;
            const int rings = std::max(1, static_cast<int>(std::ceil(span / (2.0 * kPi / n) - 1e-9)));
            const double dt = span / rings;
            const double dth = 2.0 * kPi / n;
            for (int k = 0; k < rings; ++k) {
                const double t0 = t + k * dt;
                const double r_out = s.radius * std::exp(-t0), r_in = s.radius * std::exp(-t0 - dt);
                for (int j = 0; j < n; ++j) {
                    const double th0 = j * dth;
                    std::vector<SubSample> subs;
                    subs.reserve(gl.size() * gl.size());
                    for (const auto& [xt, wt] : gl)
                        for (const auto& [xp, wp] : gl) {
                            const double tt = t0 + 0.5 * dt * (xt + 1.0);
                            const double th = th0 + 0.5 * dth * (xp + 1.0);
                            const double r = s.radius * std::exp(-tt);
                            const cplx w = s.w + std::polar(r, th);
                            subs.push_back({w, 0.25 * wt * wp * dt * dth * r * r * metric(w)});
                        }
                    const cplx centre = s.w + std::polar(std::sqrt(r_out * r_in), th0 + 0.5 * dth);
                    add_cell(s.chart, centre, 0.5 * (r_out * r_out - r_in * r_in) * dth, subs);
                }
            }
            t = t_end;
        }
    }

    void background(Chart chart, const Geometry& geo, int resolution) {
        const double h = 2.0 / resolution;
        const int own = chart == Chart::Inner ? -1 : -2;
        for (int iy = 0; iy < resolution; ++iy)
            for (int ix = 0; ix < resolution; ++ix) {
                const cplx corner(-1.0 + ix * h, -1.0 + iy * h);
                auto sample = [&](int m, std::vector<SubSample>& subs, int& owned) {
                    subs.clear();
                    owned = 0;
                    const double d = h / m;
                    for (int a = 0; a < m; ++a)
                        for (int b = 0; b < m; ++b) {
                            const cplx w = corner + cplx((a + 0.5) * d, (b + 0.5) * d);
                            if (geo.owner(chart, w) != own) continue;
                            ++owned;
                            subs.push_back({w, d * d * metric(w)});
                        }
                };
                std::vector<SubSample> subs;
                int owned = 0;
                int m = opt.background_subsamples;
                sample(m, subs, owned);
                if (owned == 0 && !touches_boundary(geo, chart, corner, h)) continue;
                if (owned != m * m || touches_boundary(geo, chart, corner, h)) {
                    m = opt.boundary_subsamples;
                    sample(m, subs, owned);
                }
                if (owned == 0) continue;
                cplx centre = 0.0;
                double mass = 0.0;
                for (const auto& s : subs) {
                    centre += s.mass * s.w;
                    mass += s.mass;
                }
                add_cell(chart, centre / mass, owned * (h / m) * (h / m), subs);
            }
    }

    // Whether the square may meet a region boundary (unit circle or a site disk).
    static bool touches_boundary(const Geometry& geo, Chart chart, cplx corner, double h) {
        const cplx mid = corner + cplx(0.5 * h, 0.5 * h);
        const double half_diag = h / std::sqrt(2.0);
        if (std::abs(std::abs(mid) - 1.0) <= half_diag) return true;
        for (const auto& s : geo.sites) {
            Region reg{s.w, s.radius, false};
            if (s.chart != chart) reg = disk_image(s.w, s.radius);
            if (std::abs(std::abs(mid - reg.c) - reg.r) <= half_diag) return true;
        }
        return false;
    }
};

}  // namespace

Insertion insertion_at_infinity(double alpha) { return {alpha, cplx(0.0), true}; }

cplx SphereEnsemble::plane_point(std::size_t i) const {
    if (charts[i] == Chart::Inner) return points[i];
    if (points[i] == cplx(0.0)) return cplx(kInf, 0.0);
    return 1.0 / points[i];
}

SphereEnsemble build_ensemble(int resolution, const std::vector<Insertion>& insertions, const EnsembleOptions& opt) {
    if (resolution < 2) throw Error(Errc::InvalidArgument, "resolution must be at least 2");
    for (std::size_t i = 0; i < insertions.size(); ++i)
        for (std::size_t j = i + 1; j < insertions.size(); ++j) {
            const auto& a = insertions[i];
            const auto& b = insertions[j];
            if ((a.at_infinity && b.at_infinity) || (!a.at_infinity && !b.at_infinity && a.z == b.z))
                throw Error(Errc::InvalidArgument, "insertion points must be pairwise distinct");
        }
    SphereEnsemble ens;
    ens.resolution = resolution;
    ens.insertions = insertions;
    Geometry geo{place_sites(insertions)};
    ens.sites = geo.sites;
    ens.sub_begin.push_back(0);
    Builder b{ens, opt};
    const double h = 2.0 / resolution;
    for (const auto& s : geo.sites) b.site_rings(s, h);
    b.background(Chart::Inner, geo, resolution);
    b.background(Chart::Outer, geo, resolution);
    assemble_covariance(ens);
    factorize(ens);
    return ens;
}

}  // namespace lcft
