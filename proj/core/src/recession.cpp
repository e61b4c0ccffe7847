#include "gcoup/recession.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <random>

#include "gcoup/errors.hpp"

namespace gcoup {

namespace {

constexpr double kPi = 3.14159265358979323846;

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double cloud_max_norm(const PointCloud& c) {
    double m = 0.0;
    for (const auto& p : c.pts) m = std::max(m, norm2(p));
    return m;
}

// Survival mask over candidates for an unbounded cloud. Bands are measured
// from the smallest-norm point toward where each direction exits the window.
std::vector<char> band_mask(const PointCloud& cloud, const Box& window,
                            const std::vector<std::vector<double>>& candidates,
                            const RecessionParams& p) {
    std::size_t dim = cloud.dim;
    const std::vector<double>* anchor = &cloud.pts.front();
    double best = norm2(*anchor);
    for (const auto& q : cloud.pts) {
        double nq = norm2(q);
        if (nq < best) best = nq, anchor = &q;
    }

    struct Off {
        double dist;
        std::vector<double> unit;
    };
    std::vector<Off> offs;
    offs.reserve(cloud.pts.size());
    for (const auto& q : cloud.pts) {
        std::vector<double> d(dim);
        for (std::size_t k = 0; k < dim; ++k) d[k] = q[k] - (*anchor)[k];
        double nd = norm2(d);
        if (nd <= 1e-12) continue;
        for (double& c : d) c /= nd;
        offs.push_back({nd, std::move(d)});
    }

    std::vector<double> reach(candidates.size());
    double max_reach = 0.0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        reach[c] = window.exit_distance(*anchor, candidates[c]);
        if (std::isfinite(reach[c])) max_reach = std::max(max_reach, reach[c]);
    }

    double cos_tol = std::cos(p.angular_tol_deg * kPi / 180.0);
    std::vector<char> mask(candidates.size(), 0);
    std::vector<char> found(static_cast<std::size_t>(p.bands));
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        if (!std::isfinite(reach[c]) || reach[c] < p.min_reach_frac * max_reach) continue;
        double r0 = 0.9 * reach[c];
        std::fill(found.begin(), found.end(), 0);
        int left = p.bands;
        for (const Off& o : offs) {
            if (o.dist >= r0) continue;
            int band = 0;
            double hi = r0;
            while (o.dist < hi * 0.5 && band + 1 < p.bands) hi *= 0.5, ++band;
            if (o.dist < hi * 0.5) continue;  // below the narrowest band
            if (found[band]) continue;
            if (dot(o.unit, candidates[c]) >= cos_tol) {
                found[band] = 1;
                if (--left == 0) break;
            }
        }
        mask[c] = left == 0;
    }
    return mask;
}

std::vector<char> recession_mask(const CloudProducer& produce,
                                 const std::vector<std::vector<double>>& candidates,
                                 const Box& window, const RecessionParams& p) {
    PointCloud c0 = produce(0);
    PointCloud c1 = produce(1);
    if (c1.pts.empty()) return std::vector<char>(candidates.size(), 0);
    double m0 = cloud_max_norm(c0), m1 = cloud_max_norm(c1);
    if (!c0.pts.empty() && m1 <= p.growth * m0 + 1e-12)
        return std::vector<char>(candidates.size(), 0);
    return band_mask(c1, window, candidates, p);
}

}  // namespace

double angle_deg(std::span<const double> a, std::span<const double> b) {
    double na = norm2(a), nb = norm2(b);
    if (na <= 0.0 || nb <= 0.0) return 180.0;
    double c = dot(a, b) / (na * nb);
    c = std::clamp(c, -1.0, 1.0);
    return std::acos(c) * 180.0 / kPi;
}

std::vector<std::vector<double>> sphere_directions(std::size_t dim, double res_deg,
                                                   std::uint64_t seed) {
    if (dim == 0 || res_deg <= 0.0) throw Error("sphere_directions: bad arguments");
    std::vector<std::vector<double>> out;
    if (dim == 1) {
        out.push_back({1.0});
        out.push_back({-1.0});
        return out;
    }
    if (dim == 2) {
        int n = std::max(4, static_cast<int>(std::lround(360.0 / res_deg)));
        out.reserve(n);
        for (int i = 0; i < n; ++i) {
            double th = 2.0 * kPi * i / n;
            out.push_back({std::cos(th), std::sin(th)});
        }
        return out;
    }
    if (dim == 3) {
        double cap = 1.0 - std::cos(res_deg * kPi / 180.0);
        int n = static_cast<int>(std::clamp(std::ceil(2.0 / cap), 12.0, 20000.0));
        out.reserve(n);
        double golden = kPi * (3.0 - std::sqrt(5.0));
        for (int i = 0; i < n; ++i) {
            double z = 1.0 - (2.0 * i + 1.0) / n;
            double r = std::sqrt(std::max(0.0, 1.0 - z * z));
            out.push_back({r * std::cos(golden * i), r * std::sin(golden * i), z});
        }
        return out;
    }
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    while (out.size() < 2000) {
        std::vector<double> d(dim);
        for (double& c : d) c = gauss(rng);
        double nd = norm2(d);
        if (nd < 1e-6) continue;
        for (double& c : d) c /= nd;
        out.push_back(std::move(d));
    }
    return out;
}

DirectionSet directions_of_cone(const SetSpec& cone,
                                const std::vector<std::vector<double>>& candidates, double tol) {
    DirectionSet out;
    out.dim = candidates.empty() ? static_cast<std::size_t>(cone.dim()) : candidates[0].size();
    // probe along scaled multiples so a bounded (non-cone) input keeps no
    // direction; a genuine cone is scale-invariant and unaffected
    const double scales[] = {16.0, 1024.0};
    std::vector<double> scaled(out.dim);
    for (const auto& d : candidates) {
        bool keep = true;
        for (double t : scales) {
            for (std::size_t i = 0; i < d.size(); ++i) scaled[i] = t * d[i];
            if (!cone.contains(scaled, tol)) {
                keep = false;
                break;
            }
        }
        if (keep) out.dirs.push_back(d);
    }
    return out;
}

bool dirs_subset(const DirectionSet& a, const DirectionSet& b, double slack_deg) {
    for (const auto& da : a.dirs) {
        bool hit = false;
        for (const auto& db : b.dirs)
            if (angle_deg(da, db) <= slack_deg) {
                hit = true;
                break;
            }
        if (!hit) return false;
    }
    return true;
}

bool dirs_equal(const DirectionSet& a, const DirectionSet& b, double slack_deg) {
    return dirs_subset(a, b, slack_deg) && dirs_subset(b, a, slack_deg);
}

bool cloud_bounded(const CloudProducer& produce, const RecessionParams& p) {
    PointCloud c0 = produce(0);
    PointCloud c1 = produce(1);
    if (c1.pts.empty()) return true;
    if (c0.pts.empty()) return false;
    return cloud_max_norm(c1) <= p.growth * cloud_max_norm(c0) + 1e-12;
}

DirectionSet cloud_recession(const CloudProducer& produce,
                             const std::vector<std::vector<double>>& candidates,
                             const Box& window, const RecessionParams& p) {
    DirectionSet out;
    out.dim = window.dim();
    std::vector<char> mask = recession_mask(produce, candidates, window, p);
    for (std::size_t c = 0; c < candidates.size(); ++c)
        if (mask[c]) out.dirs.push_back(candidates[c]);
    return out;
}

PointCloud gamma_level_cloud(const GammaFn& gamma, const GridSpec& xgrid, double level,
                             int doublings, double level_tol) {
    std::size_t n = xgrid.box.dim();
    std::size_t m = gamma.fg.grid.box.dim();
    PointCloud cloud;
    cloud.dim = n + m;
    double cut = level + level_tol * (1.0 + std::abs(level));

    GridSpec grid = xgrid;
    for (int k = 0; k < doublings; ++k) grid.box = grid.box.doubled();

    std::vector<std::size_t> idx(n, 0);
    std::vector<double> x(n);
    while (true) {
        for (std::size_t d = 0; d < n; ++d) x[d] = grid.coord(idx[d], d);
        ExtReal fx = gamma.f.eval(x);
        if (!fx.is_pos_inf()) {
            for (std::size_t j = 0; j < gamma.fg.size(); ++j) {
                ExtReal v = add_upper(fx, gamma.fg.values[j]);
                if (!v.finite() || v.raw() > cut) continue;
                std::vector<double> pt(x.begin(), x.end());
                pt.insert(pt.end(), gamma.fg.pts[j].begin(), gamma.fg.pts[j].end());
                cloud.pts.push_back(std::move(pt));
            }
        }
        std::size_t d = n;
        while (d > 0 && ++idx[d - 1] == static_cast<std::size_t>(grid.points_per_dim))
            idx[--d] = 0;
        if (d == 0) break;
    }
    return cloud;
}

// Absolute cut on |gamma|; the level path would fold in a relative slack.
PointCloud gamma_zero_cloud(const GammaFn& gamma, const GridSpec& xgrid, double zero_tol) {
    std::size_t n = xgrid.box.dim();
    PointCloud out;
    out.dim = n + gamma.fg.grid.box.dim();
    std::vector<std::size_t> idx(n, 0);
    std::vector<double> x(n);
    while (true) {
        for (std::size_t d = 0; d < n; ++d) x[d] = xgrid.coord(idx[d], d);
        ExtReal fx = gamma.f.eval(x);
        if (!fx.is_pos_inf()) {
            for (std::size_t j = 0; j < gamma.fg.size(); ++j) {
                ExtReal v = add_upper(fx, gamma.fg.values[j]);
                if (!v.finite() || std::abs(v.raw()) > zero_tol) continue;
                std::vector<double> pt(x.begin(), x.end());
                pt.insert(pt.end(), gamma.fg.pts[j].begin(), gamma.fg.pts[j].end());
                out.pts.push_back(std::move(pt));
            }
        }
        std::size_t d = n;
        while (d > 0 && ++idx[d - 1] == static_cast<std::size_t>(xgrid.points_per_dim))
            idx[--d] = 0;
        if (d == 0) break;
    }
    return out;
}

CompactnessReport recession_of_gamma(const GammaFn& gamma, const GridSpec& xgrid,
                                     const RecessionParams& p) {
    CompactnessReport rep;
    std::size_t n = xgrid.box.dim();
    std::size_t m = gamma.fg.grid.box.dim();

    rep.zero_cloud_empty = gamma_zero_cloud(gamma, xgrid, p.zero_tol).pts.empty();

    // Distinct smallest sampled values of gamma.
    std::vector<double> vals;
    {
        std::vector<std::size_t> idx(n, 0);
        std::vector<double> x(n);
        while (true) {
            for (std::size_t d = 0; d < n; ++d) x[d] = xgrid.coord(idx[d], d);
            ExtReal fx = gamma.f.eval(x);
            if (!fx.is_pos_inf()) {
                for (std::size_t j = 0; j < gamma.fg.size(); ++j) {
                    ExtReal v = add_upper(fx, gamma.fg.values[j]);
                    if (v.finite()) vals.push_back(v.raw());
                }
            }
            std::size_t d = n;
            while (d > 0 && ++idx[d - 1] == static_cast<std::size_t>(xgrid.points_per_dim))
                idx[--d] = 0;
            if (d == 0) break;
        }
    }
    std::sort(vals.begin(), vals.end());
    for (double v : vals) {
        if (static_cast<int>(rep.tested_levels.size()) >= p.levels) break;
        if (rep.tested_levels.empty() ||
            v > rep.tested_levels.back() + p.level_tol * (1.0 + std::abs(v)))
            rep.tested_levels.push_back(v);
    }

    auto candidates = sphere_directions(n + m, p.angular_res_deg, p.seed);
    Box window;
    {
        Box xb = xgrid.box.doubled();
        window.lo = xb.lo;
        window.hi = xb.hi;
        const Box& cb = gamma.fg.grid.box;
        window.lo.insert(window.lo.end(), cb.lo.begin(), cb.lo.end());
        window.hi.insert(window.hi.end(), cb.hi.begin(), cb.hi.end());
    }

    auto intersect_levels = [&](const std::vector<double>& levels, int& used) {
        std::vector<char> mask(candidates.size(), 1);
        used = 0;
        for (double lam : levels) {
            CloudProducer prod = [&gamma, &xgrid, lam, &p](int k) {
                return gamma_level_cloud(gamma, xgrid, lam, k, p.level_tol);
            };
            if (prod(0).pts.empty()) continue;
            ++used;
            std::vector<char> mk = recession_mask(prod, candidates, window, p);
            for (std::size_t c = 0; c < mask.size(); ++c) mask[c] = mask[c] && mk[c];
        }
        DirectionSet ds;
        ds.dim = n + m;
        if (used > 0)
            for (std::size_t c = 0; c < candidates.size(); ++c)
                if (mask[c]) ds.dirs.push_back(candidates[c]);
        return ds;
    };

    int used_levels = 0, used_ladder = 0;
    rep.level_dirs = intersect_levels(rep.tested_levels, used_levels);
    std::vector<double> ladder;
    for (int k = 0; k <= p.ladder_k; ++k) ladder.push_back(std::ldexp(1.0, -k));
    rep.ladder_dirs = intersect_levels(ladder, used_ladder);

    rep.r_gamma = rep.zero_cloud_empty ? rep.ladder_dirs : rep.level_dirs;
    rep.ladder_agree = dirs_equal(rep.level_dirs, rep.ladder_dirs, 2.0);

    double probe_level = 1.0;
    for (double v : rep.tested_levels) probe_level = std::max(probe_level, v);
    CloudProducer widest = [&gamma, &xgrid, probe_level, &p](int k) {
        return gamma_level_cloud(gamma, xgrid, probe_level, k, p.level_tol);
    };
    rep.bounded_probe = cloud_bounded(widest, p);
    rep.equivalence_ok = rep.r_gamma.zero_only() == rep.bounded_probe;

    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "levels tested %d (ladder %d), directions %zu (ladder %zu), zero cloud %s, "
                  "probe %s",
                  used_levels, used_ladder, rep.level_dirs.dirs.size(),
                  rep.ladder_dirs.dirs.size(), rep.zero_cloud_empty ? "empty" : "nonempty",
                  rep.bounded_probe ? "bounded" : "unbounded");
    rep.detail = buf;
    return rep;
}

}  // namespace gcoup
