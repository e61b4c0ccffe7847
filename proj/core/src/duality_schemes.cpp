#include "gcoup/duality_schemes.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>

#include "gcoup/errors.hpp"

namespace gcoup {

namespace {

constexpr double kConsistencyTol = 1e-10;
constexpr int kJointPpd = 61;

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

std::string fmt_ext(ExtReal v) {
    if (v.is_pos_inf()) return "inf";
    if (v.is_neg_inf()) return "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v.raw());
    return buf;
}

ExtReal result_value(const OptResult& r, OptMode mode) {
    switch (r.status) {
        case OptStatus::attained:
            return r.probe_value;
        case OptStatus::divergent:
            return mode == OptMode::sup ? ExtReal::pos_inf() : ExtReal::neg_inf();
        case OptStatus::empty_domain:
            return mode == OptMode::sup ? ExtReal::neg_inf() : ExtReal::pos_inf();
    }
    return ExtReal(0.0);
}

std::vector<std::vector<double>> grid_points(const GridSpec& grid) {
    std::size_t dim = grid.box.dim();
    std::vector<std::vector<double>> out;
    out.reserve(grid.total_points());
    std::vector<std::size_t> idx(dim, 0);
    while (true) {
        std::vector<double> p(dim);
        for (std::size_t d = 0; d < dim; ++d) p[d] = grid.coord(idx[d], d);
        out.push_back(std::move(p));
        std::size_t d = dim;
        while (d > 0 && ++idx[d - 1] == static_cast<std::size_t>(grid.points_per_dim))
            idx[--d] = 0;
        if (d == 0) break;
    }
    return out;
}

}  // namespace

PerturbationReport perturbation_report(const PerturbationScheme& scheme, const ProperFn& f,
                                       const GridSpec& xgrid, const GridSpec& ugrid,
                                       const GridSpec& ustar_grid, double tol,
                                       const EngineLimits& lim) {
    int n = scheme.n, p = scheme.p;
    if (static_cast<int>(scheme.phi.arity()) != n + p)
        throw Error("perturbation_report: phi arity is not n + p");
    if (f.dim() != n || static_cast<int>(xgrid.box.dim()) != n)
        throw Error("perturbation_report: first-slot dimensions disagree");
    if (static_cast<int>(ugrid.box.dim()) != p || static_cast<int>(ustar_grid.box.dim()) != p)
        throw Error("perturbation_report: tilt dimensions disagree");

    PerturbationReport rep;
    char buf[200];

    // phi(., 0) against f.
    {
        bool classes_ok = true;
        double gap = 0.0;
        std::vector<double> env(n + p, 0.0);
        for (const auto& x : grid_points(xgrid)) {
            std::copy(x.begin(), x.end(), env.begin());
            std::fill(env.begin() + n, env.end(), 0.0);
            ExtReal pv = scheme.phi.eval(env);
            ExtReal fv = f.eval(x);
            if (pv.finite() != fv.finite()) {
                classes_ok = false;
                continue;
            }
            if (pv.finite()) gap = std::max(gap, std::abs(pv.raw() - fv.raw()));
        }
        rep.consistency_gap = gap;
        rep.consistent = classes_ok && gap <= kConsistencyTol;
    }

    // Memoized value function. Grows on demand as the outer searches widen.
    std::map<std::vector<double>, ExtReal> hmemo;
    auto hval = [&](std::span<const double> u) -> ExtReal {
        std::vector<double> key(u.begin(), u.end());
        auto it = hmemo.find(key);
        if (it != hmemo.end()) return it->second;
        PointFn inner = [&scheme, n, p, &key](std::span<const double> x) {
            std::vector<double> env(n + p);
            std::copy(x.begin(), x.end(), env.begin());
            std::copy(key.begin(), key.end(), env.begin() + n);
            return scheme.phi.eval(env);
        };
        ExtReal v = result_value(optimize_over_grid(inner, xgrid, OptMode::inf, lim),
                                 OptMode::inf);
        hmemo.emplace(std::move(key), v);
        return v;
    };

    rep.alpha = hval(std::vector<double>(p, 0.0));

    auto ustars = grid_points(ustar_grid);
    std::vector<ExtReal> hstar, joint;
    hstar.reserve(ustars.size());
    joint.reserve(ustars.size());

    for (const auto& us : ustars) {
        PointFn outer = [&](std::span<const double> u) {
            return sub_lower(ExtReal(dot(us, u)), hval(u));
        };
        hstar.push_back(result_value(optimize_over_grid(outer, ugrid, OptMode::sup, lim),
                                     OptMode::sup));
    }

    {
        Box jb;
        jb.lo = xgrid.box.lo;
        jb.hi = xgrid.box.hi;
        jb.lo.insert(jb.lo.end(), ugrid.box.lo.begin(), ugrid.box.lo.end());
        jb.hi.insert(jb.hi.end(), ugrid.box.hi.begin(), ugrid.box.hi.end());
        GridSpec jgrid{jb, kJointPpd, 0};
        for (const auto& us : ustars) {
            PointFn phi2 = [&scheme, &us, n](std::span<const double> q) {
                return sub_lower(ExtReal(dot(us, q.subspan(static_cast<std::size_t>(n)))),
                                 scheme.phi.eval(q));
            };
            joint.push_back(result_value(optimize_over_grid(phi2, jgrid, OptMode::sup, lim),
                                         OptMode::sup));
        }
    }

    rep.beta = ExtReal::pos_inf();
    for (ExtReal v : hstar)
        if (v < rep.beta) rep.beta = v;
    rep.beta_cross = ExtReal::pos_inf();
    for (ExtReal v : joint)
        if (v < rep.beta_cross) rep.beta_cross = v;

    bool pattern = true;
    double hgap = 0.0;
    for (std::size_t i = 0; i < ustars.size(); ++i) {
        if (hstar[i].finite() && joint[i].finite())
            hgap = std::max(hgap, std::abs(hstar[i].raw() - joint[i].raw()));
        else if (hstar[i] != joint[i])
            pattern = false;
    }
    rep.hstar_gap = hgap;
    rep.hstar_matches_joint = pattern && hgap <= tol;

    if (rep.beta.is_pos_inf())
        rep.weak_duality_ok = true;  // dual value -inf
    else if (rep.alpha.is_pos_inf())
        rep.weak_duality_ok = true;
    else if (rep.beta.is_neg_inf())
        rep.weak_duality_ok = false;
    else if (rep.alpha.is_neg_inf())
        rep.weak_duality_ok = false;
    else
        rep.weak_duality_ok = -rep.beta.raw() <= rep.alpha.raw() + tol;

    rep.gap = add_upper(rep.alpha, rep.beta);
    rep.gap_nonneg = rep.gap.is_pos_inf() || (rep.gap.finite() && rep.gap.raw() >= -tol);

    if (rep.beta.finite() && rep.beta_cross.finite())
        rep.beta_cross_ok = std::abs(rep.beta.raw() - rep.beta_cross.raw()) <= tol;
    else
        rep.beta_cross_ok = rep.beta == rep.beta_cross;

    std::snprintf(buf, sizeof buf,
                  "alpha = %s, beta = %s, gap = %s, consistency gap %.3g, conjugate-route gap "
                  "%.3g",
                  fmt_ext(rep.alpha).c_str(), fmt_ext(rep.beta).c_str(),
                  fmt_ext(rep.gap).c_str(), rep.consistency_gap, rep.hstar_gap);
    rep.detail = buf;
    return rep;
}

LagrangianReport lagrangian_dual_report(const ConstrainedProblem& prob, const GridSpec& xgrid,
                                        const GridSpec& lgrid, double tol,
                                        const EngineLimits& lim) {
    int n = prob.n;
    int m = static_cast<int>(prob.h.size());
    if (m == 0) throw Error("lagrangian_dual_report: no constraints");
    if (static_cast<int>(prob.f.arity()) != n)
        throw Error("lagrangian_dual_report: objective arity mismatch");
    for (const auto& hi : prob.h)
        if (static_cast<int>(hi.arity()) != n)
            throw Error("lagrangian_dual_report: constraint arity mismatch");
    if (static_cast<int>(lgrid.box.dim()) != m)
        throw Error("lagrangian_dual_report: multiplier grid dimension mismatch");

    const ExprFn fobj = prob.f;
    const std::vector<ExprFn> hs = prob.h;

    auto slack = [hs](std::span<const double> x, std::vector<double>& y) {
        // y = -h(x); false when some constraint fails or is not finite
        y.resize(hs.size());
        bool feasible = true;
        for (std::size_t i = 0; i < hs.size(); ++i) {
            ExtReal hv = hs[i].eval(x);
            if (!hv.finite() || hv.raw() > 0.0) feasible = false;
            y[i] = hv.finite() ? -hv.raw() : 0.0;
        }
        return feasible;
    };

    ProperFn fbar(n,
                  [fobj, slack](std::span<const double> x) {
                      std::vector<double> y;
                      if (!slack(x, y)) return ExtReal::pos_inf();
                      return fobj.eval(x);
                  },
                  prob.name + "_bar");

    Coupling gl;
    gl.n = n;
    gl.m = m;
    gl.C = SetSpec::make_orthant(m);
    gl.name = "slack_pairing";
    gl.raw = [slack](std::span<const double> x, std::span<const double> ls) {
        std::vector<double> y;
        if (!slack(x, y)) return ExtReal(0.0);
        return ExtReal(dot(ls, y));
    };

    LagrangianReport rep;
    rep.fbar_conj = g_conjugate(fbar, gl, xgrid, lgrid, lim);

    PointFn phi = [&fbar](std::span<const double> x) { return fbar.eval(x); };
    OptResult pr = optimize_over_grid(phi, xgrid, OptMode::inf, lim);
    rep.primal = result_value(pr, OptMode::inf);
    rep.primal_arg = pr.arg;

    ExtReal min_fg = rep.fbar_conj.min_value();
    if (auto j = rep.fbar_conj.argmin_entry()) rep.dual_arg = rep.fbar_conj.pts[*j];
    if (min_fg.finite())
        rep.dual = ExtReal(-min_fg.raw());
    else
        rep.dual = min_fg.is_pos_inf() ? ExtReal::neg_inf() : ExtReal::pos_inf();
    rep.gap = add_upper(rep.primal, min_fg);

    // Direct route: same dot, same subtraction, same scan order as the engine.
    double worst = 0.0;
    auto xpts = grid_points(xgrid);
    std::vector<double> y;
    for (std::size_t j = 0; j < rep.fbar_conj.size(); ++j) {
        const auto& ls = rep.fbar_conj.pts[j];
        ExtReal best = ExtReal::neg_inf();
        bool any = false;
        for (const auto& x : xpts) {
            if (!slack(x, y)) continue;
            ExtReal fv = fobj.eval(x);
            if (!fv.finite()) continue;
            double term = dot(ls, y) - fv.raw();
            if (!any || term > best.raw()) best = ExtReal(term);
            any = true;
        }
        ExtReal engine = rep.fbar_conj.values[j];
        if (!any) {
            if (!engine.is_neg_inf())
                worst = std::numeric_limits<double>::infinity();
            continue;
        }
        if (engine.finite())
            worst = std::max(worst, std::abs(engine.raw() - best.raw()));
        else
            worst = std::numeric_limits<double>::infinity();
    }
    rep.engine_vs_direct = worst;

    rep.detail = "primal = " + fmt_ext(rep.primal) + ", dual = " + fmt_ext(rep.dual) +
                 ", gap = " + fmt_ext(rep.gap);
    return rep;
}

ClassicRecoveryReport classic_recovery_check(const ProperFn& f, const GridSpec& xgrid,
                                             const GridSpec& cgrid, double tol,
                                             const EngineLimits& lim) {
    if (f.dim() != static_cast<int>(xgrid.box.dim()))
        throw Error("classic_recovery_check: grid does not match f");
    std::size_t m = cgrid.box.dim();

    // Sampled classic conjugate.
    auto cpts = grid_points(cgrid);
    std::map<std::vector<double>, ExtReal> table;
    Box hull;
    bool first = true;
    for (const auto& xs : cpts) {
        PointFn phi = [&f, &xs](std::span<const double> x) {
            return sub_lower(ExtReal(dot(xs, x)), f.eval(x));
        };
        ExtReal v = result_value(optimize_over_grid(phi, xgrid, OptMode::sup, lim),
                                 OptMode::sup);
        table.emplace(xs, v);
        if (v.finite()) {
            if (first) {
                hull.lo = xs;
                hull.hi = xs;
                first = false;
            } else {
                for (std::size_t d = 0; d < m; ++d) {
                    hull.lo[d] = std::min(hull.lo[d], xs[d]);
                    hull.hi[d] = std::max(hull.hi[d], xs[d]);
                }
            }
        }
    }
    if (first)
        throw Error("classic_recovery_check: conjugate nowhere finite on the window");

    Coupling g;
    g.n = f.dim();
    g.m = static_cast<int>(m);
    g.C = SetSpec::make_box(hull);
    g.name = "classic_" + f.name();
    ProperFn fcopy = f;
    g.raw = [fcopy, table](std::span<const double> x, std::span<const double> xs) {
        auto it = table.find(std::vector<double>(xs.begin(), xs.end()));
        if (it == table.end() || !it->second.finite()) return ExtReal::pos_inf();
        ExtReal fx = fcopy.eval(x);
        if (!fx.finite()) return ExtReal(0.0);
        return ExtReal(fx.raw() + it->second.raw());
    };

    ClassicRecoveryReport rep;
    SampledFn fg = g_conjugate(f, g, xgrid, cgrid, lim);

    bool pattern = true;
    double diff = 0.0;
    for (std::size_t j = 0; j < fg.size(); ++j) {
        auto it = table.find(fg.pts[j]);
        if (it == table.end()) {
            pattern = false;
            continue;
        }
        ExtReal tv = it->second, cv = fg.values[j];
        if (tv.finite() && cv.finite())
            diff = std::max(diff, std::abs(tv.raw() - cv.raw()));
        else if (tv != cv)
            pattern = false;
    }
    rep.max_diff = diff;
    rep.pattern_match = pattern;
    rep.recovered = pattern && diff <= tol;

    rep.member = membership_Ff(make_gamma(f, fg), xgrid, tol, lim).member;

    PointFn phi = [&f](std::span<const double> x) { return f.eval(x); };
    ExtReal inf_f = result_value(optimize_over_grid(phi, xgrid, OptMode::inf, lim),
                                 OptMode::inf);
    auto t0 = table.find(std::vector<double>(m, 0.0));
    if (t0 != table.end() && t0->second.finite() && inf_f.finite())
        rep.no_gap = std::abs(inf_f.raw() + t0->second.raw()) <= tol;
    rep.member_iff_no_gap = rep.member == rep.no_gap;

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "table recovery gap %.3g, member %d, classic gap closed %d", rep.max_diff,
                  (int)rep.member, (int)rep.no_gap);
    rep.detail = buf;
    return rep;
}

}  // namespace gcoup
