#include "gcoup/conjugate.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "gcoup/errors.hpp"

namespace gcoup {

namespace {

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}

std::string fmt_ext(ExtReal v) {
    if (v.is_pos_inf()) return "inf";
    if (v.is_neg_inf()) return "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v.raw());
    return buf;
}

}  // namespace

std::optional<std::size_t> SampledFn::find_point(std::span<const double> p, double tol) const {
    for (std::size_t j = 0; j < pts.size(); ++j) {
        if (pts[j].size() != p.size()) continue;
        bool hit = true;
        for (std::size_t d = 0; d < p.size() && hit; ++d)
            hit = std::abs(pts[j][d] - p[d]) <= tol;
        if (hit) return j;
    }
    return std::nullopt;
}

bool SampledFn::proper() const {
    bool saw_finite = false;
    for (ExtReal v : values) {
        if (v.is_neg_inf()) return false;
        saw_finite = saw_finite || v.finite();
    }
    return saw_finite;
}

ExtReal SampledFn::min_value() const {
    ExtReal m = ExtReal::pos_inf();
    for (ExtReal v : values)
        if (v < m) m = v;
    return m;
}

std::optional<std::size_t> SampledFn::argmin_entry() const {
    std::optional<std::size_t> best;
    for (std::size_t j = 0; j < values.size(); ++j)
        if (!best || values[j] < values[*best]) best = j;
    return best;
}

SampledFn g_conjugate(const ProperFn& f, const Coupling& g, const GridSpec& xgrid,
                      const GridSpec& cgrid, const EngineLimits& lim) {
    if (f.dim() != g.n || static_cast<int>(xgrid.box.dim()) != g.n)
        throw GridError("g_conjugate: first-slot dimensions disagree");
    if (static_cast<int>(cgrid.box.dim()) != g.m)
        throw GridError("g_conjugate: second-slot grid does not match the coupling");

    FilteredPoints ret = points_in(g.C, cgrid);
    SampledFn out;
    out.grid = cgrid;
    out.domain = g.C;
    out.flat = ret.flat_index;
    out.pts = ret.pts;
    out.name = f.name() + "^" + g.name;
    out.values.reserve(out.pts.size());
    out.statuses.reserve(out.pts.size());

    for (const auto& xs : out.pts) {
        std::span<const double> xss(xs);
        PointFn phi = [&g, &f, xss](std::span<const double> x) {
            return sub_lower(g.eval(x, xss), f.eval(x));
        };
        OptResult r = optimize_over_grid(phi, xgrid, OptMode::sup, lim);
        switch (r.status) {
            case OptStatus::attained:
                out.values.push_back(r.probe_value);
                break;
            case OptStatus::divergent:
                out.values.push_back(ExtReal::pos_inf());
                break;
            case OptStatus::empty_domain:
                out.values.push_back(ExtReal::neg_inf());
                break;
        }
        out.statuses.push_back(r.status);
    }
    return out;
}

SampledFn g_biconjugate(const Coupling& g, const GridSpec& xgrid, const SampledFn& fg,
                        const EngineLimits& lim) {
    if (static_cast<int>(xgrid.box.dim()) != g.n)
        throw GridError("g_biconjugate: grid does not match the coupling's first slot");
    if (static_cast<int>(fg.grid.box.dim()) != g.m)
        throw GridError("g_biconjugate: conjugate lives on the wrong slot");
    xgrid.validate(lim.point_cap);

    SampledFn out;
    out.grid = xgrid;
    out.name = fg.name + "^" + g.name;
    std::size_t total = xgrid.total_points();
    out.flat.reserve(total);
    out.pts.reserve(total);
    out.values.reserve(total);
    out.statuses.reserve(total);

    std::size_t dim = xgrid.box.dim();
    std::vector<std::size_t> idx(dim, 0);
    std::vector<double> x(dim);
    long flat = 0;
    while (true) {
        for (std::size_t d = 0; d < dim; ++d) x[d] = xgrid.coord(idx[d], d);
        ExtReal best = ExtReal::neg_inf();
        bool any = false;
        for (std::size_t j = 0; j < fg.size(); ++j) {
            ExtReal term = sub_lower(g.eval(x, fg.pts[j]), fg.values[j]);
            if (term.is_neg_inf()) continue;
            if (!any || term > best) best = term;
            any = true;
        }
        out.flat.push_back(flat++);
        out.pts.push_back(x);
        out.values.push_back(any ? best : ExtReal::neg_inf());
        out.statuses.push_back(any ? OptStatus::attained : OptStatus::empty_domain);

        std::size_t d = dim;
        while (d > 0 && ++idx[d - 1] == static_cast<std::size_t>(xgrid.points_per_dim))
            idx[--d] = 0;
        if (d == 0) break;
    }
    return out;
}

ExtReal GammaFn::at(std::span<const double> x, std::size_t entry) const {
    return add_upper(f.eval(x), fg.values[entry]);
}

ExtReal GammaFn::eval(std::span<const double> x, std::span<const double> xstar,
                      double coord_tol) const {
    auto j = fg.find_point(xstar, coord_tol);
    if (!j) return ExtReal::pos_inf();
    return at(x, *j);
}

GammaFn make_gamma(const ProperFn& f, const SampledFn& fg) { return GammaFn{f, fg}; }

MembershipReport membership_Ff(const GammaFn& gamma, const GridSpec& xgrid, double tol,
                               const EngineLimits& lim) {
    MembershipReport rep;
    rep.fg_proper = gamma.fg.proper();

    const ProperFn& f = gamma.f;
    PointFn phi = [&f](std::span<const double> x) { return f.eval(x); };
    OptResult r = optimize_over_grid(phi, xgrid, OptMode::inf, lim);
    switch (r.status) {
        case OptStatus::attained:
            rep.inf_f = r.probe_value;
            if (r.arg) rep.witness_x = *r.arg;
            break;
        case OptStatus::divergent:
            rep.inf_f = ExtReal::neg_inf();
            break;
        case OptStatus::empty_domain:
            rep.inf_f = ExtReal::pos_inf();
            break;
    }

    rep.min_fg = gamma.fg.min_value();
    if (auto j = gamma.fg.argmin_entry()) rep.witness_xstar = gamma.fg.pts[*j];

    rep.inf_gamma = add_upper(rep.inf_f, rep.min_fg);
    rep.member = rep.fg_proper && rep.inf_gamma.finite() &&
                 std::abs(rep.inf_gamma.raw()) <= tol;
    rep.detail = "inf f = " + fmt_ext(rep.inf_f) + ", min fg = " + fmt_ext(rep.min_fg) +
                 ", inf gamma = " + fmt_ext(rep.inf_gamma) +
                 (rep.fg_proper ? "" : ", fg not proper");
    return rep;
}

DualityReport duality_report(const ProperFn& f, const SampledFn& fgg, double tol,
                             const EngineLimits& lim) {
    DualityReport rep;
    PointFn phi = [&f](std::span<const double> x) { return f.eval(x); };
    OptResult r = optimize_over_grid(phi, fgg.grid, OptMode::inf, lim);
    switch (r.status) {
        case OptStatus::attained:
            rep.inf_f = r.probe_value;
            rep.argmin_f = r.arg;
            break;
        case OptStatus::divergent:
            rep.inf_f = ExtReal::neg_inf();
            break;
        case OptStatus::empty_domain:
            rep.inf_f = ExtReal::pos_inf();
            break;
    }

    rep.inf_fgg = fgg.min_value();
    if (auto j = fgg.argmin_entry()) rep.argmin_fgg = fgg.pts[*j];

    if (rep.inf_f.finite() && rep.inf_fgg.finite())
        rep.identity_gap = std::abs(rep.inf_f.raw() - rep.inf_fgg.raw());
    else if (rep.inf_f == rep.inf_fgg)
        rep.identity_gap = 0.0;
    else
        rep.identity_gap = std::numeric_limits<double>::infinity();
    rep.identity_ok = rep.identity_gap <= tol;

    rep.transfer_ok = true;
    if (rep.argmin_f && rep.inf_fgg.finite()) {
        auto j = fgg.find_point(*rep.argmin_f);
        rep.transfer_ok = j && fgg.values[*j].finite() &&
                          std::abs(fgg.values[*j].raw() - rep.inf_fgg.raw()) <= tol;
    }
    rep.detail = "inf f = " + fmt_ext(rep.inf_f) + ", inf fgg = " + fmt_ext(rep.inf_fgg);
    return rep;
}

DualAttainment dual_attainment(const ProperFn& f, const Coupling& g, const GridSpec& xgrid,
                               const SampledFn& fg, double tol, const EngineLimits& lim) {
    DualAttainment rep;
    rep.dual_value = fg.min_value();
    if (!rep.dual_value.finite()) {
        rep.detail = fg.size() == 0 ? "no entries in C" : "no finite minimum";
        return rep;
    }

    // Among near-minimal entries prefer the smallest Euclidean norm; the
    // ascending scan settles norm ties on the lowest grid index.
    double cut = rep.dual_value.raw() + tol;
    std::optional<std::size_t> pick;
    double best_norm = 0.0;
    for (std::size_t j = 0; j < fg.size(); ++j) {
        if (!fg.values[j].finite() || fg.values[j].raw() > cut) continue;
        double nj = norm2(fg.pts[j]);
        if (!pick || nj < best_norm - 1e-12) pick = j, best_norm = nj;
    }
    rep.xstar = fg.pts[*pick];

    GridSpec wide = fg.grid;
    wide.box = fg.grid.box.doubled();
    SampledFn fg2 = g_conjugate(f, g, xgrid, wide, lim);
    ExtReal m2 = fg2.min_value();
    rep.improved_when_widened =
        m2 < ExtReal(rep.dual_value.raw() - std::max(tol * 0.01, 1e-15));
    rep.attained = !rep.improved_when_widened;
    rep.detail = "min fg = " + fmt_ext(rep.dual_value) + ", doubled-window min = " + fmt_ext(m2);
    return rep;
}

ClosureReport closure_experiment(const std::vector<ProperFn>& fs, const std::vector<Coupling>& gs,
                                 const ProperFn& f, const Coupling& g, const GridSpec& xgrid,
                                 const GridSpec& cgrid, double tol, const EngineLimits& lim) {
    if (fs.size() != gs.size())
        throw Error("closure_experiment: sequence lengths disagree");
    ClosureReport rep;
    SampledFn fgl = g_conjugate(f, g, xgrid, cgrid, lim);

    for (std::size_t k = 0; k < fs.size(); ++k) {
        SampledFn fgk = g_conjugate(fs[k], gs[k], xgrid, cgrid, lim);
        ClosureStep step;

        // Walk the two sorted retained-index lists together; an index present
        // on one side only is already a pattern break.
        std::size_t a = 0, b = 0;
        while (a < fgl.size() || b < fgk.size()) {
            if (a < fgl.size() && b < fgk.size() && fgl.flat[a] == fgk.flat[b]) {
                ExtReal va = fgl.values[a], vb = fgk.values[b];
                if (va.finite() && vb.finite())
                    step.sup_diff = std::max(step.sup_diff, std::abs(va.raw() - vb.raw()));
                else if (va != vb)
                    step.pattern_match = false;
                ++a, ++b;
            } else if (b >= fgk.size() || (a < fgl.size() && fgl.flat[a] < fgk.flat[b])) {
                step.pattern_match = false;
                ++a;
            } else {
                step.pattern_match = false;
                ++b;
            }
        }

        GammaFn gam = make_gamma(fs[k], fgk);
        step.member = membership_Ff(gam, xgrid, tol, lim).member;
        rep.steps.push_back(step);
    }

    if (!rep.steps.empty()) {
        rep.limit_sup_diff = rep.steps.back().sup_diff;
        rep.pattern_converges = rep.steps.back().pattern_match;
        for (std::size_t k = 0; k + 1 < rep.steps.size(); ++k)
            if (rep.steps[k + 1].sup_diff > rep.steps[k].sup_diff + 1e-9)
                rep.decreasing = false;
    }
    return rep;
}

}  // namespace gcoup
