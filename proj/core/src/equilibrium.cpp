#include "gcoup/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "gcoup/errors.hpp"

namespace gcoup {

namespace {

constexpr double kMemberTol = 1e-9;

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
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

// f(x, .) extended by the K indicator, as a function of y alone.
ProperFn slice_at(const EPInstance& inst, std::span<const double> x) {
    std::vector<double> xv(x.begin(), x.end());
    ExprFn f = inst.f;
    SetSpec K = inst.K;
    int n = inst.n;
    return ProperFn(n,
                    [xv, f, K, n](std::span<const double> y) {
                        if (!K.contains(y, kMemberTol)) return ExtReal::pos_inf();
                        std::vector<double> env(2 * n);
                        std::copy(xv.begin(), xv.end(), env.begin());
                        std::copy(y.begin(), y.end(), env.begin() + n);
                        return f.eval(env);
                    },
                    inst.name + "_slice");
}

ExtReal classic_conjugate_at(const ProperFn& fn, std::span<const double> xstar,
                             const GridSpec& ygrid, const EngineLimits& lim) {
    std::vector<double> xs(xstar.begin(), xstar.end());
    PointFn phi = [&fn, xs](std::span<const double> y) {
        return sub_lower(ExtReal(dot(xs, y)), fn.eval(y));
    };
    return result_value(optimize_over_grid(phi, ygrid, OptMode::sup, lim), OptMode::sup);
}

std::mt19937_64 seeded(unsigned seed) { return std::mt19937_64(0x9e3779b97f4a7c15ull ^ seed); }

}  // namespace

EPValidation validate_ep(const EPInstance& inst, const GridSpec& kgrid, double tol,
                         int segments, unsigned seed) {
    if (static_cast<int>(inst.f.arity()) != 2 * inst.n)
        throw Error("validate_ep: bifunction arity is not 2n");
    EPValidation rep;

    auto fp = points_in(inst.K, kgrid);
    std::vector<double> env(2 * inst.n);
    for (const auto& x : fp.pts) {
        std::copy(x.begin(), x.end(), env.begin());
        std::copy(x.begin(), x.end(), env.begin() + inst.n);
        ExtReal v = inst.f.eval(env);
        if (!v.finite()) {
            rep.diagonal_max = std::numeric_limits<double>::infinity();
            break;
        }
        rep.diagonal_max = std::max(rep.diagonal_max, std::abs(v.raw()));
    }
    rep.diagonal_ok = !fp.pts.empty() && rep.diagonal_max <= tol;

    auto rng = seeded(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Box sb = inst.K.sampling_box(kgrid.box.max_corner_norm());
    auto draw_in_K = [&](std::vector<double>& out) {
        for (int tries = 0; tries < 64; ++tries) {
            for (std::size_t d = 0; d < sb.dim(); ++d)
                out[d] = sb.lo[d] + unit(rng) * (sb.hi[d] - sb.lo[d]);
            if (inst.K.contains(out, kMemberTol)) return true;
        }
        return false;
    };
    std::vector<double> x(inst.n), ya(inst.n), yb(inst.n), ym(inst.n);
    int done = 0;
    for (int s = 0; s < segments; ++s) {
        if (!draw_in_K(x) || !draw_in_K(ya) || !draw_in_K(yb)) continue;
        for (int d = 0; d < inst.n; ++d) ym[d] = 0.5 * (ya[d] + yb[d]);
        auto at = [&](const std::vector<double>& y) {
            std::copy(x.begin(), x.end(), env.begin());
            std::copy(y.begin(), y.end(), env.begin() + inst.n);
            return inst.f.eval(env);
        };
        ExtReal va = at(ya), vb = at(yb), vm = at(ym);
        if (!va.finite() || !vb.finite()) continue;
        ++done;
        double bound = 0.5 * (va.raw() + vb.raw());
        double slack = tol * (1.0 + std::abs(va.raw()) + std::abs(vb.raw()));
        if (vm.finite() ? vm.raw() > bound + slack : vm.is_pos_inf()) rep.y_convex_ok = false;
    }
    rep.segments = done;

    char buf[160];
    std::snprintf(buf, sizeof buf, "diagonal max %.3g over %zu points, %d convexity segments",
                  rep.diagonal_max, fp.pts.size(), done);
    rep.detail = buf;
    return rep;
}

ExtReal ep_residual(const EPInstance& inst, std::span<const double> x, const GridSpec& ygrid,
                    const EngineLimits& lim) {
    if (!inst.K.contains(x, kMemberTol)) throw Error("ep_residual: x is outside K");
    ProperFn fx = slice_at(inst, x);
    PointFn phi = [&fx](std::span<const double> y) { return fx.eval(y); };
    return result_value(optimize_over_grid(phi, ygrid, OptMode::inf, lim), OptMode::inf);
}

ExtReal ep_gap(const EPInstance& inst, std::span<const double> x, const GridSpec& ygrid,
               const EngineLimits& lim) {
    ExtReal r = ep_residual(inst, x, ygrid, lim);
    if (r.finite()) return ExtReal(-r.raw());
    return r.is_pos_inf() ? ExtReal::neg_inf() : ExtReal::pos_inf();
}

IkResult ik_and_Kstar(const SetSpec& K, std::span<const double> xstar, const GridSpec& kgrid,
                      const EngineLimits& lim) {
    IkResult out;
    if (auto cf = K.support_inf(xstar)) {
        out.ik = *cf;
        out.closed_form = true;
    } else {
        std::vector<double> xs(xstar.begin(), xstar.end());
        PointFn phi = [&K, xs](std::span<const double> y) {
            if (!K.contains(y, kMemberTol)) return ExtReal::pos_inf();
            return ExtReal(dot(xs, y));
        };
        out.ik = result_value(optimize_over_grid(phi, kgrid, OptMode::inf, lim), OptMode::inf);
    }
    out.in_Kstar = out.ik.finite() ? out.ik.raw() >= -1e-12 : out.ik.is_pos_inf();
    return out;
}

ZdgpReport zdgp_check(const EPInstance& inst, const std::vector<std::vector<double>>& xs,
                      const GridSpec& ygrid, const GridSpec& cgrid, double tol,
                      const EngineLimits& lim) {
    BuiltinArgs ba;
    ba.n = inst.n;
    ba.m = inst.n;
    ba.K = inst.K;
    Coupling g_inner = builtin_coupling("cone_inner", ba);
    Coupling g_shift = builtin_coupling("ik_shifted", ba);

    ZdgpReport rep;
    rep.all_ok = true;
    rep.fenchel_ok = true;

    for (const auto& x : xs) {
        ZdgpRow row;
        row.x = x;
        row.residual = ep_residual(inst, x, ygrid, lim);
        ProperFn fx = slice_at(inst, x);

        SampledFn fg_i = g_conjugate(fx, g_inner, ygrid, cgrid, lim);
        SampledFn fg_s = g_conjugate(fx, g_shift, ygrid, cgrid, lim);
        row.min_fg_inner = fg_i.min_value();
        row.min_fg_shifted = fg_s.min_value();

        auto gap_of = [&](ExtReal m) {
            ExtReal s = add_upper(row.residual, m);
            return s.finite() ? std::abs(s.raw()) : std::numeric_limits<double>::infinity();
        };
        row.zdgp_inner = gap_of(row.min_fg_inner);
        row.zdgp_shifted = gap_of(row.min_fg_shifted);
        row.ok_inner = row.zdgp_inner <= tol;
        row.ok_shifted = row.zdgp_shifted <= tol;

        double floor = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < fg_s.size(); ++j) {
            IkResult ik = ik_and_Kstar(inst.K, fg_s.pts[j], ygrid, lim);
            ExtReal classic = classic_conjugate_at(fx, fg_s.pts[j], ygrid, lim);
            if (classic.finite() && ik.ik.finite()) {
                floor = std::min(floor, classic.raw() - ik.ik.raw());
                if (fg_s.values[j].finite()) {
                    row.shift_identity_gap =
                        std::max(row.shift_identity_gap,
                                 std::abs(fg_s.values[j].raw() + ik.ik.raw() - classic.raw()));
                } else {
                    row.shift_identity_gap = std::numeric_limits<double>::infinity();
                }
            } else if (classic != fg_s.values[j] && !(classic.is_pos_inf() &&
                                                      fg_s.values[j].is_pos_inf())) {
                row.shift_identity_gap = std::numeric_limits<double>::infinity();
            }
        }
        row.fenchel_floor = floor;
        if (floor < -tol) rep.fenchel_ok = false;

        rep.worst_zdgp = std::max({rep.worst_zdgp, row.zdgp_inner, row.zdgp_shifted});
        rep.worst_shift = std::max(rep.worst_shift, row.shift_identity_gap);
        if (!row.ok_inner || !row.ok_shifted) rep.all_ok = false;
        rep.rows.push_back(std::move(row));
    }

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "%zu points, worst gap-closure residue %.3g, worst shift identity %.3g",
                  rep.rows.size(), rep.worst_zdgp, rep.worst_shift);
    rep.detail = buf;
    return rep;
}

CertificateResult ep_solution_certificate(const EPInstance& inst, std::span<const double> xbar,
                                          const GridSpec& ygrid, const GridSpec& cgrid,
                                          double tol, const EngineLimits& lim) {
    CertificateResult out;
    ProperFn fx = slice_at(inst, xbar);
    auto fp = points_in(SetSpec::dual_cone_of(inst.K), cgrid);
    out.scanned = fp.pts.size();
    for (const auto& xs : fp.pts) {
        IkResult ik = ik_and_Kstar(inst.K, xs, ygrid, lim);
        ExtReal classic = classic_conjugate_at(fx, xs, ygrid, lim);
        if (!classic.finite() || !ik.ik.finite()) continue;
        double d = std::abs(classic.raw() - ik.ik.raw());
        if (d <= tol) {
            if (!out.found) {
                out.found = true;
                out.xstar = xs;
                out.diff = d;
            }
            ++out.matches;
        }
    }
    char buf[160];
    if (out.found)
        std::snprintf(buf, sizeof buf, "certificate at first of %zu matching window points",
                      out.matches);
    else
        std::snprintf(buf, sizeof buf, "no certificate among %zu window points", out.scanned);
    out.detail = buf;
    return out;
}

EPInstance vip_as_ep(const VIPInstance& inst) {
    int n = inst.n;
    if (static_cast<int>(inst.M.size()) != n || static_cast<int>(inst.q.size()) != n)
        throw Error("vip_as_ep: M or q dimension mismatch");
    for (const auto& r : inst.M)
        if (static_cast<int>(r.size()) != n) throw Error("vip_as_ep: M is not square");

    std::string text;
    std::vector<std::string> vars;
    for (int i = 1; i <= n; ++i) vars.push_back("x" + std::to_string(i));
    for (int i = 1; i <= n; ++i) vars.push_back("y" + std::to_string(i));
    char num[40];
    for (int i = 0; i < n; ++i) {
        if (i) text += " + ";
        text += "(";
        for (int j = 0; j < n; ++j) {
            if (j) text += " + ";
            std::snprintf(num, sizeof num, "(%.17g)", inst.M[i][j]);
            text += std::string(num) + "*x" + std::to_string(j + 1);
        }
        std::snprintf(num, sizeof num, " + (%.17g)", inst.q[i]);
        text += num;
        text += ")*(y" + std::to_string(i + 1) + " - x" + std::to_string(i + 1) + ")";
    }

    EPInstance ep;
    ep.K = inst.K;
    ep.f = ExprFn::parse(text, vars);
    ep.n = n;
    ep.name = inst.name;
    return ep;
}

ExtReal vip_gap(const VIPInstance& inst, std::span<const double> x, const GridSpec& ygrid,
                const EngineLimits& lim) {
    return ep_gap(vip_as_ep(inst), x, ygrid, lim);
}

MonotonicityReport vip_monotone_scan(const VIPInstance& inst, int samples, unsigned seed,
                                     double tol) {
    MonotonicityReport rep;
    rep.samples = samples;
    rep.min_quad = std::numeric_limits<double>::infinity();
    auto rng = seeded(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    int n = inst.n;
    std::vector<double> z(n);
    for (int s = 0; s < samples; ++s) {
        double nn = 0.0;
        for (int d = 0; d < n; ++d) {
            z[d] = gauss(rng);
            nn += z[d] * z[d];
        }
        if (nn < 1e-12) continue;
        nn = std::sqrt(nn);
        for (int d = 0; d < n; ++d) z[d] /= nn;
        double quad = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) quad += z[i] * inst.M[i][j] * z[j];
        rep.min_quad = std::min(rep.min_quad, quad);
    }
    rep.monotone = rep.min_quad >= -tol;
    char buf[120];
    std::snprintf(buf, sizeof buf, "min unit quadratic form %.3g over %d samples", rep.min_quad,
                  samples);
    rep.detail = buf;
    return rep;
}

ExtReal epvip_gap(const EPVIPInstance& inst, std::span<const double> x, const GridSpec& ygrid,
                  const EngineLimits& lim) {
    int n = inst.n;
    if (inst.F.size() != inst.eta.size())
        throw Error("epvip_gap: F and eta length mismatch");
    if (!inst.K.contains(x, kMemberTol)) throw Error("epvip_gap: x is outside K");
    ExtReal hx = inst.h.eval(x);
    if (!hx.finite()) throw Error("epvip_gap: h is not finite at x");

    std::vector<double> fvals(inst.F.size());
    for (std::size_t i = 0; i < inst.F.size(); ++i) {
        ExtReal v = inst.F[i].eval(x);
        if (!v.finite()) throw Error("epvip_gap: F is not finite at x");
        fvals[i] = v.raw();
    }

    std::vector<double> xv(x.begin(), x.end());
    PointFn phi = [&, xv](std::span<const double> y) -> ExtReal {
        if (!inst.K.contains(y, kMemberTol)) return ExtReal::pos_inf();
        ExtReal hy = inst.h.eval(y);
        if (!hy.finite()) return ExtReal::pos_inf();
        std::vector<double> env(2 * n);
        std::copy(xv.begin(), xv.end(), env.begin());
        std::copy(y.begin(), y.end(), env.begin() + n);
        double s = 0.0;
        for (std::size_t i = 0; i < inst.eta.size(); ++i) {
            ExtReal e = inst.eta[i].eval(env);
            if (!e.finite()) return ExtReal::pos_inf();
            s += fvals[i] * e.raw();
        }
        return ExtReal(s + hy.raw() - hx.raw());
    };
    ExtReal r = result_value(optimize_over_grid(phi, ygrid, OptMode::inf, lim), OptMode::inf);
    if (r.finite()) return ExtReal(-r.raw());
    return r.is_pos_inf() ? ExtReal::neg_inf() : ExtReal::pos_inf();
}

}  // namespace gcoup
