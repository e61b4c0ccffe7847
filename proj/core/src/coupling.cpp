#include "gcoup/coupling.hpp"

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

bool all_nonneg(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double c) { return c >= 0.0; });
}

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double c : v) s += c * c;
    return std::sqrt(s);
}

std::string fmt_point(std::span<const double> v) {
    std::string out = "(";
    char buf[40];
    for (std::size_t i = 0; i < v.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.6g", v[i]);
        if (i) out += ", ";
        out += buf;
    }
    out += ")";
    return out;
}

int resolve_dim(int requested, int fallback, const char* what) {
    if (requested == 0) return fallback;
    if (requested < 1) throw Error(std::string("builtin_coupling: bad ") + what);
    return requested;
}

}  // namespace

ExtReal Coupling::eval(std::span<const double> x, std::span<const double> xstar) const {
    if (static_cast<int>(x.size()) != n || static_cast<int>(xstar.size()) != m)
        throw Error("Coupling::eval: dimension mismatch for " + name);
    if (!C.contains(xstar, kMemberTol)) return ExtReal::pos_inf();
    return raw(x, xstar);
}

Coupling builtin_coupling(const std::string& name, const BuiltinArgs& args) {
    Coupling g;
    g.name = name;

    if (name == "exp") {
        if ((args.n != 0 && args.n != 1) || (args.m != 0 && args.m != 1))
            throw Error("builtin_coupling: exp is one dimensional");
        g.n = g.m = 1;
        g.C = SetSpec::make_full(1);
        g.raw = [](std::span<const double> x, std::span<const double> xs) {
            return ExtReal(std::exp(x[0] + xs[0]));
        };
        return g;
    }

    if (name == "square_product") {
        if ((args.n != 0 && args.n != 1) || (args.m != 0 && args.m != 1))
            throw Error("builtin_coupling: square_product is one dimensional");
        g.n = g.m = 1;
        g.C = SetSpec::make_full(1);
        g.raw = [](std::span<const double> x, std::span<const double> xs) {
            double p = x[0] * xs[0];
            return ExtReal(p * p);
        };
        return g;
    }

    if (name == "reciprocal") {
        if ((args.n != 0 && args.n != 1) || (args.m != 0 && args.m != 1))
            throw Error("builtin_coupling: reciprocal is one dimensional");
        g.n = g.m = 1;
        g.C = SetSpec::make_orthant(1);
        g.raw = [](std::span<const double> x, std::span<const double> xs) {
            if (x[0] >= 0.0) return ExtReal(1.0 / (x[0] * xs[0] + 1.0));
            return ExtReal(0.0);
        };
        return g;
    }

    if (name == "norm_on_dom") {
        if (!args.dom_of)
            throw Error("builtin_coupling: norm_on_dom needs dom_of");
        ProperFn f = *args.dom_of;
        g.n = resolve_dim(args.n, f.dim(), "n");
        if (g.n != f.dim())
            throw Error("builtin_coupling: norm_on_dom n must match dom_of");
        g.m = resolve_dim(args.m, 1, "m");
        g.C = SetSpec::make_full(g.m);
        g.raw = [f](std::span<const double> x, std::span<const double> xs) {
            if (f.in_dom(x)) return ExtReal(norm2(xs));
            return ExtReal(0.0);
        };
        return g;
    }

    if (name == "max_dot" || name == "min_dot") {
        int n = resolve_dim(args.n, resolve_dim(args.m, 1, "m"), "n");
        if (args.m != 0 && args.m != n)
            throw Error("builtin_coupling: " + name + " needs n == m");
        g.n = g.m = n;
        g.C = SetSpec::make_orthant(n);
        if (name == "max_dot") {
            g.raw = [](std::span<const double> x, std::span<const double> xs) {
                if (!all_nonneg(x)) return ExtReal(0.0);
                double best = 0.0;
                bool first = true;
                for (std::size_t i = 0; i < x.size(); ++i) {
                    double t = xs[i] * x[i];
                    if (first || t > best) best = t, first = false;
                }
                return ExtReal(best);
            };
        } else {
            // min runs over the strictly positive entries of xstar; an empty
            // support contributes 0.
            g.raw = [](std::span<const double> x, std::span<const double> xs) {
                if (!all_nonneg(x)) return ExtReal(0.0);
                double best = 0.0;
                bool first = true;
                for (std::size_t i = 0; i < x.size(); ++i) {
                    if (xs[i] <= 0.0) continue;
                    double t = xs[i] * x[i];
                    if (first || t < best) best = t, first = false;
                }
                return ExtReal(first ? 0.0 : best);
            };
        }
        return g;
    }

    if (name == "lagrangian_g1") {
        int m = resolve_dim(args.m, resolve_dim(args.n, 1, "n"), "m");
        if (args.n != 0 && args.n != m)
            throw Error("builtin_coupling: lagrangian_g1 pairs y with lambda* of equal length");
        g.n = g.m = m;
        g.C = SetSpec::make_orthant(m);
        g.raw = [](std::span<const double> y, std::span<const double> ls) {
            if (all_nonneg(y)) return ExtReal(dot(ls, y));
            return ExtReal(0.0);
        };
        return g;
    }

    if (name == "cone_inner") {
        if (!args.K) throw Error("builtin_coupling: cone_inner needs K");
        SetSpec K = *args.K;
        int n = K.dim();
        if ((args.n != 0 && args.n != n) || (args.m != 0 && args.m != n))
            throw Error("builtin_coupling: cone_inner dims come from K");
        g.n = g.m = n;
        g.C = SetSpec::dual_cone_of(K);
        g.raw = [K](std::span<const double> y, std::span<const double> xs) {
            if (K.contains(y, kMemberTol)) return ExtReal(dot(xs, y));
            return ExtReal(0.0);
        };
        return g;
    }

    if (name == "ik_shifted") {
        if (!args.K) throw Error("builtin_coupling: ik_shifted needs K");
        SetSpec K = *args.K;
        int n = K.dim();
        if ((args.n != 0 && args.n != n) || (args.m != 0 && args.m != n))
            throw Error("builtin_coupling: ik_shifted dims come from K");
        // Finiteness set of the support infimum: dual cone of the recession
        // cone. A bounded K (box) leaves the whole space.
        SetSpec rec = K.recession_cone();
        SetSpec C = rec.kind() == SetKind::box ? SetSpec::make_full(n)
                                               : SetSpec::dual_cone_of(rec);
        if (!K.support_inf(std::vector<double>(n, 0.0)))
            throw Error("builtin_coupling: ik_shifted needs closed-form support for K");
        g.n = g.m = n;
        g.C = C;
        g.raw = [K](std::span<const double> y, std::span<const double> xs) {
            auto ik = K.support_inf(xs);
            if (!ik || ik->is_neg_inf()) return ExtReal::pos_inf();
            if (K.contains(y, kMemberTol)) return ExtReal(dot(xs, y) - ik->raw());
            return ExtReal(0.0);
        };
        return g;
    }

    throw Error("builtin_coupling: unknown name " + name);
}

const std::vector<std::pair<std::string, std::string>>& builtin_catalog() {
    static const std::vector<std::pair<std::string, std::string>> cat = {
        {"exp", "exp(x + x*) on the whole line; strictly positive, so no zero pair exists"},
        {"square_product", "(x * x*)^2 on the whole line; pairs with x^2 in the quadratic example"},
        {"reciprocal",
         "1/(x*x* + 1) on the nonnegative quadrant, 0 for x < 0; the positive-gap example"},
        {"norm_on_dom",
         "||x*|| when x lies in dom f, else 0; gives f^g = ||x*|| - inf f for bounded-below f"},
        {"max_dot", "max_i x*_i x_i on the nonnegative orthant, 0 off it; homogeneous, increasing"},
        {"min_dot",
         "min of x*_i x_i over the positive support of x*, empty support giving 0; orthant based"},
        {"lagrangian_g1",
         "<lambda*, y> when y >= 0, else 0; composed with -h(x) it rebuilds the Lagrangian dual"},
        {"cone_inner", "<x*, y> when y lies in K, else 0; second slot lives in the dual cone of K"},
        {"ik_shifted",
         "<x*, y> minus the support infimum of K when y in K, else 0; second slot where that "
         "infimum is finite"},
    };
    return cat;
}

CouplingValidation validate_coupling(const Coupling& g, const GridSpec& xgrid,
                                     const GridSpec& cgrid, double tol, int segments,
                                     std::uint64_t seed, const EngineLimits& lim) {
    if (static_cast<int>(xgrid.box.dim()) != g.n || static_cast<int>(cgrid.box.dim()) != g.m)
        throw GridError("validate_coupling: grid dims do not match coupling");

    CouplingValidation rep;
    char buf[160];

    // Thin each grid to a few hundred probe points so the pair loop stays
    // cheap in any dimension.
    auto thin = [](const GridSpec& grid) {
        int dim = static_cast<int>(grid.box.dim());
        int keep = std::clamp(static_cast<int>(std::floor(std::pow(400.0, 1.0 / dim))), 2, 13);
        keep = std::min(keep, grid.points_per_dim);
        std::vector<int> axis;
        for (int j = 0; j < keep; ++j)
            axis.push_back((grid.points_per_dim - 1) * j / (keep - 1 > 0 ? keep - 1 : 1));
        axis.erase(std::unique(axis.begin(), axis.end()), axis.end());
        std::vector<std::vector<double>> pts;
        std::vector<int> idx(dim, 0);
        while (true) {
            std::vector<double> p(dim);
            for (int d = 0; d < dim; ++d) p[d] = grid.coord(axis[idx[d]], d);
            pts.push_back(std::move(p));
            int d = dim - 1;
            while (d >= 0 && ++idx[d] == static_cast<int>(axis.size())) idx[d--] = 0;
            if (d < 0) break;
        }
        return pts;
    };

    auto xpts = thin(xgrid);
    auto cpts = thin(cgrid);
    // Off-C probes: mirrored copies reach outside one-sided sets like orthants.
    std::vector<std::vector<double>> probes = cpts;
    for (const auto& p : cpts) {
        std::vector<double> q(p.size());
        bool zero = true;
        for (std::size_t d = 0; d < p.size(); ++d) {
            q[d] = -p[d];
            zero = zero && p[d] == 0.0;
        }
        if (!zero) probes.push_back(std::move(q));
    }

    bool d1_bad = false;
    double minval = std::numeric_limits<double>::infinity();
    bool saw_neg_inf = false;
    for (const auto& x : xpts) {
        for (const auto& xs : probes) {
            ExtReal v = g.eval(x, xs);
            bool in_c = g.C.contains(xs, kMemberTol);
            ++rep.pairs_checked;
            if (in_c) {
                if (!v.finite()) {
                    if (!d1_bad) {
                        rep.d1_detail = "not finite on C at x=" + fmt_point(x) +
                                        " x*=" + fmt_point(xs);
                        d1_bad = true;
                    }
                    if (v.is_neg_inf()) saw_neg_inf = true;
                    continue;
                }
                minval = std::min(minval, v.raw());
            } else if (v.finite() && !d1_bad) {
                rep.d1_detail = "finite off C at x*=" + fmt_point(xs);
                d1_bad = true;
            }
        }
    }
    rep.d1_ok = !d1_bad;
    if (rep.d1_ok) rep.d1_detail = "finite exactly on C at all sampled pairs";

    if (saw_neg_inf || !(minval < std::numeric_limits<double>::infinity())) {
        rep.nonneg_ok = false;
        rep.nonneg_detail = saw_neg_inf ? "hit -inf" : "no finite sample";
    } else {
        rep.nonneg_ok = minval >= -tol;
        std::snprintf(buf, sizeof buf, "min sampled value %.6g", minval);
        rep.nonneg_detail = buf;
    }

    // Joint infimum. Points per dim shrink (odd to odd) until under the cap.
    {
        int dim = g.n + g.m;
        Box jb;
        jb.lo = xgrid.box.lo;
        jb.hi = xgrid.box.hi;
        jb.lo.insert(jb.lo.end(), cgrid.box.lo.begin(), cgrid.box.lo.end());
        jb.hi.insert(jb.hi.end(), cgrid.box.hi.begin(), cgrid.box.hi.end());
        int per = std::min(xgrid.points_per_dim, cgrid.points_per_dim);
        if (per % 2 == 0) per -= 1;
        per = std::max(per, 3);
        while (std::pow(static_cast<double>(per), dim) > static_cast<double>(lim.point_cap) &&
               per > 3)
            per = (per + 1) / 2;
        GridSpec joint{jb, per, 0};
        int n = g.n;
        auto fn = [&g, n](std::span<const double> p) {
            return g.eval(p.first(static_cast<std::size_t>(n)),
                          p.subspan(static_cast<std::size_t>(n)));
        };
        OptResult r = optimize_over_grid(fn, joint, OptMode::inf, lim);
        if (r.status == OptStatus::attained) {
            rep.d2_inf = r.probe_value.raw();
            rep.d2_ok = std::abs(rep.d2_inf) <= tol;
            std::snprintf(buf, sizeof buf, "inf over joint grid (%d per dim) = %.6g", per,
                          rep.d2_inf);
            rep.d2_detail = buf;
        } else if (r.status == OptStatus::divergent) {
            rep.d2_ok = false;
            rep.d2_detail = "joint infimum diverges below zero";
        } else {
            rep.d2_ok = false;
            rep.d2_detail = "no point of the joint grid lands in dom g";
        }
    }

    // Midpoint convexity of g(x, .) along random C-segments.
    {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        auto draw_in = [&](const Box& b) {
            std::vector<double> p(b.dim());
            for (std::size_t d = 0; d < b.dim(); ++d)
                p[d] = b.lo[d] + (b.hi[d] - b.lo[d]) * unit(rng);
            return p;
        };
        auto draw_in_c = [&](std::vector<double>& out) {
            for (int tries = 0; tries < 64; ++tries) {
                out = draw_in(cgrid.box);
                if (g.C.contains(out, kMemberTol)) return true;
            }
            return false;
        };
        int tested = 0, violations = 0;
        for (int s = 0; s < segments; ++s) {
            std::vector<double> x = draw_in(xgrid.box), a, b;
            if (!draw_in_c(a) || !draw_in_c(b)) continue;
            std::vector<double> mid(a.size());
            for (std::size_t d = 0; d < a.size(); ++d) mid[d] = 0.5 * (a[d] + b[d]);
            ExtReal va = g.eval(x, a), vb = g.eval(x, b), vm = g.eval(x, mid);
            if (!va.finite() || !vb.finite()) continue;
            ++tested;
            if (vm.is_pos_inf() ||
                vm.raw() > 0.5 * (va.raw() + vb.raw()) +
                               tol * (1.0 + std::abs(va.raw()) + std::abs(vb.raw()))) {
                if (violations == 0)
                    rep.d3_detail = "midpoint convexity fails at x=" + fmt_point(x) +
                                    " between " + fmt_point(a) + " and " + fmt_point(b);
                ++violations;
            }
        }
        rep.d3_convex_ok = violations == 0;
        if (rep.d3_convex_ok) {
            std::snprintf(buf, sizeof buf, "midpoint convexity held on %d segments", tested);
            rep.d3_detail = buf;
        }
    }
    return rep;
}

StarReport check_star_properties(const Coupling& g, int samples, double tol,
                                 std::uint64_t seed) {
    if (g.n != g.m)
        throw Error("check_star_properties: needs matching slot dimensions");
    StarReport rep;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coord(0.0, 5.0);
    std::uniform_real_distribution<double> scale(0.1, 4.0);
    std::uniform_real_distribution<double> bump(0.0, 2.0);
    auto note = [&](const char* what, std::span<const double> x, std::span<const double> xs) {
        if (rep.counterexample.empty())
            rep.counterexample =
                std::string(what) + " at x=" + fmt_point(x) + " x*=" + fmt_point(xs);
    };
    int n = g.n;
    for (int s = 0; s < samples; ++s) {
        std::vector<double> x(n), xs(n), x2(n), xs2(n);
        for (int d = 0; d < n; ++d) x[d] = coord(rng), xs[d] = coord(rng);
        double t = scale(rng);
        ExtReal base = g.eval(x, xs);
        if (!base.finite()) continue;
        ++rep.samples;
        double want = t * base.raw();
        double slack = tol * (1.0 + std::abs(want));

        for (int d = 0; d < n; ++d) x2[d] = t * x[d];
        ExtReal hx = g.eval(x2, xs);
        if (!hx.finite() || std::abs(hx.raw() - want) > slack) {
            rep.homogeneous_x = false;
            note("x-slot homogeneity fails", x, xs);
        }
        for (int d = 0; d < n; ++d) xs2[d] = t * xs[d];
        ExtReal hs = g.eval(x, xs2);
        if (!hs.finite() || std::abs(hs.raw() - want) > slack) {
            rep.homogeneous_star = false;
            note("x*-slot homogeneity fails", x, xs);
        }

        double floor = base.raw() - tol * (1.0 + std::abs(base.raw()));
        for (int d = 0; d < n; ++d) x2[d] = x[d] + bump(rng);
        ExtReal ix = g.eval(x2, xs);
        if (!ix.finite() || ix.raw() < floor) {
            rep.increasing_x = false;
            note("x-slot monotonicity fails", x, xs);
        }
        for (int d = 0; d < n; ++d) xs2[d] = xs[d] + bump(rng);
        ExtReal is = g.eval(x, xs2);
        if (!is.finite() || is.raw() < floor) {
            rep.increasing_star = false;
            note("x*-slot monotonicity fails", x, xs);
        }
    }
    return rep;
}

PseudoMonotoneReport pseudo_monotone_scan(const Coupling& g, int samples, double tol,
                                          std::uint64_t seed, double radius) {
    if (g.n != g.m)
        throw Error("pseudo_monotone_scan: needs matching slot dimensions");
    PseudoMonotoneReport rep;
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    Box box = g.C.sampling_box(radius);
    auto draw = [&](std::vector<double>& out) {
        for (int tries = 0; tries < 200; ++tries) {
            out.resize(box.dim());
            for (std::size_t d = 0; d < box.dim(); ++d)
                out[d] = box.lo[d] + (box.hi[d] - box.lo[d]) * unit(rng);
            if (g.C.contains(out, kMemberTol)) return true;
        }
        return false;
    };
    std::vector<double> x, y;
    for (int s = 0; s < samples; ++s) {
        if (!draw(x) || !draw(y)) continue;
        ExtReal gxy = g.eval(x, y), gyx = g.eval(y, x);
        if (!gxy.finite() || !gyx.finite()) continue;
        ++rep.pairs;
        rep.max_on_CxC = std::max({rep.max_on_CxC, gxy.raw(), gyx.raw()});
        if (!rep.violating_pair) {
            if (gxy.raw() >= -tol && gyx.raw() > tol)
                rep.violating_pair = std::make_pair(x, y);
            else if (gyx.raw() >= -tol && gxy.raw() > tol)
                rep.violating_pair = std::make_pair(y, x);
        }
    }
    rep.pseudo_monotone = rep.pairs > 0 && !rep.violating_pair;
    return rep;
}

}  // namespace gcoup
