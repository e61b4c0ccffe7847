#include "gcoup/complementarity.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

#include "gcoup/conjugate.hpp"
#include "gcoup/coupling.hpp"
#include "gcoup/errors.hpp"
#include "gcoup/proper_fn.hpp"
#include "linsolve.hpp"

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

// <T(x), y - x> + indicator of K in y.
ProperFn cp_slice(const CPInstance& inst, std::span<const double> x) {
    std::vector<double> xv(x.begin(), x.end());
    std::vector<double> tx = inst.T.apply(x);
    SetSpec K = inst.K;
    return ProperFn(inst.T.dim(),
                    [xv, tx, K](std::span<const double> y) {
                        if (!K.contains(y, kMemberTol)) return ExtReal::pos_inf();
                        double s = 0.0;
                        for (std::size_t i = 0; i < tx.size(); ++i)
                            s += tx[i] * (y[i] - xv[i]);
                        return ExtReal(s);
                    },
                    "cp_slice");
}

}  // namespace

std::vector<double> AffineMap::apply(std::span<const double> x) const {
    std::vector<double> out(q.size());
    for (std::size_t i = 0; i < q.size(); ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < M[i].size(); ++j) s += M[i][j] * x[j];
        out[i] = s + q[i];
    }
    return out;
}

void AffineMap::validate() const {
    if (M.size() != q.size()) throw Error("AffineMap: row count does not match q");
    for (const auto& r : M)
        if (r.size() != q.size()) throw Error("AffineMap: M is not square");
}

CPCheck cp_check(const CPInstance& inst, std::span<const double> x, double tol) {
    inst.T.validate();
    CPCheck out;
    std::vector<double> tx = inst.T.apply(x);
    out.in_K = inst.K.contains(x, tol);
    out.dual_feasible = SetSpec::dual_cone_of(inst.K).contains(tx, tol);
    out.product = dot(tx, x);
    out.complementary = std::abs(out.product) <= tol;
    out.solves = out.in_K && out.dual_feasible && out.complementary;
    return out;
}

LCPResult lcp_enumerate(const CPInstance& inst, double tol) {
    inst.T.validate();
    if (inst.K.kind() != SetKind::orthant)
        throw Error("lcp_enumerate: needs K = nonnegative orthant");
    int n = inst.T.dim();
    if (inst.K.dim() != n) throw Error("lcp_enumerate: K dimension mismatch");
    if (n > 20) throw Error("lcp_enumerate: dimension too large for support enumeration");

    std::vector<unsigned> masks(1u << n);
    for (unsigned m = 0; m < masks.size(); ++m) masks[m] = m;
    std::stable_sort(masks.begin(), masks.end(), [](unsigned a, unsigned b) {
        return std::popcount(a) < std::popcount(b);
    });

    LCPResult out;
    std::vector<double> x(n), sol;
    for (unsigned mask : masks) {
        ++out.subsets_tested;
        std::vector<int> S;
        for (int i = 0; i < n; ++i)
            if (mask & (1u << i)) S.push_back(i);

        std::fill(x.begin(), x.end(), 0.0);
        if (!S.empty()) {
            std::vector<std::vector<double>> A(S.size(), std::vector<double>(S.size()));
            std::vector<double> b(S.size());
            for (std::size_t r = 0; r < S.size(); ++r) {
                for (std::size_t c = 0; c < S.size(); ++c) A[r][c] = inst.T.M[S[r]][S[c]];
                b[r] = -inst.T.q[S[r]];
            }
            if (!detail::solve_linear(A, b, sol)) continue;
            bool nonneg = true;
            for (double v : sol)
                if (v < -tol) nonneg = false;
            if (!nonneg) continue;
            for (std::size_t r = 0; r < S.size(); ++r) x[S[r]] = sol[r];
        }

        std::vector<double> w = inst.T.apply(x);
        bool ok = true;
        for (double v : w)
            if (v < -tol) ok = false;
        if (!ok) continue;
        if (!cp_check(inst, x, std::max(tol, 1e-9)).complementary) continue;

        ++out.solutions;
        if (!out.found) {
            out.found = true;
            out.x = x;
            out.support = S;
        }
    }

    char buf[120];
    std::snprintf(buf, sizeof buf, "%zu solutions over %zu support sets", out.solutions,
                  out.subsets_tested);
    out.detail = buf;
    return out;
}

ExtReal cp_dual_closed_form(const CPInstance& inst, std::span<const double> x,
                            std::span<const double> xstar) {
    std::vector<double> tx = inst.T.apply(x);
    std::vector<double> diff(tx.size());
    for (std::size_t i = 0; i < tx.size(); ++i) diff[i] = tx[i] - xstar[i];
    if (!SetSpec::dual_cone_of(inst.K).contains(diff, kMemberTol)) return ExtReal::pos_inf();
    return ExtReal(dot(tx, x));
}

CPEquivalenceReport cp_zdgp_equivalence(const CPInstance& inst, const GridSpec& ygrid,
                                        const GridSpec& cgrid,
                                        const std::vector<std::vector<double>>& classify,
                                        int pairs, double tol, const EngineLimits& lim) {
    inst.T.validate();
    int n = inst.T.dim();
    CPEquivalenceReport rep;
    rep.pattern_match = true;
    rep.domain_match = true;
    rep.classification_ok = true;

    // Quarter-steps keep divergence slopes comfortably away from zero.
    std::mt19937_64 rng(0x51f0c2b4 + 0);
    std::uniform_int_distribution<int> lat(0, 8);
    auto draw = [&](std::vector<double>& v) {
        for (int d = 0; d < n; ++d) v[d] = 0.25 * lat(rng);
    };

    auto engine_at = [&](std::span<const double> x, std::span<const double> xs) {
        ProperFn fx = cp_slice(inst, x);
        std::vector<double> xsv(xs.begin(), xs.end());
        PointFn phi = [&fx, xsv, &inst](std::span<const double> y) {
            ExtReal g = inst.K.contains(y, kMemberTol) ? ExtReal(dot(xsv, y)) : ExtReal(0.0);
            return sub_lower(g, fx.eval(y));
        };
        return result_value(optimize_over_grid(phi, ygrid, OptMode::sup, lim), OptMode::sup);
    };

    std::vector<double> x(n), xs(n);
    std::vector<std::vector<double>> seen;
    for (int p = 0; p < pairs; ++p) {
        draw(x);
        draw(xs);
        if (!inst.K.contains(x, kMemberTol)) continue;
        ++rep.pairs_checked;
        ExtReal closed = cp_dual_closed_form(inst, x, xs);
        ExtReal engine = engine_at(x, xs);
        if (closed.finite() && engine.finite())
            rep.max_diff = std::max(rep.max_diff, std::abs(closed.raw() - engine.raw()));
        else if (closed != engine)
            rep.pattern_match = false;
        if (std::find(seen.begin(), seen.end(), x) == seen.end()) seen.push_back(x);
    }

    std::vector<double> zero(n, 0.0);
    for (const auto& xv : seen) {
        bool feasible = SetSpec::dual_cone_of(inst.K).contains(inst.T.apply(xv), kMemberTol);
        if (engine_at(xv, zero).finite() != feasible) rep.domain_match = false;
    }

    BuiltinArgs ba;
    ba.n = n;
    ba.m = n;
    ba.K = inst.K;
    Coupling g = builtin_coupling("cone_inner", ba);
    for (const auto& xv : classify) {
        ProperFn fx = cp_slice(inst, xv);
        SampledFn fg = g_conjugate(fx, g, ygrid, cgrid, lim);
        ExtReal m = fg.min_value();
        bool predicted = m.finite() && std::abs(m.raw()) <= tol;
        bool actual = cp_check(inst, xv, tol).solves;
        if (predicted != actual) rep.classification_ok = false;
        if (actual) ++rep.solutions_seen;
    }

    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "%d pairs, engine vs closed form %.3g, %zu classification points",
                  rep.pairs_checked, rep.max_diff, classify.size());
    rep.detail = buf;
    return rep;
}

}  // namespace gcoup
