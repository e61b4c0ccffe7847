#include "gcoup/experiments.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>

#include "gcoup/conjugate.hpp"
#include "gcoup/errors.hpp"
#include "gcoup/recession.hpp"

namespace gcoup {

namespace {

constexpr const char* kVersion = "0.1.0";

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x * x;
    return std::sqrt(s);
}

const char* status_name(OptStatus s) {
    switch (s) {
        case OptStatus::attained: return "attained";
        case OptStatus::divergent: return "divergent";
        case OptStatus::empty_domain: return "empty_domain";
    }
    return "?";
}

JsonValue vec_json(std::span<const double> v) {
    JsonValue a = JsonValue::arr();
    for (double x : v) a.push(JsonValue::num(x));
    return a;
}

JsonValue grid_json(const GridSpec& g) {
    JsonValue j;
    j.set("lo", vec_json(g.box.lo));
    j.set("hi", vec_json(g.box.hi));
    j.set("points_per_dim", JsonValue::integer(g.points_per_dim));
    j.set("refinement_rounds", JsonValue::integer(g.refinement_rounds));
    return j;
}

JsonValue sampled_json(const SampledFn& fn) {
    JsonValue j;
    j.set("grid", grid_json(fn.grid));
    JsonValue entries = JsonValue::arr();
    for (std::size_t i = 0; i < fn.size(); ++i) {
        JsonValue e;
        e.set("point", vec_json(fn.pts[i]));
        e.set("value", JsonValue::ext(fn.values[i]));
        e.set("status", JsonValue::str(status_name(fn.statuses[i])));
        entries.push(std::move(e));
    }
    j.set("entries", std::move(entries));
    return j;
}

std::string sampled_csv(const SampledFn& fn) {
    std::size_t dim = fn.grid.box.dim();
    std::vector<std::string> header;
    header.push_back("flat_index");
    for (std::size_t d = 1; d <= dim; ++d) header.push_back("c" + std::to_string(d));
    header.push_back("value");
    header.push_back("status");
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < fn.size(); ++i) {
        std::vector<std::string> r;
        r.push_back(std::to_string(fn.flat[i]));
        for (double c : fn.pts[i]) r.push_back(format_number(c));
        r.push_back(format_ext(fn.values[i]));
        r.push_back(status_name(fn.statuses[i]));
        rows.push_back(std::move(r));
    }
    return csv_table(header, rows);
}

JsonValue numeric_json(const NumericDefaults& n) {
    JsonValue j;
    j.set("tol", JsonValue::num(n.tol));
    j.set("radius", JsonValue::num(n.radius));
    j.set("points_per_dim", JsonValue::integer(n.points_per_dim));
    j.set("refinement_rounds", JsonValue::integer(n.refinement_rounds));
    j.set("seed", JsonValue::integer(n.seed));
    return j;
}

JsonValue shell(const std::string& cmd, const ProblemFile& pf) {
    JsonValue j;
    j.set("experiment", JsonValue::str(cmd));
    j.set("name", JsonValue::str(pf.name));
    j.set("numeric", numeric_json(pf.numeric));
    JsonValue v;
    v.set("gcoup", JsonValue::str(kVersion));
    v.set("report_schema", JsonValue::integer(1));
    j.set("versions", std::move(v));
    return j;
}

ProblemFile with_overrides(ProblemFile pf, const ExperimentOptions& opt) {
    if (opt.tol) pf.numeric.tol = *opt.tol;
    if (opt.radius) pf.numeric.radius = *opt.radius;
    if (opt.points) pf.numeric.points_per_dim = *opt.points;
    if (pf.numeric.tol <= 0 || pf.numeric.radius <= 0 || pf.numeric.points_per_dim < 2)
        throw Error("numeric overrides out of range");
    return pf;
}

const ProperFn& need_f(const ProblemFile& pf) {
    if (!pf.f) throw SchemaError("this experiment needs an f block", "$.f");
    return *pf.f;
}

const Coupling& need_g(const ProblemFile& pf) {
    if (!pf.g) throw SchemaError("this experiment needs a g block", "$.g");
    return *pf.g;
}

// ---- single-file experiments ----

ExperimentResult finish(JsonValue rep, bool ok, const ExperimentOptions& opt,
                        const std::string& csv,
                        std::chrono::steady_clock::time_point t0) {
    if (opt.timings) {
        double ms = std::chrono::duration<double, std::milli>(
                        std::chrono::steady_clock::now() - t0)
                        .count();
        JsonValue t;
        t.set("wall_ms", JsonValue::num(ms));
        rep.set("timings", std::move(t));
    }
    ExperimentResult out;
    out.ok = ok;
    if (opt.format == "csv") {
        if (csv.empty())
            throw Error("csv export only covers value tables; this experiment has none");
        out.text = csv;
    } else {
        out.text = rep.dump(2);
    }
    return out;
}

JsonValue validate_cmd(const ProblemFile& pf, bool& ok) {
    const Coupling& g = need_g(pf);
    CouplingValidation v = validate_coupling(g, pf.xgrid(), pf.cgrid(), pf.numeric.tol, 200,
                                             pf.numeric.seed);
    StarReport star = check_star_properties(g, 200, pf.numeric.tol, pf.numeric.seed);
    PseudoMonotoneReport pm = pseudo_monotone_scan(g, 500, pf.numeric.tol, pf.numeric.seed);
    ok = v.ok();

    JsonValue j;
    j.set("coupling", JsonValue::str(g.name));
    JsonValue dv;
    dv.set("d1_ok", JsonValue::flag(v.d1_ok));
    dv.set("d1_detail", JsonValue::str(v.d1_detail));
    dv.set("d2_ok", JsonValue::flag(v.d2_ok));
    dv.set("d2_inf", JsonValue::num(v.d2_inf));
    dv.set("d2_detail", JsonValue::str(v.d2_detail));
    dv.set("nonneg_ok", JsonValue::flag(v.nonneg_ok));
    dv.set("nonneg_detail", JsonValue::str(v.nonneg_detail));
    dv.set("d3_c_convex", JsonValue::flag(v.d3_c_convex));
    dv.set("d3_convex_ok", JsonValue::flag(v.d3_convex_ok));
    dv.set("d3_detail", JsonValue::str(v.d3_detail));
    dv.set("d3_lsc", JsonValue::str(v.d3_lsc));
    dv.set("pairs_checked", JsonValue::integer(v.pairs_checked));
    dv.set("ok", JsonValue::flag(v.ok()));
    j.set("definition", std::move(dv));
    JsonValue sv;
    sv.set("homogeneous_x", JsonValue::flag(star.homogeneous_x));
    sv.set("homogeneous_star", JsonValue::flag(star.homogeneous_star));
    sv.set("increasing_x", JsonValue::flag(star.increasing_x));
    sv.set("increasing_star", JsonValue::flag(star.increasing_star));
    sv.set("counterexample", JsonValue::str(star.counterexample));
    sv.set("samples", JsonValue::integer(star.samples));
    j.set("star_properties", std::move(sv));
    JsonValue pv;
    pv.set("pseudo_monotone", JsonValue::flag(pm.pseudo_monotone));
    pv.set("max_on_CxC", JsonValue::num(pm.max_on_CxC));
    pv.set("pairs", JsonValue::integer(pm.pairs));
    if (pm.violating_pair) {
        JsonValue p;
        p.set("x", vec_json(pm.violating_pair->first));
        p.set("xstar", vec_json(pm.violating_pair->second));
        pv.set("violating_pair", std::move(p));
    }
    j.set("pseudo_monotone_scan", std::move(pv));
    return j;
}

JsonValue conjugate_cmd(const ProblemFile& pf, std::string& csv) {
    SampledFn fg = g_conjugate(need_f(pf), need_g(pf), pf.xgrid(), pf.cgrid());
    SampledFn fgg = g_biconjugate(need_g(pf), pf.xgrid(), fg);
    csv = sampled_csv(fg);
    JsonValue j;
    j.set("conjugate", sampled_json(fg));
    j.set("biconjugate", sampled_json(fgg));
    return j;
}

JsonValue duality_cmd(const ProblemFile& pf, bool& ok) {
    const ProperFn& f = need_f(pf);
    SampledFn fg = g_conjugate(f, need_g(pf), pf.xgrid(), pf.cgrid());
    SampledFn fgg = g_biconjugate(need_g(pf), pf.xgrid(), fg);
    MembershipReport mem = membership_Ff(make_gamma(f, fg), pf.xgrid(), pf.numeric.tol);
    DualityReport dr = duality_report(f, fgg, pf.numeric.tol);
    DualAttainment da = dual_attainment(f, need_g(pf), pf.xgrid(), fg, pf.numeric.tol);
    ok = true;

    JsonValue j;
    JsonValue mj;
    mj.set("member", JsonValue::flag(mem.member));
    mj.set("fg_proper", JsonValue::flag(mem.fg_proper));
    mj.set("inf_gamma", JsonValue::ext(mem.inf_gamma));
    mj.set("inf_f", JsonValue::ext(mem.inf_f));
    mj.set("min_fg", JsonValue::ext(mem.min_fg));
    mj.set("witness_x", vec_json(mem.witness_x));
    mj.set("witness_xstar", vec_json(mem.witness_xstar));
    mj.set("detail", JsonValue::str(mem.detail));
    j.set("membership", std::move(mj));
    JsonValue dj;
    dj.set("inf_f", JsonValue::ext(dr.inf_f));
    dj.set("inf_fgg", JsonValue::ext(dr.inf_fgg));
    dj.set("identity_gap", JsonValue::num(dr.identity_gap));
    dj.set("identity_ok", JsonValue::flag(dr.identity_ok));
    dj.set("transfer_ok", JsonValue::flag(dr.transfer_ok));
    if (dr.argmin_f) dj.set("argmin_f", vec_json(*dr.argmin_f));
    if (dr.argmin_fgg) dj.set("argmin_fgg", vec_json(*dr.argmin_fgg));
    j.set("biconjugate_identity", std::move(dj));
    JsonValue aj;
    aj.set("attained", JsonValue::flag(da.attained));
    aj.set("dual_value", JsonValue::ext(da.dual_value));
    aj.set("xstar", vec_json(da.xstar));
    aj.set("improved_when_widened", JsonValue::flag(da.improved_when_widened));
    j.set("dual_attainment", std::move(aj));
    return j;
}

JsonValue dirs_json(const DirectionSet& ds, std::size_t cap = 16) {
    JsonValue j;
    j.set("count", JsonValue::integer(static_cast<long long>(ds.dirs.size())));
    j.set("zero_only", JsonValue::flag(ds.zero_only()));
    JsonValue sample = JsonValue::arr();
    for (std::size_t i = 0; i < ds.dirs.size() && i < cap; ++i) sample.push(vec_json(ds.dirs[i]));
    j.set("first_directions", std::move(sample));
    return j;
}

JsonValue recession_cmd(const ProblemFile& pf) {
    const ProperFn& f = need_f(pf);
    SampledFn fg = g_conjugate(f, need_g(pf), pf.xgrid(), pf.cgrid());
    RecessionParams params;
    params.seed = pf.numeric.seed;
    CompactnessReport rep = recession_of_gamma(make_gamma(f, fg), pf.xgrid(), params);

    JsonValue j;
    j.set("zero_cloud_empty", JsonValue::flag(rep.zero_cloud_empty));
    j.set("tested_levels", vec_json(rep.tested_levels));
    j.set("recession_set", dirs_json(rep.r_gamma));
    j.set("ladder_set", dirs_json(rep.ladder_dirs));
    j.set("ladder_agree", JsonValue::flag(rep.ladder_agree));
    j.set("bounded_probe", JsonValue::flag(rep.bounded_probe));
    j.set("equivalence_ok", JsonValue::flag(rep.equivalence_ok));
    j.set("detail", JsonValue::str(rep.detail));
    return j;
}

JsonValue lagrangian_cmd(const ProblemFile& pf, bool& ok) {
    if (!pf.lagrangian) throw SchemaError("this experiment needs a lagrangian block", "$.lagrangian");
    int m = static_cast<int>(pf.lagrangian->h.size());
    Box lbox;
    lbox.lo.assign(m, 0.0);
    lbox.hi.assign(m, pf.numeric.radius);
    GridSpec lgrid{lbox, pf.numeric.points_per_dim, pf.numeric.refinement_rounds};
    LagrangianReport r =
        lagrangian_dual_report(*pf.lagrangian, pf.xgrid(), lgrid, pf.numeric.tol);
    ok = r.gap.finite() && std::abs(r.gap.raw()) <= std::max(pf.numeric.tol, 1e-4);

    JsonValue j;
    j.set("primal", JsonValue::ext(r.primal));
    if (r.primal_arg) j.set("primal_arg", vec_json(*r.primal_arg));
    j.set("dual", JsonValue::ext(r.dual));
    j.set("dual_arg", vec_json(r.dual_arg));
    j.set("gap", JsonValue::ext(r.gap));
    j.set("engine_vs_direct", JsonValue::num(r.engine_vs_direct));
    j.set("multiplier_grid", grid_json(lgrid));
    j.set("detail", JsonValue::str(r.detail));
    return j;
}

JsonValue perturb_cmd(const ProblemFile& pf, bool& ok) {
    if (!pf.perturbation)
        throw SchemaError("this experiment needs a perturbation block", "$.perturbation");
    const PerturbationScheme& s = *pf.perturbation;
    GridSpec ugrid{Box::centered(static_cast<std::size_t>(s.p), pf.numeric.radius),
                   pf.numeric.points_per_dim, pf.numeric.refinement_rounds};
    PerturbationReport r =
        perturbation_report(s, need_f(pf), pf.xgrid(), ugrid, ugrid, pf.numeric.tol);
    ok = r.consistent && r.weak_duality_ok && r.gap_nonneg && r.hstar_matches_joint &&
         r.beta_cross_ok;

    JsonValue j;
    j.set("consistent", JsonValue::flag(r.consistent));
    j.set("consistency_gap", JsonValue::num(r.consistency_gap));
    j.set("alpha", JsonValue::ext(r.alpha));
    j.set("beta", JsonValue::ext(r.beta));
    j.set("beta_cross", JsonValue::ext(r.beta_cross));
    j.set("beta_cross_ok", JsonValue::flag(r.beta_cross_ok));
    j.set("weak_duality_ok", JsonValue::flag(r.weak_duality_ok));
    j.set("gap", JsonValue::ext(r.gap));
    j.set("gap_nonneg", JsonValue::flag(r.gap_nonneg));
    j.set("hstar_matches_joint", JsonValue::flag(r.hstar_matches_joint));
    j.set("hstar_gap", JsonValue::num(r.hstar_gap));
    j.set("detail", JsonValue::str(r.detail));
    return j;
}

std::vector<std::vector<double>> sweep_points(const SetSpec& K, double radius, int per_dim,
                                              std::size_t cap) {
    GridSpec sweep{K.sampling_box(radius), per_dim, 0};
    auto fp = points_in(K, sweep);
    std::vector<std::vector<double>> xs = fp.pts;
    if (xs.size() > cap) {
        std::vector<std::vector<double>> thin;
        std::size_t step = (xs.size() + cap - 1) / cap;
        for (std::size_t i = 0; i < xs.size(); i += step) thin.push_back(xs[i]);
        xs = std::move(thin);
    }
    return xs;
}

JsonValue ep_cmd(const ProblemFile& pf, bool& ok) {
    GridSpec ygrid = pf.xgrid();
    GridSpec cgrid = pf.cgrid();
    double tol = pf.numeric.tol;

    if (pf.ep) {
        const EPInstance& inst = *pf.ep;
        EPValidation val = validate_ep(inst, ygrid, 1e-9, 200, pf.numeric.seed);
        auto xs = sweep_points(inst.K, pf.numeric.radius, 21, inst.n == 1 ? 21 : 9);

        JsonValue rows = JsonValue::arr();
        bool consistent = true;
        for (const auto& x : xs) {
            ExtReal res = ep_residual(inst, x, ygrid);
            CertificateResult cert = ep_solution_certificate(inst, x, ygrid, cgrid, tol);
            bool solves = res.finite() && res.raw() >= -tol;
            if (cert.found != solves) consistent = false;
            JsonValue r;
            r.set("x", vec_json(x));
            r.set("residual", JsonValue::ext(res));
            r.set("certificate_found", JsonValue::flag(cert.found));
            if (cert.found) r.set("xstar", vec_json(cert.xstar));
            rows.push(std::move(r));
        }

        std::vector<std::vector<double>> zxs = xs;
        if (inst.n > 1 && zxs.size() > 5) zxs.resize(5);
        ZdgpReport z = zdgp_check(inst, zxs, ygrid, cgrid, std::max(tol, 1e-4));
        ok = val.diagonal_ok && consistent && z.all_ok && z.fenchel_ok;

        JsonValue j;
        JsonValue vj;
        vj.set("diagonal_ok", JsonValue::flag(val.diagonal_ok));
        vj.set("diagonal_max", JsonValue::num(val.diagonal_max));
        vj.set("y_convex_ok", JsonValue::flag(val.y_convex_ok));
        j.set("validation", std::move(vj));
        j.set("sweep", std::move(rows));
        j.set("certificate_matches_residual", JsonValue::flag(consistent));
        JsonValue zj;
        zj.set("all_ok", JsonValue::flag(z.all_ok));
        zj.set("worst_gap", JsonValue::num(z.worst_zdgp));
        zj.set("worst_shift_identity", JsonValue::num(z.worst_shift));
        zj.set("fenchel_ok", JsonValue::flag(z.fenchel_ok));
        zj.set("points", JsonValue::integer(static_cast<long long>(z.rows.size())));
        j.set("gap_closure", std::move(zj));
        return j;
    }

    if (pf.vip) {
        const VIPInstance& inst = *pf.vip;
        MonotonicityReport mono = vip_monotone_scan(inst, 200, pf.numeric.seed);
        auto xs = sweep_points(inst.K, std::min(pf.numeric.radius, 4.0), 5, 25);
        JsonValue rows = JsonValue::arr();
        ExtReal best = ExtReal::pos_inf();
        bool none_negative = true;
        for (const auto& x : xs) {
            ExtReal gap = vip_gap(inst, x, ygrid);
            if (gap < best) best = gap;
            if (gap.finite() && gap.raw() < -tol) none_negative = false;
            JsonValue r;
            r.set("x", vec_json(x));
            r.set("gap", JsonValue::ext(gap));
            rows.push(std::move(r));
        }
        ok = none_negative && mono.monotone;
        JsonValue j;
        j.set("monotone", JsonValue::flag(mono.monotone));
        j.set("min_quad", JsonValue::num(mono.min_quad));
        j.set("sweep", std::move(rows));
        j.set("best_gap", JsonValue::ext(best));
        j.set("gap_never_negative", JsonValue::flag(none_negative));
        return j;
    }

    if (pf.epvip) {
        const EPVIPInstance& inst = *pf.epvip;
        auto xs = sweep_points(inst.K, std::min(pf.numeric.radius, 4.0), 9, 25);
        JsonValue rows = JsonValue::arr();
        bool none_negative = true;
        ExtReal best = ExtReal::pos_inf();
        for (const auto& x : xs) {
            ExtReal gap = epvip_gap(inst, x, ygrid);
            if (gap < best) best = gap;
            if (gap.finite() && gap.raw() < -tol) none_negative = false;
            JsonValue r;
            r.set("x", vec_json(x));
            r.set("gap", JsonValue::ext(gap));
            rows.push(std::move(r));
        }
        ok = none_negative;
        JsonValue j;
        j.set("sweep", std::move(rows));
        j.set("best_gap", JsonValue::ext(best));
        j.set("gap_never_negative", JsonValue::flag(none_negative));
        return j;
    }

    throw SchemaError("this experiment needs an ep, vip, or epvip block", "$");
}

JsonValue cp_cmd(const ProblemFile& pf, bool& ok) {
    if (!pf.cp) throw SchemaError("this experiment needs a cp block", "$.cp");
    const CPInstance& inst = *pf.cp;
    int n = inst.T.dim();

    LCPResult r = lcp_enumerate(inst, 1e-9);
    JsonValue j;
    j.set("found", JsonValue::flag(r.found));
    j.set("subsets_tested", JsonValue::integer(static_cast<long long>(r.subsets_tested)));
    j.set("solutions", JsonValue::integer(static_cast<long long>(r.solutions)));
    ok = true;
    if (r.found) {
        CPCheck c = cp_check(inst, r.x, 1e-9);
        std::vector<double> zero(n, 0.0);
        j.set("x", vec_json(r.x));
        JsonValue sj = JsonValue::arr();
        for (int i : r.support) sj.push(JsonValue::integer(i));
        j.set("support", std::move(sj));
        j.set("product", JsonValue::num(c.product));
        j.set("solves", JsonValue::flag(c.solves));
        j.set("dual_infimum", JsonValue::ext(cp_dual_closed_form(inst, r.x, zero)));
        ok = c.solves;
    }

    GridSpec ygrid{Box::centered(static_cast<std::size_t>(n), pf.numeric.radius),
                   std::min(pf.numeric.points_per_dim, 61), 0};
    Box cb;
    cb.lo.assign(n, 0.0);
    cb.hi.assign(n, 4.0);
    GridSpec cgrid{cb, 17, 0};
    std::vector<std::vector<double>> classify;
    if (r.found) classify.push_back(r.x);
    classify.push_back(std::vector<double>(n, 0.0));
    classify.push_back(std::vector<double>(n, 1.0));
    CPEquivalenceReport eq =
        cp_zdgp_equivalence(inst, ygrid, cgrid, classify, 100, pf.numeric.tol);
    ok = ok && eq.pattern_match && eq.domain_match && eq.classification_ok;

    JsonValue ej;
    ej.set("pairs_checked", JsonValue::integer(eq.pairs_checked));
    ej.set("max_diff", JsonValue::num(eq.max_diff));
    ej.set("pattern_match", JsonValue::flag(eq.pattern_match));
    ej.set("domain_match", JsonValue::flag(eq.domain_match));
    ej.set("classification_ok", JsonValue::flag(eq.classification_ok));
    j.set("closed_form_vs_engine", std::move(ej));
    j.set("detail", JsonValue::str(r.detail));
    return j;
}

}  // namespace

ExperimentResult run_experiment(const std::string& cmd, const ProblemFile& raw,
                                const ExperimentOptions& opt) {
    auto t0 = std::chrono::steady_clock::now();
    ProblemFile pf = with_overrides(raw, opt);
    JsonValue rep = shell(cmd, pf);
    bool ok = true;
    std::string csv;

    if (cmd == "validate")
        rep.set("result", validate_cmd(pf, ok));
    else if (cmd == "conjugate")
        rep.set("result", conjugate_cmd(pf, csv));
    else if (cmd == "duality")
        rep.set("result", duality_cmd(pf, ok));
    else if (cmd == "recession")
        rep.set("result", recession_cmd(pf));
    else if (cmd == "lagrangian")
        rep.set("result", lagrangian_cmd(pf, ok));
    else if (cmd == "perturb")
        rep.set("result", perturb_cmd(pf, ok));
    else if (cmd == "ep")
        rep.set("result", ep_cmd(pf, ok));
    else if (cmd == "cp")
        rep.set("result", cp_cmd(pf, ok));
    else if (cmd == "paper-suite")
        return run_paper_suite(opt);
    else
        throw Error("unknown experiment '" + cmd + "'");

    return finish(std::move(rep), ok, opt, csv, t0);
}

// ---- canonical regression suite ----

namespace {

struct SuiteRow {
    std::string name;
    bool pass;
    std::string detail;
};

void add_row(std::vector<SuiteRow>& rows, std::string name, bool pass, std::string detail) {
    rows.push_back({std::move(name), pass, std::move(detail)});
}

std::string fmt(const char* f, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, f, a, b);
    return buf;
}

void suite_examples(std::vector<SuiteRow>& rows) {
    GridSpec xg{Box::interval(-20, 20), 201, 0};
    GridSpec cg{Box::interval(-20, 20), 201, 0};

    // quadratic against the squared-product pairing
    {
        ProperFn f = ProperFn::from_expr(ExprFn::parse("x1^2", {"x1"}), std::nullopt, "sq");
        Coupling g = builtin_coupling("square_product");
        SampledFn fg = g_conjugate(f, g, xg, cg);
        double worst = 0.0;
        bool pattern = true;
        for (std::size_t i = 0; i < fg.size(); ++i) {
            double xs = fg.pts[i][0];
            if (std::abs(xs) <= 1.0 + 1e-12) {
                if (!fg.values[i].finite())
                    pattern = false;
                else
                    worst = std::max(worst, std::abs(fg.values[i].raw()));
            } else if (!fg.values[i].is_pos_inf()) {
                pattern = false;
            }
        }
        add_row(rows, "example1_conjugate", pattern && worst <= 1e-6,
                fmt("finite-branch deviation %.3g over 201 points", worst));

        SampledFn fgg = g_biconjugate(g, xg, fg);
        double worst2 = 0.0;
        for (std::size_t i = 0; i < fgg.size(); ++i) {
            double x = fgg.pts[i][0];
            if (std::abs(x) > 2.0) continue;
            if (!fgg.values[i].finite()) {
                worst2 = std::numeric_limits<double>::infinity();
                break;
            }
            worst2 = std::max(worst2, std::abs(fgg.values[i].raw() - x * x));
        }
        add_row(rows, "example1_biconjugate", worst2 <= 1e-4,
                fmt("deviation from the square %.3g on [-2,2]", worst2));

        MembershipReport mem = membership_Ff(make_gamma(f, fg), xg, 1e-6);
        add_row(rows, "example1_member", mem.member, mem.detail);

        RecessionParams rp;
        CompactnessReport cr = recession_of_gamma(make_gamma(f, fg), xg, rp);
        add_row(rows, "example1_recession",
                cr.r_gamma.zero_only() && !cr.zero_cloud_empty && cr.bounded_probe &&
                    cr.equivalence_ok && cr.ladder_agree,
                cr.detail);
    }

    // nonnegative quadratic against the clipped reciprocal pairing
    {
        ProperFn f = ProperFn::from_expr(ExprFn::parse("x1^2", {"x1"}),
                                         SetSpec::make_orthant(1), "sq_plus");
        Coupling g = builtin_coupling("reciprocal");
        SampledFn fg = g_conjugate(f, g, xg, cg);
        double worst = 0.0;
        for (std::size_t i = 0; i < fg.size(); ++i) {
            if (!fg.values[i].finite()) {
                worst = std::numeric_limits<double>::infinity();
                break;
            }
            worst = std::max(worst, std::abs(fg.values[i].raw() - 1.0));
        }
        add_row(rows, "example2_conjugate", worst <= 1e-3,
                fmt("deviation from 1 is %.3g over %g entries", worst,
                    static_cast<double>(fg.size())));
        MembershipReport mem = membership_Ff(make_gamma(f, fg), xg, 1e-6);
        bool gap1 = mem.inf_gamma.finite() && std::abs(mem.inf_gamma.raw() - 1.0) <= 1e-3;
        add_row(rows, "example2_not_member", !mem.member && gap1, mem.detail);
    }

    // exponential against the exponential pairing
    {
        ProperFn f = ProperFn::from_expr(ExprFn::parse("exp(x1)", {"x1"}), std::nullopt, "ex");
        Coupling g = builtin_coupling("exp");
        SampledFn fg = g_conjugate(f, g, xg, cg);
        double worst = 0.0;
        bool pattern = true;
        for (std::size_t i = 0; i < fg.size(); ++i) {
            double xs = fg.pts[i][0];
            if (xs <= 1e-12) {
                if (!fg.values[i].finite())
                    pattern = false;
                else
                    worst = std::max(worst, std::abs(fg.values[i].raw()));
            } else if (!fg.values[i].is_pos_inf()) {
                pattern = false;
            }
        }
        add_row(rows, "example3_conjugate", pattern && worst <= 1e-6,
                fmt("nonpositive-branch deviation %.3g", worst));

        MembershipReport mem = membership_Ff(make_gamma(f, fg), xg, 1e-6);
        DualAttainment da = dual_attainment(f, g, xg, fg, 1e-6);
        bool at_zero = da.attained && !da.xstar.empty() && std::abs(da.xstar[0]) <= 1e-9;
        add_row(rows, "example3_member_dual_attained", mem.member && at_zero,
                mem.detail + "; " + da.detail);

        RecessionParams rp;
        CompactnessReport cr = recession_of_gamma(make_gamma(f, fg), xg, rp);
        std::vector<std::vector<double>> q;  // closed negative quadrant
        SetSpec quad = SetSpec::make_halfspaces(
            2, {Halfspace{{-1.0, 0.0}, 0.0}, Halfspace{{0.0, -1.0}, 0.0}});
        DirectionSet expect = directions_of_cone(quad, sphere_directions(2, 1.0));
        bool cover = dirs_subset(expect, cr.r_gamma, 2.0);
        bool tight = dirs_subset(cr.r_gamma, expect, 12.0);
        add_row(rows, "example3_recession",
                cr.zero_cloud_empty && !cr.r_gamma.zero_only() && cover && tight &&
                    cr.equivalence_ok && cr.ladder_agree,
                cr.detail);
    }

    // norm-valued pairing built from the domain of f
    {
        ProperFn f = ProperFn::from_expr(ExprFn::parse("x1^2", {"x1"}), std::nullopt, "sq");
        BuiltinArgs ba;
        ba.n = 1;
        ba.m = 2;
        ba.dom_of = f;
        Coupling g = builtin_coupling("norm_on_dom", ba);
        GridSpec cg2{Box::centered(2, 2.0), 21, 0};
        SampledFn fg = g_conjugate(f, g, xg, cg2);
        double worst = 0.0;
        for (std::size_t i = 0; i < fg.size(); ++i) {
            if (!fg.values[i].finite()) {
                worst = std::numeric_limits<double>::infinity();
                break;
            }
            worst = std::max(worst, std::abs(fg.values[i].raw() - norm2(fg.pts[i])));
        }
        MembershipReport mem = membership_Ff(make_gamma(f, fg), xg, 1e-6);
        add_row(rows, "norm_pairing_exact", worst <= 1e-12 && mem.member,
                fmt("deviation from the norm %.3g over 441 points", worst));
    }
}

void suite_duality_identities(std::vector<SuiteRow>& rows) {
    GridSpec xg{Box::interval(-20, 20), 201, 0};
    GridSpec cg{Box::interval(-20, 20), 201, 0};

    struct Inst {
        const char* label;
        ProperFn f;
        Coupling g;
        GridSpec cgrid;
    };
    BuiltinArgs nb;
    nb.n = 1;
    nb.m = 2;
    nb.dom_of = ProperFn::from_expr(ExprFn::parse("x1^2", {"x1"}), std::nullopt, "sq");
    std::vector<Inst> insts;
    insts.push_back({"square", ProperFn::from_expr(ExprFn::parse("x1^2", {"x1"}), std::nullopt, "sq"),
                     builtin_coupling("square_product"), cg});
    insts.push_back({"exp", ProperFn::from_expr(ExprFn::parse("exp(x1)", {"x1"}), std::nullopt, "ex"),
                     builtin_coupling("exp"), cg});
    insts.push_back({"norm", ProperFn::from_expr(ExprFn::parse("x1^2", {"x1"}), std::nullopt, "sq"),
                     builtin_coupling("norm_on_dom", nb), GridSpec{Box::centered(2, 2.0), 21, 0}});

    bool all = true;
    std::string det;
    for (auto& inst : insts) {
        SampledFn fg = g_conjugate(inst.f, inst.g, xg, inst.cgrid);
        SampledFn fgg = g_biconjugate(inst.g, xg, fg);
        MembershipReport mem = membership_Ff(make_gamma(inst.f, fg), xg, 1e-6);
        DualityReport dr = duality_report(inst.f, fgg, 1e-6);
        bool sum_zero = mem.inf_gamma.finite() && std::abs(mem.inf_gamma.raw()) <= 1e-6;
        bool pass = mem.member && sum_zero && dr.identity_ok && dr.transfer_ok;
        if (!pass) all = false;
        det += std::string(inst.label) + (pass ? " ok; " : " FAIL; ");
    }
    add_row(rows, "duality_identities_members", all, det);
}

void suite_schemes(std::vector<SuiteRow>& rows) {
    GridSpec xg{Box::interval(-20, 20), 201, 0};

    {
        ConstrainedProblem prob{ExprFn::parse("x1^2", {"x1"}),
                                {ExprFn::parse("1 - x1", {"x1"})},
                                1,
                                "qp"};
        GridSpec lg{Box::interval(0, 20), 101, 0};
        LagrangianReport r = lagrangian_dual_report(prob, xg, lg, 1e-6);
        bool pass = r.primal.finite() && std::abs(r.primal.raw() - 1.0) <= 1e-6 &&
                    r.dual.finite() && std::abs(r.dual.raw() - 1.0) <= 1e-6 &&
                    r.gap.finite() && std::abs(r.gap.raw()) <= 1e-4 &&
                    r.engine_vs_direct <= 1e-10;
        add_row(rows, "lagrangian_bridge", pass,
                r.detail + fmt(", engine vs direct %.3g at 101 multipliers",
                               r.engine_vs_direct));
    }

    {
        ProperFn f = ProperFn::from_expr(ExprFn::parse("x1^2", {"x1"}), std::nullopt, "sq");
        GridSpec ug{Box::interval(-20, 20), 201, 0};
        PerturbationScheme s1{ExprFn::parse("(x1 - u1)^2", {"x1", "u1"}), 1, 1, "shift"};
        PerturbationReport r1 = perturbation_report(s1, f, xg, ug, ug, 1e-6);
        bool p1 = r1.consistent && r1.weak_duality_ok && r1.gap_nonneg && r1.gap.finite() &&
                  std::abs(r1.gap.raw()) <= 1e-6 && r1.hstar_matches_joint && r1.beta_cross_ok;
        PerturbationScheme s2{ExprFn::parse("x1^2 + u1 * x1", {"x1", "u1"}), 1, 1, "tilt"};
        PerturbationReport r2 = perturbation_report(s2, f, xg, ug, ug, 1e-6);
        bool p2 = r2.consistent && r2.weak_duality_ok && r2.gap_nonneg && r2.beta.is_pos_inf() &&
                  r2.hstar_matches_joint && r2.beta_cross_ok;
        add_row(rows, "perturbation_schemes", p1 && p2, r1.detail + "; " + r2.detail);
    }
}

void suite_ep(std::vector<SuiteRow>& rows) {
    EPInstance inst;
    inst.K = SetSpec::make_box(Box::interval(0, 1));
    inst.f = ExprFn::parse("(x1 - 0.5)*(y1 - x1)", {"x1", "y1"});
    inst.n = 1;
    inst.name = "interval";
    GridSpec yg{Box::interval(-20, 20), 201, 0};
    GridSpec cg{Box::interval(-20, 20), 201, 0};

    GridSpec sweep{Box::interval(0, 1), 21, 0};
    std::vector<std::vector<double>> xs;
    for (int i = 0; i < 21; ++i) xs.push_back({sweep.coord(static_cast<std::size_t>(i), 0)});

    bool consistent = true;
    bool half_cert = false;
    bool half_at_zero = false;
    for (const auto& x : xs) {
        ExtReal res = ep_residual(inst, x, yg);
        CertificateResult cert = ep_solution_certificate(inst, x, yg, cg, 1e-6);
        bool solves = res.finite() && res.raw() >= -1e-6;
        if (cert.found != solves) consistent = false;
        if (std::abs(x[0] - 0.5) < 1e-12) {
            half_cert = cert.found;
            half_at_zero = cert.found && std::abs(cert.xstar[0]) <= 1e-9 && cert.matches == 1;
        }
    }
    add_row(rows, "ep_certificate_sweep", consistent && half_cert && half_at_zero,
            "certificate iff vanishing residual across 21 points; unique multiplier at the solution");

    ZdgpReport z = zdgp_check(inst, xs, yg, cg, 1e-4);
    add_row(rows, "ep_gap_closure", z.all_ok && z.fenchel_ok && z.worst_shift <= 1e-6, z.detail);
}

void suite_cp(std::vector<SuiteRow>& rows) {
    CPInstance lcp{SetSpec::make_orthant(2), {{{2, 1}, {1, 2}}, {-1, -1}}, "lcp_pd"};
    LCPResult r = lcp_enumerate(lcp);
    bool sol_ok = r.found && r.solutions == 1 &&
                  std::abs(r.x[0] - 1.0 / 3.0) <= 1e-12 && std::abs(r.x[1] - 1.0 / 3.0) <= 1e-12;
    add_row(rows, "lcp_enumeration", sol_ok, r.detail);

    CPInstance bad{SetSpec::make_orthant(2), {{{-1, 0}, {0, -1}}, {-1, -1}}, "lcp_infeasible"};
    LCPResult rb = lcp_enumerate(bad);
    add_row(rows, "lcp_infeasible_none", !rb.found, rb.detail);

    GridSpec yg{Box::centered(2, 20), 61, 0};
    Box cb;
    cb.lo = {0.0, 0.0};
    cb.hi = {4.0, 4.0};
    GridSpec cgrid{cb, 17, 0};
    std::vector<std::vector<double>> classify = {{1.0 / 3.0, 1.0 / 3.0}, {1.0, 0.0}, {0.0, 0.0}};
    CPEquivalenceReport eq = cp_zdgp_equivalence(lcp, yg, cgrid, classify, 100, 1e-6);
    add_row(rows, "cp_closed_form_vs_engine",
            eq.pattern_match && eq.domain_match && eq.classification_ok && eq.max_diff <= 1e-6,
            eq.detail);
}

}  // namespace

ExperimentResult run_paper_suite(const ExperimentOptions& opt) {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<SuiteRow> rows;
    suite_examples(rows);
    suite_duality_identities(rows);
    suite_schemes(rows);
    suite_ep(rows);
    suite_cp(rows);

    bool all = true;
    JsonValue table = JsonValue::arr();
    std::vector<std::vector<std::string>> csv_rows;
    for (const auto& r : rows) {
        if (!r.pass) all = false;
        JsonValue j;
        j.set("check", JsonValue::str(r.name));
        j.set("pass", JsonValue::flag(r.pass));
        j.set("detail", JsonValue::str(r.detail));
        table.push(std::move(j));
        csv_rows.push_back({r.name, r.pass ? "pass" : "fail", r.detail});
    }

    JsonValue rep;
    rep.set("experiment", JsonValue::str("paper-suite"));
    rep.set("checks", std::move(table));
    rep.set("all_pass", JsonValue::flag(all));
    JsonValue v;
    v.set("gcoup", JsonValue::str(kVersion));
    v.set("report_schema", JsonValue::integer(1));
    rep.set("versions", std::move(v));

    std::string csv = csv_table({"check", "result", "detail"}, csv_rows);
    return finish(std::move(rep), all, opt, csv, t0);
}

std::string list_builtins_text() {
    std::string out;
    for (const auto& [name, role] : builtin_catalog()) {
        char buf[240];
        std::snprintf(buf, sizeof buf, "%-16s %s\n", name.c_str(), role.c_str());
        out += buf;
    }
    return out;
}

}  // namespace gcoup
