#include "gcoup/problem_file.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "gcoup/errors.hpp"

namespace gcoup {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& msg, const std::string& path) {
    throw SchemaError(msg, path);
}

const json& need(const json& j, const char* key, const std::string& path) {
    auto it = j.find(key);
    if (it == j.end()) fail(std::string("missing field '") + key + "'", path);
    return *it;
}

double num_at(const json& j, const std::string& path) {
    if (!j.is_number()) fail("expected a number", path);
    return j.get<double>();
}

int int_at(const json& j, const std::string& path) {
    if (!j.is_number_integer()) fail("expected an integer", path);
    return j.get<int>();
}

std::string str_at(const json& j, const std::string& path) {
    if (!j.is_string()) fail("expected a string", path);
    return j.get<std::string>();
}

std::vector<double> vec_at(const json& j, const std::string& path) {
    if (!j.is_array()) fail("expected an array of numbers", path);
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(num_at(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

std::vector<std::string> default_vars(const char* stem, int count, int offset = 0) {
    std::vector<std::string> vars;
    for (int i = 1; i <= count; ++i) vars.push_back(stem + std::to_string(i + offset));
    return vars;
}

std::vector<std::string> vars_at(const json& block, int n, const std::string& path) {
    auto it = block.find("vars");
    if (it == block.end()) return default_vars("x", n);
    if (!it->is_array()) fail("expected an array of names", path + ".vars");
    std::vector<std::string> vars;
    for (const auto& v : *it) vars.push_back(str_at(v, path + ".vars"));
    return vars;
}

ExprFn expr_at(const json& j, const std::vector<std::string>& vars, const std::string& path) {
    std::string text = str_at(j, path);
    try {
        return ExprFn::parse(text, vars);
    } catch (const ParseError& e) {
        fail(std::string("bad expression: ") + e.what(), path);
    }
}

SetSpec set_at(const json& j, int dim, const std::string& path) {
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (s == "orthant") return SetSpec::make_orthant(dim);
        if (s == "full") return SetSpec::make_full(dim);
        fail("unknown set shorthand '" + s + "'", path);
    }
    if (!j.is_object()) fail("expected a set object or shorthand string", path);
    std::string kind = str_at(need(j, "kind", path), path + ".kind");
    if (kind == "box") {
        Box b;
        b.lo = vec_at(need(j, "lo", path), path + ".lo");
        b.hi = vec_at(need(j, "hi", path), path + ".hi");
        if (b.lo.size() != b.hi.size()) fail("lo and hi lengths differ", path);
        return SetSpec::make_box(b);
    }
    if (kind == "orthant") return SetSpec::make_orthant(int_at(need(j, "dim", path), path + ".dim"));
    if (kind == "full") return SetSpec::make_full(int_at(need(j, "dim", path), path + ".dim"));
    if (kind == "halfspaces") {
        int d = int_at(need(j, "dim", path), path + ".dim");
        const json& rows = need(j, "rows", path);
        if (!rows.is_array()) fail("expected an array of rows", path + ".rows");
        std::vector<Halfspace> hs;
        for (std::size_t i = 0; i < rows.size(); ++i) {
            std::string rp = path + ".rows[" + std::to_string(i) + "]";
            Halfspace h;
            h.a = vec_at(need(rows[i], "a", rp), rp + ".a");
            if (auto it = rows[i].find("b"); it != rows[i].end()) h.b = num_at(*it, rp + ".b");
            hs.push_back(std::move(h));
        }
        return SetSpec::make_halfspaces(d, std::move(hs));
    }
    if (kind == "dual_cone")
        return SetSpec::dual_cone_of(set_at(need(j, "base", path), dim, path + ".base"));
    fail("unknown set kind '" + kind + "'", path + ".kind");
}

}  // namespace

GridSpec ProblemFile::xgrid() const {
    return GridSpec{Box::centered(static_cast<std::size_t>(n), numeric.radius),
                    numeric.points_per_dim, numeric.refinement_rounds};
}

GridSpec ProblemFile::cgrid() const {
    return GridSpec{Box::centered(static_cast<std::size_t>(m), numeric.radius),
                    numeric.points_per_dim, numeric.refinement_rounds};
}

ProblemFile parse_problem_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(std::string("not valid JSON: ") + e.what(), "$");
    }
    if (!doc.is_object()) fail("top level must be an object", "$");

    ProblemFile pf;
    if (auto it = doc.find("name"); it != doc.end()) pf.name = str_at(*it, "$.name");

    if (auto it = doc.find("dims"); it != doc.end()) {
        pf.n = int_at(need(*it, "n", "$.dims"), "$.dims.n");
        pf.m = (*it).contains("m") ? int_at((*it)["m"], "$.dims.m") : pf.n;
        if (pf.n < 1 || pf.m < 1) fail("dims must be positive", "$.dims");
    }

    if (auto it = doc.find("numeric"); it != doc.end()) {
        const json& nj = *it;
        if (nj.contains("tol")) pf.numeric.tol = num_at(nj["tol"], "$.numeric.tol");
        if (nj.contains("radius")) pf.numeric.radius = num_at(nj["radius"], "$.numeric.radius");
        if (nj.contains("points_per_dim"))
            pf.numeric.points_per_dim = int_at(nj["points_per_dim"], "$.numeric.points_per_dim");
        if (nj.contains("refinement_rounds"))
            pf.numeric.refinement_rounds =
                int_at(nj["refinement_rounds"], "$.numeric.refinement_rounds");
        if (nj.contains("seed"))
            pf.numeric.seed = static_cast<unsigned>(int_at(nj["seed"], "$.numeric.seed"));
        if (pf.numeric.tol <= 0 || pf.numeric.radius <= 0 || pf.numeric.points_per_dim < 2)
            fail("numeric block out of range", "$.numeric");
    }

    if (auto it = doc.find("f"); it != doc.end()) {
        const json& fj = *it;
        if (!fj.is_object()) fail("expected an object", "$.f");
        auto vars = vars_at(fj, pf.n, "$.f");
        if (static_cast<int>(vars.size()) != pf.n) fail("vars length must equal n", "$.f.vars");
        ExprFn e = expr_at(need(fj, "expr", "$.f"), vars, "$.f.expr");
        std::optional<SetSpec> dom;
        if (fj.contains("dom")) dom = set_at(fj["dom"], pf.n, "$.f.dom");
        pf.f = ProperFn::from_expr(e, dom, pf.name + "_f");
    }

    if (auto it = doc.find("g"); it != doc.end()) {
        const json& gj = *it;
        if (!gj.is_object()) fail("expected an object", "$.g");
        if (gj.contains("builtin")) {
            BuiltinArgs ba;
            ba.n = pf.n;
            ba.m = pf.m;
            if (gj.contains("K")) ba.K = set_at(gj["K"], pf.n, "$.g.K");
            if (gj.contains("dom_from_f") && gj["dom_from_f"].get<bool>()) {
                if (!pf.f) fail("dom_from_f needs an f block", "$.g.dom_from_f");
                ba.dom_of = *pf.f;
            }
            try {
                pf.g = builtin_coupling(str_at(gj["builtin"], "$.g.builtin"), ba);
            } catch (const Error& e) {
                fail(e.what(), "$.g.builtin");
            }
        } else {
            auto vars = default_vars("x", pf.n);
            auto cvars = default_vars("c", pf.m);
            vars.insert(vars.end(), cvars.begin(), cvars.end());
            ExprFn e = expr_at(need(gj, "expr", "$.g"), vars, "$.g.expr");
            Coupling g;
            g.n = pf.n;
            g.m = pf.m;
            g.C = set_at(need(gj, "C", "$.g"), pf.m, "$.g.C");
            g.name = pf.name + "_g";
            g.raw = [e, n = pf.n, m = pf.m](std::span<const double> x,
                                            std::span<const double> xs) {
                std::vector<double> env(n + m);
                std::copy(x.begin(), x.end(), env.begin());
                std::copy(xs.begin(), xs.end(), env.begin() + n);
                return e.eval(env);
            };
            pf.g = std::move(g);
        }
    }

    if (auto it = doc.find("lagrangian"); it != doc.end()) {
        const json& lj = *it;
        auto vars = vars_at(lj, pf.n, "$.lagrangian");
        ConstrainedProblem cp;
        cp.n = pf.n;
        cp.name = pf.name;
        cp.f = expr_at(need(lj, "objective", "$.lagrangian"), vars, "$.lagrangian.objective");
        const json& cons = need(lj, "constraints", "$.lagrangian");
        if (!cons.is_array() || cons.empty())
            fail("expected a non-empty array", "$.lagrangian.constraints");
        for (std::size_t i = 0; i < cons.size(); ++i)
            cp.h.push_back(expr_at(cons[i], vars,
                                   "$.lagrangian.constraints[" + std::to_string(i) + "]"));
        pf.lagrangian = std::move(cp);
    }

    if (auto it = doc.find("perturbation"); it != doc.end()) {
        const json& pj = *it;
        int p = pj.contains("p") ? int_at(pj["p"], "$.perturbation.p") : 1;
        if (p < 1) fail("p must be positive", "$.perturbation.p");
        auto vars = default_vars("x", pf.n);
        auto uvars = default_vars("u", p);
        vars.insert(vars.end(), uvars.begin(), uvars.end());
        PerturbationScheme ps;
        ps.n = pf.n;
        ps.p = p;
        ps.name = pf.name;
        ps.phi = expr_at(need(pj, "phi", "$.perturbation"), vars, "$.perturbation.phi");
        pf.perturbation = std::move(ps);
    }

    if (auto it = doc.find("ep"); it != doc.end()) {
        const json& ej = *it;
        EPInstance ep;
        ep.n = pf.n;
        ep.name = pf.name;
        ep.K = set_at(need(ej, "K", "$.ep"), pf.n, "$.ep.K");
        auto vars = default_vars("x", pf.n);
        auto yvars = default_vars("y", pf.n);
        vars.insert(vars.end(), yvars.begin(), yvars.end());
        ep.f = expr_at(need(ej, "f", "$.ep"), vars, "$.ep.f");
        pf.ep = std::move(ep);
    }

    if (auto it = doc.find("vip"); it != doc.end()) {
        const json& vj = *it;
        VIPInstance vip;
        vip.n = pf.n;
        vip.name = pf.name;
        vip.K = set_at(need(vj, "K", "$.vip"), pf.n, "$.vip.K");
        const json& mj = need(vj, "M", "$.vip");
        if (!mj.is_array()) fail("expected a matrix", "$.vip.M");
        for (std::size_t i = 0; i < mj.size(); ++i)
            vip.M.push_back(vec_at(mj[i], "$.vip.M[" + std::to_string(i) + "]"));
        vip.q = vec_at(need(vj, "q", "$.vip"), "$.vip.q");
        if (static_cast<int>(vip.M.size()) != pf.n ||
            static_cast<int>(vip.q.size()) != pf.n)
            fail("M and q must match dims.n", "$.vip");
        pf.vip = std::move(vip);
    }

    if (auto it = doc.find("epvip"); it != doc.end()) {
        const json& ej = *it;
        SetSpec K = set_at(need(ej, "K", "$.epvip"), pf.n, "$.epvip.K");
        auto xvars = default_vars("x", pf.n);
        auto xyvars = xvars;
        auto yvars = default_vars("y", pf.n);
        xyvars.insert(xyvars.end(), yvars.begin(), yvars.end());
        std::vector<ExprFn> F, eta;
        const json& Fj = need(ej, "F", "$.epvip");
        const json& etaj = need(ej, "eta", "$.epvip");
        if (!Fj.is_array() || !etaj.is_array() || Fj.size() != etaj.size() || Fj.empty())
            fail("F and eta must be equal-length non-empty arrays", "$.epvip");
        for (std::size_t i = 0; i < Fj.size(); ++i) {
            F.push_back(expr_at(Fj[i], xvars, "$.epvip.F[" + std::to_string(i) + "]"));
            eta.push_back(expr_at(etaj[i], xyvars, "$.epvip.eta[" + std::to_string(i) + "]"));
        }
        ProperFn h =
            ej.contains("h")
                ? ProperFn::from_expr(expr_at(ej["h"], xvars, "$.epvip.h"), std::nullopt,
                                      pf.name + "_h")
                : ProperFn(pf.n, [](std::span<const double>) { return ExtReal(0.0); }, "zero");
        pf.epvip = EPVIPInstance{std::move(K), std::move(F), std::move(eta), std::move(h),
                                 pf.n, pf.name};
    }

    if (auto it = doc.find("cp"); it != doc.end()) {
        const json& cj = *it;
        CPInstance cp;
        cp.name = pf.name;
        cp.K = cj.contains("K") ? set_at(cj["K"], pf.n, "$.cp.K")
                                : SetSpec::make_orthant(pf.n);
        const json& mj = need(cj, "M", "$.cp");
        if (!mj.is_array()) fail("expected a matrix", "$.cp.M");
        for (std::size_t i = 0; i < mj.size(); ++i)
            cp.T.M.push_back(vec_at(mj[i], "$.cp.M[" + std::to_string(i) + "]"));
        cp.T.q = vec_at(need(cj, "q", "$.cp"), "$.cp.q");
        try {
            cp.T.validate();
        } catch (const Error& e) {
            fail(e.what(), "$.cp");
        }
        if (cp.T.dim() != pf.n) fail("M and q must match dims.n", "$.cp");
        pf.cp = std::move(cp);
    }

    return pf;
}

ProblemFile load_problem_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw SchemaError("cannot open problem file '" + path + "'", "$");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_problem_text(ss.str());
}

}  // namespace gcoup
