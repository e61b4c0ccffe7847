#include <doctest.h>

#include <gcoup/coupling.hpp>
#include <gcoup/expr.hpp>
#include <gcoup/proper_fn.hpp>

using namespace gcoup;

namespace {
double at(const Coupling& g, std::vector<double> x, std::vector<double> xs) {
    return g.eval(x, xs).raw();
}
bool inf_at(const Coupling& g, std::vector<double> x, std::vector<double> xs) {
    return g.eval(x, xs).is_pos_inf();
}
}

TEST_CASE("catalog lists nine couplings") {
    const auto& cat = builtin_catalog();
    CHECK(cat.size() == 9);
    for (const auto& [name, role] : cat) {
        CHECK(!role.empty());
        BuiltinArgs ba;
        if (name == "norm_on_dom")
            ba.dom_of = ProperFn::from_expr(ExprFn::parse("x1^2", {"x1"}), std::nullopt, "sq");
        if (name == "cone_inner" || name == "ik_shifted")
            ba.K = SetSpec::make_box(Box::interval(0, 1));
        Coupling g = builtin_coupling(name, ba);
        CHECK(g.name == name);
    }
    CHECK_THROWS_AS(builtin_coupling("no_such"), Error);
}

TEST_CASE("exp") {
    Coupling g = builtin_coupling("exp");
    CHECK(at(g, {0}, {0}) == 1.0);
    CHECK(at(g, {1}, {1}) == doctest::Approx(std::exp(2.0)));
    CHECK(at(g, {-40}, {0}) > 0.0);  // strictly positive everywhere
}

TEST_CASE("square_product") {
    Coupling g = builtin_coupling("square_product");
    CHECK(at(g, {2}, {3}) == 36.0);
    CHECK(at(g, {-2}, {3}) == 36.0);
    CHECK(at(g, {0}, {5}) == 0.0);
}

TEST_CASE("reciprocal clips at the negative axis") {
    Coupling g = builtin_coupling("reciprocal");
    CHECK(at(g, {1}, {1}) == 0.5);
    CHECK(at(g, {0}, {7}) == 1.0);
    CHECK(at(g, {-1}, {1}) == 0.0);
    CHECK(inf_at(g, {1}, {-1}));  // second slot leaves C
}

TEST_CASE("norm_on_dom gates on the objective domain") {
    ProperFn f = ProperFn::from_expr(ExprFn::parse("x1^2", {"x1"}), SetSpec::make_orthant(1),
                                     "sq_plus");
    BuiltinArgs ba;
    ba.n = 1;
    ba.m = 2;
    ba.dom_of = f;
    Coupling g = builtin_coupling("norm_on_dom", ba);
    CHECK(at(g, {1}, {3, 4}) == 5.0);
    CHECK(at(g, {-1}, {3, 4}) == 0.0);
    CHECK(at(g, {2}, {0, 0}) == 0.0);
}

TEST_CASE("max_dot and min_dot") {
    BuiltinArgs ba;
    ba.n = 2;
    Coupling mx = builtin_coupling("max_dot", ba);
    CHECK(at(mx, {1, 2}, {3, 1}) == 3.0);
    CHECK(at(mx, {-1, 2}, {3, 1}) == 0.0);
    CHECK(inf_at(mx, {1, 2}, {-1, 1}));

    Coupling mn = builtin_coupling("min_dot", ba);
    CHECK(at(mn, {2, 5}, {3, 0}) == 6.0);   // support is just the first slot
    CHECK(at(mn, {2, 5}, {0, 0}) == 0.0);   // empty support
    CHECK(at(mn, {2, 5}, {1, 1}) == 2.0);
}

TEST_CASE("lagrangian_g1 pairs multipliers with feasibility slacks") {
    BuiltinArgs ba;
    ba.m = 2;
    Coupling g = builtin_coupling("lagrangian_g1", ba);
    CHECK(at(g, {1, 2}, {3, 4}) == 11.0);
    CHECK(at(g, {-1, 2}, {3, 4}) == 0.0);
    CHECK(inf_at(g, {1, 2}, {-3, 4}));
}

TEST_CASE("cone_inner works for a non-cone K") {
    BuiltinArgs ba;
    ba.K = SetSpec::make_box(Box::interval(0, 1));
    Coupling g = builtin_coupling("cone_inner", ba);
    CHECK(at(g, {0.5}, {2}) == 1.0);
    CHECK(at(g, {2}, {2}) == 0.0);    // first slot outside K
    CHECK(inf_at(g, {0.5}, {-1}));    // second slot outside the dual cone
}

TEST_CASE("ik_shifted subtracts the support infimum") {
    BuiltinArgs ba;
    ba.K = SetSpec::make_box(Box::interval(0, 1));
    Coupling g = builtin_coupling("ik_shifted", ba);
    // bounded K: C is the whole line, shift is min(0, xstar)
    CHECK(at(g, {0.5}, {2}) == 1.0);
    CHECK(at(g, {0.5}, {-2}) == 1.0);
    CHECK(at(g, {2}, {-2}) == 0.0);

    BuiltinArgs bo;
    bo.K = SetSpec::make_orthant(1);
    Coupling h = builtin_coupling("ik_shifted", bo);
    CHECK(at(h, {3}, {2}) == 6.0);     // shift vanishes on the dual cone
    CHECK(inf_at(h, {3}, {-2}));       // outside C the value is plus infinity
}

TEST_CASE("builtin argument errors") {
    CHECK_THROWS_AS(builtin_coupling("norm_on_dom"), Error);
    CHECK_THROWS_AS(builtin_coupling("cone_inner"), Error);
    BuiltinArgs ba;
    ba.n = 2;
    CHECK_THROWS_AS(builtin_coupling("exp", ba), Error);
}

TEST_CASE("validation passes for a healthy coupling") {
    GridSpec xg{Box::interval(-5, 5), 41, 0};
    CouplingValidation v =
        validate_coupling(builtin_coupling("square_product"), xg, xg, 1e-9);
    CHECK(v.d1_ok);
    CHECK(v.d2_ok);
    CHECK(v.d2_inf == 0.0);
    CHECK(v.nonneg_ok);
    CHECK(v.ok());
}

TEST_CASE("validation flags a coupling whose infimum stays positive") {
    Coupling g;
    g.n = g.m = 1;
    g.C = SetSpec::make_full(1);
    g.name = "offset";
    g.raw = [](std::span<const double>, std::span<const double>) { return ExtReal(2.0); };
    GridSpec xg{Box::interval(-5, 5), 21, 0};
    CouplingValidation v = validate_coupling(g, xg, xg, 1e-9);
    CHECK(!v.d2_ok);
    CHECK(v.d2_inf == 2.0);
    CHECK(!v.ok());
}

TEST_CASE("star properties hold for max_dot") {
    BuiltinArgs ba;
    ba.n = 2;
    StarReport r = check_star_properties(builtin_coupling("max_dot", ba), 200, 1e-9, 1);
    CHECK(r.homogeneous_x);
    CHECK(r.homogeneous_star);
    CHECK(r.increasing_x);
    CHECK(r.increasing_star);
    CHECK(r.all_ok());
}

TEST_CASE("star properties fail for exp") {
    StarReport r = check_star_properties(builtin_coupling("exp"), 200, 1e-9, 1);
    CHECK(!r.homogeneous_x);
    CHECK(!r.counterexample.empty());
}
