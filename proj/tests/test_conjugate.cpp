#include <doctest.h>

#include <cmath>
#include <gcoup/conjugate.hpp>
#include <gcoup/expr.hpp>

using namespace gcoup;

namespace {

GridSpec wide() { return GridSpec{Box::interval(-20, 20), 201, 0}; }

ProperFn square() {
    return ProperFn::from_expr(ExprFn::parse("x1^2", {"x1"}), std::nullopt, "sq");
}

}  // namespace

TEST_CASE("square against the squared product: unit plateau then divergence") {
    SampledFn fg = g_conjugate(square(), builtin_coupling("square_product"), wide(), wide());
    REQUIRE(fg.size() == 201);
    for (std::size_t i = 0; i < fg.size(); ++i) {
        double xs = fg.pts[i][0];
        if (std::abs(xs) <= 1.0 + 1e-12) {
            CHECK(fg.statuses[i] == OptStatus::attained);
            CHECK(std::abs(fg.values[i].raw()) <= 1e-9);
        } else {
            CHECK(fg.statuses[i] == OptStatus::divergent);
            CHECK(fg.values[i].is_pos_inf());
        }
    }
    CHECK(fg.proper());
    CHECK(fg.min_value().raw() == 0.0);
}

TEST_CASE("biconjugate of the square reproduces it on the grid") {
    SampledFn fg = g_conjugate(square(), builtin_coupling("square_product"), wide(), wide());
    SampledFn fgg = g_biconjugate(builtin_coupling("square_product"), wide(), fg);
    ProperFn f = square();
    for (std::size_t i = 0; i < fgg.size(); ++i) {
        double x = fgg.pts[i][0];
        REQUIRE(fgg.values[i].finite());
        CHECK(fgg.values[i].raw() == doctest::Approx(x * x).epsilon(1e-12));
        // never above f
        CHECK(fgg.values[i].raw() <= f.eval(fgg.pts[i]).raw() + 1e-12);
    }
}

TEST_CASE("restricted square against the clipped reciprocal: constant one") {
    ProperFn f = ProperFn::from_expr(ExprFn::parse("x1^2", {"x1"}), SetSpec::make_orthant(1),
                                     "sq_plus");
    SampledFn fg = g_conjugate(f, builtin_coupling("reciprocal"), wide(), wide());
    REQUIRE(fg.size() == 101);  // retained points stay inside C
    for (std::size_t i = 0; i < fg.size(); ++i) {
        CHECK(fg.values[i].raw() == 1.0);
    }
}

TEST_CASE("exponential against the exponential pairing") {
    ProperFn f = ProperFn::from_expr(ExprFn::parse("exp(x1)", {"x1"}), std::nullopt, "ex");
    SampledFn fg = g_conjugate(f, builtin_coupling("exp"), wide(), wide());
    for (std::size_t i = 0; i < fg.size(); ++i) {
        double xs = fg.pts[i][0];
        if (xs <= 1e-12) {
            CHECK(fg.values[i].raw() == 0.0);
        } else {
            CHECK(fg.values[i].is_pos_inf());
        }
    }
}

TEST_CASE("membership splits the gap infimum") {
    SampledFn fg = g_conjugate(square(), builtin_coupling("square_product"), wide(), wide());
    MembershipReport mem = membership_Ff(make_gamma(square(), fg), wide(), 1e-6);
    CHECK(mem.member);
    CHECK(mem.fg_proper);
    CHECK(mem.inf_gamma.raw() == 0.0);
    CHECK(mem.inf_f.raw() == 0.0);
    CHECK(mem.min_fg.raw() == 0.0);
    CHECK(mem.witness_x[0] == 0.0);
}

TEST_CASE("positive gap blocks membership") {
    ProperFn f = ProperFn::from_expr(ExprFn::parse("x1^2", {"x1"}), SetSpec::make_orthant(1),
                                     "sq_plus");
    SampledFn fg = g_conjugate(f, builtin_coupling("reciprocal"), wide(), wide());
    MembershipReport mem = membership_Ff(make_gamma(f, fg), wide(), 1e-6);
    CHECK(!mem.member);
    CHECK(mem.inf_gamma.raw() == doctest::Approx(1.0));
}

TEST_CASE("gamma evaluates as a sum and is nonnegative") {
    SampledFn fg = g_conjugate(square(), builtin_coupling("square_product"), wide(), wide());
    GammaFn gam = make_gamma(square(), fg);
    auto idx = fg.find_point(std::vector<double>{1.0});
    REQUIRE(idx.has_value());
    ExtReal v = gam.at(std::vector<double>{2.0}, *idx);
    CHECK(v.raw() == doctest::Approx(4.0));  // f(2) + fg(1) = 4 + 0
    ExtReal w = gam.eval(std::vector<double>{2.0}, std::vector<double>{1.0});
    CHECK(w.raw() == doctest::Approx(4.0));
}

TEST_CASE("value identity and minimizer transfer for a member pair") {
    SampledFn fg = g_conjugate(square(), builtin_coupling("square_product"), wide(), wide());
    SampledFn fgg = g_biconjugate(builtin_coupling("square_product"), wide(), fg);
    DualityReport dr = duality_report(square(), fgg, 1e-6);
    CHECK(dr.identity_ok);
    CHECK(dr.transfer_ok);
    CHECK(dr.identity_gap <= 1e-9);
    REQUIRE(dr.argmin_f.has_value());
    CHECK((*dr.argmin_f)[0] == 0.0);
}

TEST_CASE("dual attainment picks the smallest-norm argmin") {
    ProperFn f = ProperFn::from_expr(ExprFn::parse("exp(x1)", {"x1"}), std::nullopt, "ex");
    SampledFn fg = g_conjugate(f, builtin_coupling("exp"), wide(), wide());
    DualAttainment da = dual_attainment(f, builtin_coupling("exp"), wide(), fg, 1e-6);
    CHECK(da.attained);
    CHECK(da.dual_value.raw() == 0.0);
    REQUIRE(da.xstar.size() == 1);
    CHECK(da.xstar[0] == 0.0);
    CHECK(!da.improved_when_widened);
}

TEST_CASE("sampled lookups") {
    SampledFn fg = g_conjugate(square(), builtin_coupling("square_product"), wide(), wide());
    auto i = fg.find_point(std::vector<double>{0.0});
    REQUIRE(i.has_value());
    CHECK(fg.pts[*i][0] == 0.0);
    CHECK(!fg.find_point(std::vector<double>{0.05}).has_value());
    auto j = fg.argmin_entry();
    REQUIRE(j.has_value());
    CHECK(fg.values[*j].raw() == 0.0);
}

TEST_CASE("approximating sequence shrinks toward the limit conjugate") {
    GridSpec g = wide();
    Coupling sq = builtin_coupling("square_product");
    std::vector<ProperFn> fs;
    std::vector<Coupling> gs;
    for (int k = 1; k <= 3; ++k) {
        double c = 1.0 / k;
        auto e = ExprFn::parse("x1^2 + " + std::to_string(c), {"x1"});
        fs.push_back(ProperFn::from_expr(e, std::nullopt, "fk"));
        gs.push_back(sq);
    }
    ClosureReport rep = closure_experiment(fs, gs, square(), sq, g, g, 1e-6);
    REQUIRE(rep.steps.size() == 3);
    CHECK(rep.steps[0].sup_diff == doctest::Approx(1.0));
    CHECK(rep.steps[2].sup_diff == doctest::Approx(1.0 / 3.0));
    CHECK(rep.decreasing);
    CHECK(rep.pattern_converges);
    for (const auto& s : rep.steps) {
        CHECK(s.pattern_match);
        CHECK(s.member);
    }
    CHECK(rep.limit_sup_diff == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("shifting f by a constant shifts the conjugate down") {
    GridSpec g = wide();
    Coupling sq = builtin_coupling("square_product");
    SampledFn base = g_conjugate(square(), sq, g, g);
    ProperFn shifted =
        ProperFn::from_expr(ExprFn::parse("x1^2 + 2.5", {"x1"}), std::nullopt, "sq_shift");
    SampledFn up = g_conjugate(shifted, sq, g, g);
    REQUIRE(base.size() == up.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
        if (base.values[i].finite()) {
            REQUIRE(up.values[i].finite());
            CHECK(up.values[i].raw() == doctest::Approx(base.values[i].raw() - 2.5));
        } else {
            CHECK(up.values[i].is_pos_inf());
        }
    }
}
