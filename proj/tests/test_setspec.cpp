#include <doctest.h>

#include <gcoup/grid.hpp>
#include <gcoup/set_spec.hpp>

using namespace gcoup;

TEST_CASE("box membership") {
    SetSpec s = SetSpec::make_box(Box::interval(0, 1));
    CHECK(s.dim() == 1);
    CHECK(s.kind() == SetKind::box);
    CHECK(s.contains(std::vector<double>{0.5}));
    CHECK(s.contains(std::vector<double>{1.0}));
    CHECK(!s.contains(std::vector<double>{1.1}));
    CHECK(s.contains(std::vector<double>{1.0 + 1e-12}));  // within tol
}

TEST_CASE("orthant and full") {
    SetSpec o = SetSpec::make_orthant(2);
    CHECK(o.contains(std::vector<double>{0.0, 3.0}));
    CHECK(!o.contains(std::vector<double>{-1.0, 3.0}));
    SetSpec f = SetSpec::make_full(3);
    CHECK(f.contains(std::vector<double>{-5.0, 0.0, 7.0}));
}

TEST_CASE("halfspace systems intersect their rows") {
    // x + y >= 1 and x - y >= 0
    SetSpec s = SetSpec::make_halfspaces(
        2, {Halfspace{{1.0, 1.0}, 1.0}, Halfspace{{1.0, -1.0}, 0.0}});
    CHECK(s.contains(std::vector<double>{1.0, 0.0}));
    CHECK(!s.contains(std::vector<double>{0.0, 0.0}));
    CHECK(!s.contains(std::vector<double>{0.0, 2.0}));
}

TEST_CASE("dual cone of an interval is the nonnegative ray") {
    SetSpec d = SetSpec::dual_cone_of(SetSpec::make_box(Box::interval(0, 1)));
    CHECK(d.contains(std::vector<double>{2.0}));
    CHECK(d.contains(std::vector<double>{0.0}));
    CHECK(!d.contains(std::vector<double>{-0.5}));
}

TEST_CASE("dual cone of the orthant is itself") {
    SetSpec d = SetSpec::dual_cone_of(SetSpec::make_orthant(2));
    CHECK(d.contains(std::vector<double>{1.0, 0.0}));
    CHECK(!d.contains(std::vector<double>{1.0, -0.1}));
}

TEST_CASE("dual cone of a box straddling zero is only the origin") {
    SetSpec d = SetSpec::dual_cone_of(SetSpec::make_box(Box::interval(-1, 1)));
    CHECK(d.contains(std::vector<double>{0.0}));
    CHECK(!d.contains(std::vector<double>{0.5}));
    CHECK(!d.contains(std::vector<double>{-0.5}));
}

TEST_CASE("recession cone of a bounded box is trivial") {
    SetSpec r = SetSpec::make_box(Box::interval(0, 1)).recession_cone();
    CHECK(r.contains(std::vector<double>{0.0}));
    CHECK(!r.contains(std::vector<double>{0.1}));
}

TEST_CASE("recession cone of the orthant is the orthant") {
    SetSpec r = SetSpec::make_orthant(2).recession_cone();
    CHECK(r.contains(std::vector<double>{5.0, 2.0}));
    CHECK(!r.contains(std::vector<double>{-1.0, 0.0}));
}

TEST_CASE("support infimum in closed form") {
    SetSpec box = SetSpec::make_box(Box::interval(0, 1));
    auto v = box.support_inf(std::vector<double>{-2.0});
    REQUIRE(v.has_value());
    CHECK(v->raw() == -2.0);  // attained at y = 1
    auto w = box.support_inf(std::vector<double>{3.0});
    REQUIRE(w.has_value());
    CHECK(w->raw() == 0.0);  // attained at y = 0

    SetSpec orth = SetSpec::make_orthant(1);
    auto u = orth.support_inf(std::vector<double>{-1.0});
    REQUIRE(u.has_value());
    CHECK(u->is_neg_inf());
    auto z = orth.support_inf(std::vector<double>{1.0});
    REQUIRE(z.has_value());
    CHECK(z->raw() == 0.0);
}

TEST_CASE("sampling box clips unbounded sets to the radius") {
    Box b = SetSpec::make_orthant(2).sampling_box(5.0);
    CHECK(b.lo[0] == 0.0);
    CHECK(b.hi[0] == 5.0);
    Box bb = SetSpec::make_box(Box::interval(0, 1)).sampling_box(5.0);
    CHECK(bb.lo[0] == 0.0);
    CHECK(bb.hi[0] == 1.0);
}

TEST_CASE("points_in keeps ascending flat indices inside the set") {
    GridSpec g{Box::interval(-2, 2), 5, 0};  // -2 -1 0 1 2
    auto fp = points_in(SetSpec::make_orthant(1), g);
    REQUIRE(fp.pts.size() == 3);
    CHECK(fp.pts[0][0] == 0.0);
    CHECK(fp.pts[2][0] == 2.0);
    CHECK(fp.flat_index[0] == 2);
    CHECK(fp.flat_index[2] == 4);
}

TEST_CASE("shape errors throw") {
    CHECK_THROWS_AS(SetSpec::make_halfspaces(2, {Halfspace{{1.0}, 0.0}}), SetSpecError);
    SetSpec s = SetSpec::make_orthant(2);
    CHECK_THROWS_AS((void)s.contains(std::vector<double>{1.0}), SetSpecError);
}
