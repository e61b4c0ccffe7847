#include <doctest.h>

#include <cmath>
#include <gcoup/expr.hpp>
#include <gcoup/recession.hpp>

using namespace gcoup;

TEST_CASE("angles between unit vectors") {
    CHECK(angle_deg(std::vector<double>{1.0, 0.0}, std::vector<double>{0.0, 1.0}) ==
          doctest::Approx(90.0));
    CHECK(angle_deg(std::vector<double>{1.0}, std::vector<double>{-1.0}) ==
          doctest::Approx(180.0));
    CHECK(angle_deg(std::vector<double>{1.0, 0.0}, std::vector<double>{1.0, 0.0}) ==
          doctest::Approx(0.0));
}

TEST_CASE("sphere coverage per dimension") {
    auto line = sphere_directions(1, 1.0);
    REQUIRE(line.size() == 2);
    auto circle = sphere_directions(2, 1.0);
    CHECK(circle.size() == 360);
    for (const auto& d : circle) {
        CHECK(std::abs(d[0] * d[0] + d[1] * d[1] - 1.0) <= 1e-9);
    }
}

TEST_CASE("cone filtering keeps matching directions") {
    auto cand = sphere_directions(2, 1.0);
    DirectionSet quad = directions_of_cone(SetSpec::make_orthant(2), cand);
    CHECK(quad.dirs.size() == 91);  // quarter circle at one degree, both ends
    DirectionSet none = directions_of_cone(
        SetSpec::make_box(Box::centered(2, 1.0)), cand);
    // a bounded box is not a cone through any unit direction
    CHECK(none.zero_only());
}

TEST_CASE("subset comparisons respect the angular slack") {
    DirectionSet a;
    a.dim = 2;
    a.dirs = {{1.0, 0.0}};
    DirectionSet b;
    b.dim = 2;
    double t = 5.0 * M_PI / 180.0;
    b.dirs = {{std::cos(t), std::sin(t)}};
    CHECK(dirs_subset(a, b, 6.0));
    CHECK(!dirs_subset(a, b, 4.0));
    CHECK(dirs_equal(a, b, 6.0));
    DirectionSet zero;
    zero.dim = 2;
    CHECK(dirs_subset(zero, a, 1.0));   // nothing to miss
    CHECK(!dirs_subset(a, zero, 1.0));
}

TEST_CASE("boundedness probe on synthetic clouds") {
    CloudProducer bounded = [](int) {
        PointCloud c;
        c.dim = 1;
        c.pts = {{0.0}, {1.0}};
        return c;
    };
    CHECK(cloud_bounded(bounded));
    CloudProducer growing = [](int k) {
        PointCloud c;
        c.dim = 1;
        c.pts = {{0.0}, {std::pow(2.0, k)}};
        return c;
    };
    CHECK(!cloud_bounded(growing));
}

TEST_CASE("ray cloud recovers its direction") {
    Box window = Box::interval(-1, 1);
    CloudProducer ray = [](int k) {
        PointCloud c;
        c.dim = 1;
        double top = std::pow(2.0, k);
        for (int i = 0; i <= 32; ++i) c.pts.push_back({top * i / 32.0});
        return c;
    };
    RecessionParams p;
    DirectionSet d = cloud_recession(ray, sphere_directions(1, 1.0), window, p);
    REQUIRE(d.dirs.size() == 1);
    CHECK(d.dirs[0][0] == 1.0);
}

TEST_CASE("compact gap level sets give the zero cone") {
    GridSpec xg{Box::interval(-20, 20), 201, 0};
    ProperFn f = ProperFn::from_expr(ExprFn::parse("x1^2", {"x1"}), std::nullopt, "sq");
    SampledFn fg = g_conjugate(f, builtin_coupling("square_product"), xg, xg);
    CompactnessReport rep = recession_of_gamma(make_gamma(f, fg), xg, {});
    CHECK(!rep.zero_cloud_empty);
    CHECK(rep.r_gamma.zero_only());
    CHECK(rep.ladder_agree);
    CHECK(rep.bounded_probe);
    CHECK(rep.equivalence_ok);
}

TEST_CASE("flat tails grow an unbounded recession cone") {
    GridSpec xg{Box::interval(-20, 20), 201, 0};
    ProperFn f = ProperFn::from_expr(ExprFn::parse("exp(x1)", {"x1"}), std::nullopt, "ex");
    SampledFn fg = g_conjugate(f, builtin_coupling("exp"), xg, xg);
    CompactnessReport rep = recession_of_gamma(make_gamma(f, fg), xg, {});
    CHECK(rep.zero_cloud_empty);
    CHECK(!rep.r_gamma.zero_only());
    CHECK(rep.ladder_agree);
    CHECK(!rep.bounded_probe);
    CHECK(rep.equivalence_ok);

    SetSpec quadrant = SetSpec::make_halfspaces(
        2, {Halfspace{{-1.0, 0.0}, 0.0}, Halfspace{{0.0, -1.0}, 0.0}});
    DirectionSet expected = directions_of_cone(quadrant, sphere_directions(2, 1.0));
    CHECK(dirs_subset(expected, rep.r_gamma, 2.0));
    CHECK(dirs_subset(rep.r_gamma, expected, 12.0));
}
