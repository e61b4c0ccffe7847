#include <doctest.h>

#include <gcoup/problem_file.hpp>

using namespace gcoup;

TEST_CASE("minimal document takes defaults") {
    ProblemFile pf = parse_problem_text(R"js({"f": {"expr": "x1^2"}})js");
    CHECK(pf.name == "problem");
    CHECK(pf.n == 1);
    CHECK(pf.m == 1);
    CHECK(pf.numeric.tol == 1e-6);
    CHECK(pf.numeric.radius == 20.0);
    CHECK(pf.numeric.points_per_dim == 201);
    REQUIRE(pf.f.has_value());
    CHECK(pf.f->eval(std::vector<double>{3.0}).raw() == 9.0);
    CHECK(!pf.g.has_value());
    GridSpec xg = pf.xgrid();
    CHECK(xg.box.lo[0] == -20.0);
    CHECK(xg.points_per_dim == 201);
}

TEST_CASE("builtin coupling with dims") {
    ProblemFile pf = parse_problem_text(R"js({
        "dims": {"n": 1, "m": 1},
        "f": {"expr": "x1^2"},
        "g": {"builtin": "square_product"},
        "numeric": {"tol": 1e-4, "radius": 5.0, "points_per_dim": 41, "seed": 7}
    })js");
    REQUIRE(pf.g.has_value());
    CHECK(pf.g->name == "square_product");
    CHECK(pf.numeric.seed == 7);
    CHECK(pf.g->eval(std::vector<double>{2.0}, std::vector<double>{3.0}).raw() == 36.0);
}

TEST_CASE("custom coupling concatenates variable groups") {
    ProblemFile pf = parse_problem_text(R"js({
        "dims": {"n": 1, "m": 1},
        "g": {"expr": "(x1 * c1)^2", "C": "full"}
    })js");
    REQUIRE(pf.g.has_value());
    CHECK(pf.g->eval(std::vector<double>{2.0}, std::vector<double>{2.0}).raw() == 16.0);
}

TEST_CASE("f domain shorthand") {
    ProblemFile pf = parse_problem_text(R"js({
        "f": {"expr": "x1^2", "dom": "orthant"}
    })js");
    CHECK(pf.f->in_dom(std::vector<double>{1.0}));
    CHECK(!pf.f->in_dom(std::vector<double>{-1.0}));
}

TEST_CASE("instance blocks parse") {
    ProblemFile pf = parse_problem_text(R"js({
        "dims": {"n": 1, "m": 1},
        "lagrangian": {"objective": "x1^2", "constraints": ["1 - x1"]},
        "perturbation": {"phi": "(x1 - u1)^2", "p": 1},
        "ep": {"f": "(x1 - 0.5)*(y1 - x1)", "K": {"kind": "box", "lo": [0], "hi": [1]}}
    })js");
    REQUIRE(pf.lagrangian.has_value());
    CHECK(pf.lagrangian->h.size() == 1);
    REQUIRE(pf.perturbation.has_value());
    CHECK(pf.perturbation->p == 1);
    REQUIRE(pf.ep.has_value());
    CHECK(pf.ep->K.contains(std::vector<double>{0.5}));
}

TEST_CASE("cp block defaults its cone to the orthant") {
    ProblemFile pf = parse_problem_text(R"js({
        "dims": {"n": 2, "m": 2},
        "cp": {"M": [[2, 1], [1, 2]], "q": [-1, -1]}
    })js");
    REQUIRE(pf.cp.has_value());
    CHECK(pf.cp->K.kind() == SetKind::orthant);
    CHECK(pf.cp->T.dim() == 2);
}

TEST_CASE("schema errors carry a path") {
    auto path_of = [](const std::string& text) {
        try {
            parse_problem_text(text);
        } catch (const SchemaError& e) {
            return std::string(e.what());
        }
        return std::string("no error");
    };
    CHECK(path_of(R"js({"dims": {}})js").find("$.dims") != std::string::npos);
    CHECK(path_of(R"js({"f": {}})js").find("$.f") != std::string::npos);
    CHECK(path_of(R"js({"f": {"expr": "x1 +"}})js").find("$.f.expr") != std::string::npos);
    CHECK(path_of(R"js({"numeric": {"tol": -1}})js").find("$.numeric") != std::string::npos);
    CHECK(path_of(R"js(not json)js").find("$") != std::string::npos);
    CHECK(path_of(R"js({"g": {"expr": "x1", "C": "nope"}})js").find("$.g.C") != std::string::npos);
}

TEST_CASE("shipped problem files load") {
    const char* files[] = {
        "example1.json",  "example2.json",       "example3.json", "norm_pairing.json",
        "custom_coupling.json", "lagrangian_qp.json", "perturb_shift.json",
        "perturb_tilt.json", "ep_interval.json", "vip_affine.json", "epvip_mixed.json",
        "cp_lcp.json",    "cp_infeasible.json"};
    for (const char* f : files) {
        CAPTURE(f);
        ProblemFile pf = load_problem_file(std::string(GCOUP_PROBLEMS_DIR) + "/" + f);
        CHECK(!pf.name.empty());
    }
    CHECK_THROWS_AS(load_problem_file(std::string(GCOUP_PROBLEMS_DIR) + "/missing.json"),
                    Error);
}
