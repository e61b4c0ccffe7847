#include <doctest.h>

#include <gcoup/expr.hpp>

using namespace gcoup;

namespace {
double ev(const ExprFn& e, std::vector<double> env) { return e.eval(env).raw(); }
}

TEST_CASE("arithmetic and precedence") {
    ExprFn e = ExprFn::parse("2 + 3 * x1 ^ 2", {"x1"});
    CHECK(e.arity() == 1);
    CHECK(ev(e, {2.0}) == 14.0);
    CHECK(ev(ExprFn::parse("2 ^ 3 ^ 2", {}), {}) == 512.0);  // right associative
    CHECK(ev(ExprFn::parse("-x1^2", {"x1"}), {3.0}) == -9.0);
    CHECK(ev(ExprFn::parse("(1 - 2) * (3 + 4)", {}), {}) == -7.0);
    CHECK(ev(ExprFn::parse("7 / 2", {}), {}) == 3.5);
}

TEST_CASE("functions") {
    CHECK(ev(ExprFn::parse("exp(0)", {}), {}) == 1.0);
    CHECK(ev(ExprFn::parse("ln(exp(2))", {}), {}) == doctest::Approx(2.0));
    CHECK(ev(ExprFn::parse("abs(-3)", {}), {}) == 3.0);
    CHECK(ev(ExprFn::parse("sqrt(16)", {}), {}) == 4.0);
    CHECK(ev(ExprFn::parse("max(1, 5)", {}), {}) == 5.0);
    CHECK(ev(ExprFn::parse("min(1, 5)", {}), {}) == 1.0);
    CHECK(ExprFn::parse("ln(0)", {}).eval({}).is_neg_inf());
}

TEST_CASE("comparisons and if") {
    ExprFn e = ExprFn::parse("if(x1 >= 0, x1, -x1)", {"x1"});
    CHECK(ev(e, {-4.0}) == 4.0);
    CHECK(ev(e, {4.0}) == 4.0);
    CHECK(ev(ExprFn::parse("(2 < 3) + (3 < 2)", {}), {}) == 1.0);
}

TEST_CASE("dot contracts prefixed variable groups") {
    ExprFn e = ExprFn::parse("dot(x, y)", {"x1", "x2", "y1", "y2"});
    CHECK(ev(e, {1.0, 2.0, 3.0, 4.0}) == 11.0);
}

TEST_CASE("infinity literal") {
    CHECK(ExprFn::parse("inf", {}).eval({}).is_pos_inf());
    CHECK(ExprFn::parse("-inf", {}).eval({}).is_neg_inf());
}

TEST_CASE("nan-producing forms are evaluation errors") {
    CHECK_THROWS_AS(ExprFn::parse("inf - inf", {}).eval({}), EvalError);
    CHECK_THROWS_AS(ExprFn::parse("0 / 0", {}).eval({}), EvalError);
}

TEST_CASE("parse errors carry an offset") {
    try {
        ExprFn::parse("x1 + * 2", {"x1"});
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.offset == 5);
    }
    CHECK_THROWS_AS(ExprFn::parse("nope(1)", {}), ParseError);
    CHECK_THROWS_AS(ExprFn::parse("y1", {"x1"}), ParseError);
}

TEST_CASE("print round trips through the parser") {
    ExprFn e = ExprFn::parse("exp(x1) + 2 * x2", {"x1", "x2"});
    ExprFn back = ExprFn::parse(e.print(), {"x1", "x2"});
    CHECK(ev(back, {1.0, 3.0}) == ev(e, {1.0, 3.0}));
}
