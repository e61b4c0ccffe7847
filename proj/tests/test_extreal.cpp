#include <doctest.h>

#include <gcoup/extreal.hpp>

using namespace gcoup;

TEST_CASE("classification") {
    ExtReal a = 1.5;
    CHECK(a.finite());
    CHECK(!a.is_pos_inf());
    CHECK(!a.is_neg_inf());
    CHECK(ExtReal::pos_inf().is_pos_inf());
    CHECK(ExtReal::neg_inf().is_neg_inf());
    CHECK(!ExtReal::pos_inf().finite());
    CHECK(ExtReal().raw() == 0.0);
}

TEST_CASE("nan is rejected") {
    CHECK_THROWS_AS(ExtReal(std::nan("")), EvalError);
}

TEST_CASE("ordering") {
    CHECK(ExtReal::neg_inf() < ExtReal(-1e308));
    CHECK(ExtReal(3.0) < ExtReal::pos_inf());
    CHECK(ExtReal(2.0) == ExtReal(2.0));
    CHECK(ExtReal(2.0) != ExtReal::pos_inf());
    CHECK(ExtReal::pos_inf() == ExtReal::pos_inf());
    CHECK(ExtReal(1.0) <= ExtReal(1.0));
    CHECK(ExtReal(2.0) >= ExtReal(1.0));
}

TEST_CASE("add_upper lets plus infinity dominate") {
    CHECK(add_upper(1.0, 2.0) == ExtReal(3.0));
    CHECK(add_upper(ExtReal::pos_inf(), ExtReal::neg_inf()).is_pos_inf());
    CHECK(add_upper(ExtReal::neg_inf(), 5.0).is_neg_inf());
    CHECK(add_upper(ExtReal::pos_inf(), 5.0).is_pos_inf());
}

TEST_CASE("sub_lower resolves ambiguity downward") {
    CHECK(sub_lower(5.0, 2.0) == ExtReal(3.0));
    CHECK(sub_lower(ExtReal::pos_inf(), ExtReal::pos_inf()).is_neg_inf());
    CHECK(sub_lower(3.0, ExtReal::pos_inf()).is_neg_inf());
    CHECK(sub_lower(3.0, ExtReal::neg_inf()).is_pos_inf());
    CHECK(sub_lower(ExtReal::neg_inf(), ExtReal::neg_inf()).is_neg_inf());
    CHECK(sub_lower(ExtReal::pos_inf(), 3.0).is_pos_inf());
    CHECK(sub_lower(ExtReal::neg_inf(), 3.0).is_neg_inf());
}
