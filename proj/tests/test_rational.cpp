#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "treecover/rational.hpp"

using namespace treecover;

TEST_CASE("parsing integers and fractions") {
    CHECK(parse_rational("7") == Rational(7));
    CHECK(parse_rational("-3/4") == Rational(-3, 4));
    CHECK(parse_rational("+5") == Rational(5));
    CHECK(parse_rational("0") == Rational(0));
    CHECK(parse_rational("6/4") == Rational(3, 2));
    CHECK(parse_rational("-0/9") == Rational(0));
}

TEST_CASE("parsing decimal literals exactly") {
    CHECK(parse_rational("1.25") == Rational(5, 4));
    CHECK(parse_rational("+0.5") == Rational(1, 2));
    CHECK(parse_rational("-0.125") == Rational(-1, 8));
    CHECK(parse_rational("2.") == Rational(2));
    CHECK(parse_rational(".75") == Rational(3, 4));
    // 0.1 is not representable in binary floating point; here it must be exact.
    CHECK(parse_rational("0.1") == Rational(1, 10));
    CHECK(parse_rational("123456789012345678901234567890.5") * 2 ==
          BigInt("246913578024691357802469135781"));
}

TEST_CASE("parse rejects malformed input") {
    CHECK_THROWS_AS(parse_rational(""), ParseError);
    CHECK_THROWS_AS(parse_rational("abc"), ParseError);
    CHECK_THROWS_AS(parse_rational("1/0"), ParseError);
    CHECK_THROWS_AS(parse_rational("1//2"), ParseError);
    CHECK_THROWS_AS(parse_rational("1.2.3"), ParseError);
    CHECK_THROWS_AS(parse_rational("1 2"), ParseError);
    CHECK_THROWS_AS(parse_rational("-"), ParseError);
    CHECK_THROWS_AS(parse_rational("."), ParseError);
    CHECK_THROWS_AS(parse_rational("3/"), ParseError);
}

TEST_CASE("formatting is canonical and round-trips") {
    CHECK(format_rational(Rational(5)) == "5");
    CHECK(format_rational(Rational(-3, 4)) == "-3/4");
    CHECK(format_rational(Rational(6, 4)) == "3/2");
    CHECK(format_rational(Rational(0)) == "0");
    for (const char* text : {"0", "17", "-9/7", "1/3", "100000000000000000000/3"}) {
        CHECK(format_rational(parse_rational(text)) == text);
    }
}

TEST_CASE("floor and ceil on both signs") {
    CHECK(ceil_rational(Rational(7, 2)) == 4);
    CHECK(floor_rational(Rational(7, 2)) == 3);
    CHECK(ceil_rational(Rational(-7, 2)) == -3);
    CHECK(floor_rational(Rational(-7, 2)) == -4);
    CHECK(ceil_rational(Rational(6)) == 6);
    CHECK(floor_rational(Rational(6)) == 6);
    CHECK(ceil_rational(Rational(-6)) == -6);
    CHECK(floor_rational(Rational(-6)) == -6);
}

TEST_CASE("integrality and narrowing") {
    CHECK(is_integer(Rational(4, 2)));
    CHECK_FALSE(is_integer(Rational(1, 3)));
    CHECK(to_int64(BigInt(42)) == 42);
    CHECK(to_int64(BigInt(-42)) == -42);
    CHECK_THROWS(to_int64(BigInt("123456789012345678901234567890")));
}
