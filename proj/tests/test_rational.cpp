#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "kleinbundle/rational.hpp"

using kb::mod1;
using kb::modulo;
using kb::Rational;
using kb::snap_to_rational;

TEST_CASE("rational normalization and formatting") {
    CHECK(Rational(2, 4) == Rational(1, 2));
    CHECK(Rational(-2, 4) == Rational(-1, 2));
    CHECK(Rational(2, -4) == Rational(-1, 2));
    CHECK(Rational(0, 7) == Rational(0));
    CHECK(Rational(1, 2).str() == "1/2");
    CHECK(Rational(-3).str() == "-3");
    CHECK(Rational(6, 3).str() == "2");
    CHECK_THROWS(Rational(1, 0));
}

TEST_CASE("rational parsing") {
    CHECK(Rational::parse("3/10") == Rational(3, 10));
    CHECK(Rational::parse("-1/2") == Rational(-1, 2));
    CHECK(Rational::parse("7") == Rational(7));
    CHECK(Rational::parse("0") == Rational(0));
    CHECK_THROWS(Rational::parse(""));
    CHECK_THROWS(Rational::parse("1/"));
    CHECK_THROWS(Rational::parse("a/b"));
    CHECK_THROWS(Rational::parse("1.5"));
}

TEST_CASE("rational arithmetic is exact") {
    CHECK(Rational(1, 3) + Rational(1, 6) == Rational(1, 2));
    CHECK(Rational(1, 3) - Rational(1, 2) == Rational(-1, 6));
    CHECK(Rational(2, 3) * Rational(9, 4) == Rational(3, 2));
    CHECK(Rational(1, 3) / Rational(2, 9) == Rational(3, 2));
    CHECK_THROWS(Rational(1) / Rational(0));
    CHECK(Rational(1, 3) < Rational(2, 5));
    CHECK(Rational(-1, 3) < Rational(0));

    std::mt19937 rng(7);
    std::uniform_int_distribution<long long> num(-50, 50);
    std::uniform_int_distribution<long long> den(1, 40);
    for (int i = 0; i < 500; ++i) {
        Rational a(num(rng), den(rng)), b(num(rng), den(rng));
        CHECK((a + b) - b == a);
        if (!b.is_zero()) CHECK((a / b) * b == a);
        CHECK(a + b == b + a);
    }
}

TEST_CASE("floor and modular reduction") {
    CHECK(Rational(7, 2).floor() == 3);
    CHECK(Rational(-7, 2).floor() == -4);
    CHECK(Rational(-3).floor() == -3);
    CHECK(mod1(Rational(13, 10)) == Rational(3, 10));
    CHECK(mod1(Rational(-1, 4)) == Rational(3, 4));
    CHECK(mod1(Rational(5)) == Rational(0));
    CHECK(modulo(Rational(2, 5), Rational(1, 3)) == Rational(1, 15));
    CHECK(modulo(Rational(-1, 6), Rational(1, 3)) == Rational(1, 6));
    CHECK_THROWS(modulo(Rational(1), Rational(0)));
}

TEST_CASE("overflow is detected, not wrapped") {
    Rational big(INT64_MAX / 2, 1);
    CHECK_THROWS_AS(big * Rational(8), std::overflow_error);
}

TEST_CASE("float snapping by continued fractions") {
    CHECK(snap_to_rational(0.5) == Rational(1, 2));
    CHECK(snap_to_rational(1.0 / 3.0) == Rational(1, 3));
    CHECK(snap_to_rational(0.1) == Rational(1, 10));
    CHECK(snap_to_rational(2.0 / 7.0) == Rational(2, 7));
    CHECK(snap_to_rational(-0.25) == Rational(-1, 4));
    CHECK(snap_to_rational(3.0) == Rational(3));
    // denominator cap
    Rational s = snap_to_rational(0.123456789, 100);
    CHECK(s.den() <= 100);
    CHECK(std::fabs(s.value() - 0.123456789) < 1e-2);
    CHECK_THROWS(snap_to_rational(std::numeric_limits<double>::infinity()));
}
