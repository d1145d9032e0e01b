#include "lwbvp/errors.hpp"
#include "lwbvp/json_support.hpp"
#include "lwbvp/number.hpp"

#include <gtest/gtest.h>

using namespace lwbvp;

TEST(Number, ParsesFractionsInLowestTerms) {
    const Number n = Number::parse("-2/4");
    ASSERT_TRUE(n.is_exact());
    EXPECT_EQ(n.exact(), Rational(-1, 2));
    EXPECT_EQ(n.to_string(), "-1/2");
    EXPECT_DOUBLE_EQ(n.value(), -0.5);
}

TEST(Number, DecimalStringsAreExact) {
    const Number n = Number::parse("0.125");
    ASSERT_TRUE(n.is_exact());
    EXPECT_EQ(n.exact(), Rational(1, 8));
    EXPECT_EQ(Number::parse("-1.5").exact(), Rational(-3, 2));
    EXPECT_EQ(Number::parse(" 7 ").exact(), Rational(7));
    EXPECT_EQ(Number::parse(".5").exact(), Rational(1, 2));
}

TEST(Number, LeadingZerosAreDecimal) {
    EXPECT_EQ(Number::parse("010").exact(), Rational(10));
    EXPECT_EQ(Number::parse("0.0625").exact(), Rational(1, 16));
    EXPECT_EQ(Number::parse("007/0100").exact(), Rational(7, 100));
    EXPECT_EQ(Number::parse("-0.5").exact(), Rational(-1, 2));
}

TEST(Number, RejectsMalformedLiterals) {
    EXPECT_THROW(Number::parse("1/0"), ConfigError);
    EXPECT_THROW(Number::parse("abc"), ConfigError);
    EXPECT_THROW(Number::parse("1/2/3"), ConfigError);
    EXPECT_THROW(Number::parse("1."), ConfigError);
    EXPECT_THROW(Number::parse(""), ConfigError);
}

TEST(Number, FloatAndExactAreDistinct) {
    EXPECT_FALSE(Number(0.5) == Number(Rational(1, 2)));
    EXPECT_TRUE(Number(0.5) == Number(0.5));
    EXPECT_TRUE(Number(Rational(2, 4)) == Number(Rational(1, 2)));
}

TEST(JsonNumbers, IntegersAndStringsAreExactFloatsAreNot) {
    EXPECT_TRUE(number_from_json(Json(3), "x").is_exact());
    EXPECT_TRUE(number_from_json(Json("1/3"), "x").is_exact());
    EXPECT_FALSE(number_from_json(Json(0.25), "x").is_exact());
    EXPECT_THROW(number_from_json(Json(true), "x"), ConfigError);
    EXPECT_THROW(number_from_json(Json("one third"), "x"), ConfigError);
}

TEST(JsonNumbers, RoundTrip) {
    for (const Number& n : {Number(Rational(1, 3)), Number(Rational(-7)), Number(0.1), Number(1e300)}) {
        EXPECT_TRUE(number_from_json(Json::parse(number_to_json(n).dump()), "x") == n) << n.to_string();
    }
}
