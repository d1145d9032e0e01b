#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <optional>
#include <string>
#include <string_view>

namespace lwbvp {

using Rational = boost::multiprecision::cpp_rational;

double to_double(const Rational& r);

/// Renders a rational as "p" or "p/q" in lowest terms.
std::string to_fraction_string(const Rational& r);

/// A configuration scalar that remembers whether it was supplied exactly.
///
/// Integers and strings such as "1/3" or "0.25" carry an exact rational
/// value alongside the double; JSON floating-point literals do not.
class Number {
public:
    Number() = default;
    explicit Number(double value) : value_(value) {}
    explicit Number(Rational exact) : value_(to_double(exact)), exact_(std::move(exact)) {}
    Number(long long num, long long den) : Number(Rational(num, den)) {}

    /// Accepts "p", "p/q", "-p/q" and finite decimals such as "0.125".
    /// Throws ConfigError on anything else.
    static Number parse(std::string_view text);

    double value() const { return value_; }
    bool is_exact() const { return exact_.has_value(); }
    const Rational& exact() const { return *exact_; }
    const std::optional<Rational>& maybe_exact() const { return exact_; }

    std::string to_string() const;

    friend bool operator==(const Number& a, const Number& b) {
        return a.exact_ == b.exact_ && (a.exact_ || a.value_ == b.value_);
    }

private:
    double value_ = 0.0;
    std::optional<Rational> exact_;
};

}  // namespace lwbvp
