#include "lwbvp/number.hpp"

#include "lwbvp/errors.hpp"

#include <algorithm>
#include <cctype>

namespace lwbvp {

namespace {

using boost::multiprecision::cpp_int;

bool is_integer_literal(std::string_view s) {
    if (!s.empty() && (s.front() == '+' || s.front() == '-')) {
        s.remove_prefix(1);
    }
    return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

// Decimal digits only; cpp_int would read a leading 0 as an octal prefix.
cpp_int decimal_digits(std::string_view digits) {
    while (digits.size() > 1 && digits.front() == '0') digits.remove_prefix(1);
    return cpp_int{std::string(digits)};
}

cpp_int parse_integer(std::string_view s) {
    bool negative = false;
    if (s.front() == '+' || s.front() == '-') {
        negative = s.front() == '-';
        s.remove_prefix(1);
    }
    const cpp_int v = decimal_digits(s);
    return negative ? cpp_int(-v) : v;
}

std::string_view trim(std::string_view s) {
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
    return s;
}

}  // namespace

double to_double(const Rational& r) {
    return r.convert_to<double>();
}

std::string to_fraction_string(const Rational& r) {
    const cpp_int num = boost::multiprecision::numerator(r);
    const cpp_int den = boost::multiprecision::denominator(r);
    if (den == 1) {
        return num.str();
    }
    return num.str() + "/" + den.str();
}

Number Number::parse(std::string_view text) {
    const std::string_view s = trim(text);
    if (const auto slash = s.find('/'); slash != std::string_view::npos) {
        const auto num = trim(s.substr(0, slash));
        const auto den = trim(s.substr(slash + 1));
        if (!is_integer_literal(num) || !is_integer_literal(den)) {
            throw ConfigError("not a rational literal: '" + std::string(text) + "'");
        }
        const cpp_int d = parse_integer(den);
        if (d == 0) {
            throw ConfigError("zero denominator in '" + std::string(text) + "'");
        }
        return Number(Rational(parse_integer(num), d));
    }
    if (is_integer_literal(s)) {
        return Number(Rational(parse_integer(s)));
    }
    // finite decimal: [sign] digits '.' digits
    if (const auto dot = s.find('.'); dot != std::string_view::npos) {
        const auto whole = s.substr(0, dot);
        const auto frac = s.substr(dot + 1);
        const bool whole_ok = whole.empty() || whole == "-" || whole == "+" || is_integer_literal(whole);
        const bool frac_ok = !frac.empty() && is_integer_literal(frac) && frac.front() != '+' && frac.front() != '-';
        if (whole_ok && frac_ok) {
            const bool negative = !whole.empty() && whole.front() == '-';
            std::string digits(whole);
            if (!digits.empty() && (digits.front() == '-' || digits.front() == '+')) digits.erase(0, 1);
            digits += frac;
            cpp_int scale = 1;
            for (std::size_t i = 0; i < frac.size(); ++i) scale *= 10;
            Rational r(decimal_digits(digits), scale);
            return Number(negative ? Rational(-r) : r);
        }
    }
    throw ConfigError("not a numeric literal: '" + std::string(text) + "'");
}

std::string Number::to_string() const {
    if (exact_) {
        return to_fraction_string(*exact_);
    }
    return std::to_string(value_);
}

}  // namespace lwbvp
