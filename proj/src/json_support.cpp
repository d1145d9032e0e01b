#include "lwbvp/json_support.hpp"

#include "lwbvp/errors.hpp"

#include <cmath>
#include <limits>

namespace lwbvp {

Number number_from_json(const Json& j, std::string_view what) {
    if (j.is_number_integer()) {
        if (j.is_number_unsigned()) {
            return Number(Rational(j.get<unsigned long long>()));
        }
        return Number(Rational(j.get<long long>()));
    }
    if (j.is_number_float()) {
        const double v = j.get<double>();
        if (!std::isfinite(v)) {
            throw ConfigError(std::string(what) + ": value is not finite");
        }
        return Number(v);
    }
    if (j.is_string()) {
        try {
            return Number::parse(j.get<std::string>());
        } catch (const ConfigError& e) {
            throw ConfigError(std::string(what) + ": " + e.what());
        }
    }
    throw ConfigError(std::string(what) + ": expected a number or a rational string");
}

Json number_to_json(const Number& n) {
    if (!n.is_exact()) {
        return n.value();
    }
    const Rational& r = n.exact();
    using boost::multiprecision::cpp_int;
    const cpp_int num = boost::multiprecision::numerator(r);
    if (boost::multiprecision::denominator(r) == 1 && num <= std::numeric_limits<long long>::max() &&
        num >= std::numeric_limits<long long>::min()) {
        return num.convert_to<long long>();
    }
    return to_fraction_string(r);
}

}  // namespace lwbvp
