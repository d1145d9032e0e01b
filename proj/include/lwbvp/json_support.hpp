#pragma once

#include "lwbvp/number.hpp"

#include <json.hpp>

#include <string_view>

namespace lwbvp {

using Json = nlohmann::ordered_json;

/// JSON integers and numeric strings are exact; JSON floats are not.
Number number_from_json(const Json& j, std::string_view what);

/// Inverse of number_from_json: exact integers stay integers, other exact
/// values become "p/q" strings, floats stay floats.
Json number_to_json(const Number& n);

}  // namespace lwbvp
