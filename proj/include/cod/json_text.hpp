#pragma once

// JSON text with every floating-point number written as %.17g.

#include <json.hpp>

#include <string>

namespace cod {

/// indent < 0: compact single line; otherwise pretty-printed with `indent` spaces.
/// Non-finite floats are written as null.
std::string dump_json(const nlohmann::ordered_json& j, int indent = -1);

} // namespace cod
