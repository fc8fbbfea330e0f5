#include "cod/json_text.hpp"

#include "cod/grid.hpp"

#include <cmath>

namespace cod {

namespace {

void write(std::string& out, const nlohmann::ordered_json& j, int indent, int depth) {
    const bool pretty = indent >= 0;
    auto newline = [&](int d) {
        if (!pretty) return;
        out += '\n';
        out.append(static_cast<std::size_t>(indent * d), ' ');
    };
    switch (j.type()) {
        case nlohmann::json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += '{';
            bool first = true;
            for (const auto& [key, value] : j.items()) {
                if (!first) out += ',';
                first = false;
                newline(depth + 1);
                out += nlohmann::ordered_json(key).dump();
                out += pretty ? ": " : ":";
                write(out, value, indent, depth + 1);
            }
            newline(depth);
            out += '}';
            return;
        }
        case nlohmann::json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += '[';
            bool first = true;
            for (const auto& value : j) {
                if (!first) out += ',';
                first = false;
                newline(depth + 1);
                write(out, value, indent, depth + 1);
            }
            newline(depth);
            out += ']';
            return;
        }
        case nlohmann::json::value_t::number_float: {
            const double v = j.get<double>();
            out += std::isfinite(v) ? format_double(v) : "null";
            return;
        }
        default:
            out += j.dump();
    }
}

} // namespace

std::string dump_json(const nlohmann::ordered_json& j, int indent) {
    std::string out;
    write(out, j, indent, 0);
    return out;
}

} // namespace cod
