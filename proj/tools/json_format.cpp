#include "json_format.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>

namespace minres::cli {

namespace {

void write(const nlohmann::json& j, int indent, int depth, std::string& out) {
    const std::string pad(static_cast<std::size_t>(indent * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent * depth), ' ');
    const char* nl = indent > 0 ? "\n" : "";
    switch (j.type()) {
        case nlohmann::json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{";
            out += nl;
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) {
                    out += ",";
                    out += nl;
                }
                first = false;
                out += pad;
                out += nlohmann::json(it.key()).dump();
                out += indent > 0 ? ": " : ":";
                write(it.value(), indent, depth + 1, out);
            }
            out += nl;
            out += close_pad + "}";
            return;
        }
        case nlohmann::json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // arrays of scalars stay on one line
            bool flat = std::all_of(j.begin(), j.end(), [](const auto& e) { return e.is_primitive(); });
            out += "[";
            bool first = true;
            for (const auto& e : j) {
                if (!first) out += flat ? ", " : ",";
                if (!flat) {
                    out += nl;
                    out += pad;
                }
                first = false;
                write(e, indent, depth + 1, out);
            }
            if (!flat) {
                out += nl;
                out += close_pad;
            }
            out += "]";
            return;
        }
        case nlohmann::json::value_t::number_float:
        case nlohmann::json::value_t::number_integer:
        case nlohmann::json::value_t::number_unsigned: {
            if (j.is_number_float()) {
                double v = j.get<double>();
                out += std::isfinite(v) ? fmt::format("{:.7e}", v) : std::string("null");
            }
            else
                out += j.dump();
            return;
        }
        default:
            out += j.dump();
    }
}

}  // namespace

std::string dump_scientific(const nlohmann::json& j, int indent) {
    std::string out;
    write(j, indent, 0, out);
    return out;
}

}  // namespace minres::cli
