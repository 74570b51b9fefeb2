#pragma once

#include "weavetex/error.hpp"

#include <json.hpp>

#include <string>
#include <string_view>

namespace weavetex {

using json = nlohmann::json;

namespace detail {

/// Sorted keys (nlohmann's default object map), two-space indent, "\n" end.
/// Invalid UTF-8 in any string is an error rather than silently replaced.
inline std::string dump_stable(const json& doc) {
    try {
        return doc.dump(2, ' ', false, json::error_handler_t::strict) + "\n";
    } catch (const json::type_error& e) {
        throw Error(ErrorCode::Unsupported, std::string("cannot serialize: ") + e.what());
    }
}

inline json parse_json(std::string_view text) {
    try {
        return json::parse(text);
    } catch (const json::parse_error& e) {
        throw Error(ErrorCode::ParseError, e.what());
    }
}

inline void check_version(const json& doc, int expected) {
    if (!doc.is_object() || !doc.contains("version") || !doc["version"].is_number_integer())
        throw Error(ErrorCode::ParseError, "missing integer \"version\" field");
    auto version = doc["version"].get<long long>();
    if (version != expected)
        throw Error(ErrorCode::VersionMismatch, "unsupported version " + std::to_string(version) +
                                                    " (expected " + std::to_string(expected) + ")");
}

} // namespace detail
} // namespace weavetex
