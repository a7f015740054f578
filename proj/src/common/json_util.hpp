#pragma once

#include <json.hpp>

#include <optional>
#include <string>
#include <string_view>

#include "common/errors.hpp"
#include "common/geometry.hpp"

namespace scenediag {

/// Object keys keep insertion order, so documents written to disk mirror the
/// order in which they were built or declared.
using Json = nlohmann::ordered_json;

/// Shortest text for a real with at most `max_decimals` decimals, trailing
/// zeros trimmed but always one digit after the point ("1.0", "0.08").
std::string format_real(double value, int max_decimals = 4);

Json to_json(const Vec3& v);
Json to_json(const Rgba& c);
Vec3 vec3_from_json(const Json& j, std::string_view path);
Rgba rgba_from_json(const Json& j, std::string_view path);

/// Reads an optional member with a default, throwing a validation error that
/// names the dotted path when the member has the wrong type.
template <typename T>
T get_or(const Json& obj, const char* key, T fallback, std::string_view path) {
    if (!obj.is_object()) return fallback;
    auto it = obj.find(key);
    if (it == obj.end() || it->is_null()) return fallback;
    try {
        return it->get<T>();
    } catch (const nlohmann::json::exception&) {
        fail_validation(std::string(path) + "." + key + ": unexpected type " + it->type_name());
    }
}

/// Parses YAML or JSON text into a JSON value. JSON is tried first when the
/// document starts with '{' or '['.
Json parse_structured_text(std::string_view text);

std::string read_text_file(const std::string& path);
/// Writes through a temporary file and rename so readers never see partial content.
void write_text_file_atomic(const std::string& path, std::string_view content);

}  // namespace scenediag
