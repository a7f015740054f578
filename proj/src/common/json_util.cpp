#include "common/json_util.hpp"

#include <yaml-cpp/yaml.h>

#include <cerrno>
#include <cmath>
#include <cstdlib>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace scenediag {

std::string format_real(double value, int max_decimals) {
    if (!std::isfinite(value)) return value > 0 ? "inf" : (value < 0 ? "-inf" : "nan");
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", max_decimals, value);
    std::string s(buf);
    if (s.find('.') != std::string::npos) {
        while (s.back() == '0') s.pop_back();
        if (s.back() == '.') s.push_back('0');
    }
    if (s == "-0.0") s = "0.0";
    return s;
}

Json to_json(const Vec3& v) { return Json::array({v.x, v.y, v.z}); }

Json to_json(const Rgba& c) { return Json::array({c.r, c.g, c.b, c.a}); }

Vec3 vec3_from_json(const Json& j, std::string_view path) {
    if (!j.is_array() || j.size() != 3)
        fail_validation(std::string(path) + ": expected a 3-element point");
    for (const auto& e : j)
        if (!e.is_number()) fail_validation(std::string(path) + ": point components must be numbers");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

Rgba rgba_from_json(const Json& j, std::string_view path) {
    if (!j.is_array() || (j.size() != 4 && j.size() != 3))
        fail_validation(std::string(path) + ": expected an RGBA quadruple");
    for (const auto& e : j)
        if (!e.is_number()) fail_validation(std::string(path) + ": color components must be numbers");
    return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>(),
            j.size() == 4 ? j[3].get<double>() : 1.0};
}

namespace {

Json scalar_from_yaml(const YAML::Node& node) {
    const std::string& s = node.Scalar();
    // Quoted scalars stay strings.
    if (node.Tag() == "!") return s;
    if (s == "null" || s == "~" || s.empty()) return nullptr;
    if (s == "true" || s == "True") return true;
    if (s == "false" || s == "False") return false;
    char* end = nullptr;
    errno = 0;
    long long iv = std::strtoll(s.c_str(), &end, 10);
    if (errno == 0 && end && *end == '\0') return iv;
    errno = 0;
    double dv = std::strtod(s.c_str(), &end);
    if (errno == 0 && end && *end == '\0') {
        if (s == "inf" || s == ".inf" || s == "nan") return s;
        return dv;
    }
    return s;
}

Json from_yaml(const YAML::Node& node) {
    switch (node.Type()) {
        case YAML::NodeType::Null:
        case YAML::NodeType::Undefined:
            return nullptr;
        case YAML::NodeType::Scalar:
            return scalar_from_yaml(node);
        case YAML::NodeType::Sequence: {
            Json arr = Json::array();
            for (const auto& child : node) arr.push_back(from_yaml(child));
            return arr;
        }
        case YAML::NodeType::Map: {
            Json obj = Json::object();
            for (const auto& kv : node) obj[kv.first.as<std::string>()] = from_yaml(kv.second);
            return obj;
        }
    }
    return nullptr;
}

}  // namespace

Json parse_structured_text(std::string_view text) {
    std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && (text[first] == '{' || text[first] == '[')) {
        try {
            return Json::parse(text);
        } catch (const nlohmann::json::parse_error& e) {
            fail_validation(std::string("malformed JSON document: ") + e.what());
        }
    }
    try {
        return from_yaml(YAML::Load(std::string(text)));
    } catch (const YAML::Exception& e) {
        fail_validation(std::string("malformed YAML document: ") + e.what());
    }
}

std::string read_text_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail_io("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_text_file_atomic(const std::string& path, std::string_view content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) fail_io("cannot write " + tmp);
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) fail_io("short write to " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) fail_io("cannot rename " + tmp + " to " + path + ": " + ec.message());
}

}  // namespace scenediag
