#include "scene/scene_model.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cmath>

#include "config/config_core.hpp"

namespace scenediag::scene {

namespace {

std::string join_names(const std::vector<NamedValue>& table) {
    std::string out;
    for (const auto& nv : table) {
        if (!out.empty()) out += ", ";
        out += nv.name;
    }
    return out;
}

std::string normalize_name(std::string_view name) {
    std::string out;
    for (char c : name) {
        if (c == ' ' || c == '-') out.push_back('_');
        else out.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
    return out;
}

struct NamedColor {
    std::string_view name;
    Rgba color;
};

const std::array<NamedColor, 18> kColors{{
    {"white", {1.0, 1.0, 1.0, 1.0}},
    {"black", {0.0, 0.0, 0.0, 1.0}},
    {"red", {1.0, 0.0, 0.0, 1.0}},
    {"green", {0.0, 1.0, 0.0, 1.0}},
    {"blue", {0.0, 0.0, 1.0, 1.0}},
    {"yellow", {1.0, 1.0, 0.0, 1.0}},
    {"orange", {1.0, 0.5, 0.0, 1.0}},
    {"purple", {0.5, 0.0, 0.5, 1.0}},
    {"brown", {0.4, 0.25, 0.1, 1.0}},
    {"gray", {0.5, 0.5, 0.5, 1.0}},
    {"grey", {0.5, 0.5, 0.5, 1.0}},
    {"light_gray", {0.8, 0.8, 0.8, 1.0}},
    {"medium_gray", {0.6, 0.6, 0.6, 1.0}},
    {"dark_gray", {0.4, 0.4, 0.4, 1.0}},
    {"light_wood", {0.8, 0.7, 0.6, 1.0}},
    {"medium_wood", {0.6, 0.5, 0.4, 1.0}},
    {"dark_wood", {0.4, 0.3, 0.2, 1.0}},
    {"ivory", {0.9, 0.9, 0.9, 1.0}},
}};

/// A preset name or a raw number.
double preset_or_number(const Json& j, const std::vector<NamedValue>& table, std::string_view path,
                        std::string& label) {
    if (j.is_string()) {
        const double v = preset_value(table, j.get<std::string>(), path);
        label = normalize_name(j.get<std::string>());
        return v;
    }
    if (j.is_number()) {
        const double v = j.get<double>();
        auto name = preset_name(table, v);
        label = name ? std::string(*name) : std::string();
        return v;
    }
    fail_validation(std::string(path) + ": expected a preset name (" + join_names(table) + ") or a number");
}

template <typename Enum, std::size_t N>
Enum parse_enum(const Json& obj, const char* key, Enum fallback, const std::array<std::pair<std::string_view, Enum>, N>& names,
                std::string_view path) {
    if (!obj.is_object() || !obj.contains(key) || obj[key].is_null()) return fallback;
    const Json& v = obj[key];
    if (v.is_string()) {
        const std::string n = normalize_name(v.get<std::string>());
        for (const auto& [name, e] : names)
            if (name == n) return e;
    }
    std::string valid;
    for (const auto& [name, e] : names) valid += (valid.empty() ? "" : ", ") + std::string(name);
    fail_validation(std::string(path) + "." + key + ": unknown value " + v.dump() + " (valid: " + valid + ")");
}

const std::array<std::pair<std::string_view, TableShape>, 3> kShapes{{
    {"rectangular", TableShape::rectangular}, {"circular", TableShape::circular}, {"elliptic", TableShape::elliptic}}};
const std::array<std::pair<std::string_view, TableTexture>, 3> kTextures{{
    {"wood", TableTexture::wood}, {"marble", TableTexture::marble}, {"metal", TableTexture::metal}}};
const std::array<std::pair<std::string_view, TextureEntropy>, 3> kEntropy{{
    {"low", TextureEntropy::low}, {"medium", TextureEntropy::medium}, {"high", TextureEntropy::high}}};

Resolution resolve_resolution(const Json& j, Rng& rng) {
    Resolution r;
    r.preset = "high";
    Json spec = j;
    if (spec.is_string()) spec = Json{{"resolution", spec}};
    if (spec.is_null()) return r;
    if (!spec.is_object()) fail_validation("setup.resolution: expected a preset name or a mapping");
    if (auto it = spec.find("resolution"); it != spec.end() && it->is_string()) {
        const std::string name = normalize_name(it->get<std::string>());
        bool found = false;
        for (const auto& p : resolution_presets())
            if (p.name == name) {
                r.width = p.width;
                r.height = p.height;
                r.preset = std::string(p.name);
                found = true;
            }
        if (!found) fail_validation("setup.resolution.resolution: unknown preset '" + name + "' (valid: low, medium, high)");
    }
    r.width = get_or<int>(spec, "width", r.width, "setup.resolution");
    r.height = get_or<int>(spec, "height", r.height, "setup.resolution");
    r.percentage = get_or<int>(spec, "resolution_percentage", 100, "setup.resolution");
    if (get_or<bool>(spec, "randomize", false, "setup.resolution")) {
        const double p = get_or<double>(spec, "randomize_percentage", 0.1, "setup.resolution");
        const double f = config::resolve_randomization(1.0, p, rng);
        r.width = static_cast<int>(std::lround(r.width * f));
        r.height = static_cast<int>(std::lround(r.height * f));
    }
    r.preset.clear();
    for (const auto& p : resolution_presets())
        if (p.width == r.width && p.height == r.height) r.preset = std::string(p.name);
    return r;
}

Camera resolve_camera(const Json& j, Rng& rng) {
    Camera c;
    if (j.is_null()) return c;
    if (!j.is_object()) fail_validation("setup.camera: expected a mapping");
    if (auto it = j.find("distance"); it != j.end() && !it->is_null())
        c.distance = preset_or_number(*it, camera_distance_presets(), "setup.camera.distance", c.distance_preset);
    if (auto it = j.find("angle"); it != j.end() && !it->is_null())
        c.angle = preset_or_number(*it, camera_angle_presets(), "setup.camera.angle", c.angle_preset);
    c.horizontal_angle = get_or<double>(j, "horizontal_angle", 0.0, "setup.camera");
    if (get_or<bool>(j, "randomize_distance", false, "setup.camera")) {
        c.distance = config::resolve_randomization(
            c.distance, get_or<double>(j, "randomize_distance_percentage", 0.1, "setup.camera"), rng);
        auto name = preset_name(camera_distance_presets(), c.distance);
        c.distance_preset = name ? std::string(*name) : std::string();
    }
    if (get_or<bool>(j, "randomize_angle", false, "setup.camera")) {
        c.angle = std::min(90.0, config::resolve_randomization(
                                     c.angle, get_or<double>(j, "randomize_angle_percentage", 0.1, "setup.camera"), rng));
        auto name = preset_name(camera_angle_presets(), c.angle);
        c.angle_preset = name ? std::string(*name) : std::string();
    }
    return c;
}

Table resolve_table(const Json& j) {
    Table t;
    if (j.is_null()) return t;
    if (!j.is_object()) fail_validation("setup.table: expected a mapping");
    t.shape = parse_enum(j, "shape", t.shape, kShapes, "setup.table");
    t.length = get_or<double>(j, "length", t.length, "setup.table");
    t.width = get_or<double>(j, "width", t.width, "setup.table");
    t.height = get_or<double>(j, "height", t.height, "setup.table");
    t.texture = parse_enum(j, "texture", t.texture, kTextures, "setup.table");
    if (auto it = j.find("material"); it != j.end()) t.material = parse_material(*it, t.material, "setup.table.material");
    return t;
}

}  // namespace

const std::vector<NamedValue>& blur_presets() {
    static const std::vector<NamedValue> t{{"none", Noise::kBlurDisabled}, {"very_low", 9.0}, {"low", 4.0},
                                           {"medium", 2.0},                  {"high", 1.0},     {"very_high", 0.5}};
    return t;
}

const std::vector<NamedValue>& lighting_presets() {
    static const std::vector<NamedValue> t{
        {"very_low", 0.3}, {"low", 0.6}, {"medium", 1.0}, {"high", 1.5}, {"very_high", 2.0}};
    return t;
}

const std::vector<NamedValue>& camera_distance_presets() {
    static const std::vector<NamedValue> t{
        {"very_close", 1.7}, {"close", 2.5}, {"medium", 3.5}, {"far", 5.5}, {"very_far", 7.5}};
    return t;
}

const std::vector<NamedValue>& camera_angle_presets() {
    static const std::vector<NamedValue> t{{"low", 30.0}, {"medium", 55.0}, {"high", 80.0}};
    return t;
}

const std::vector<ResolutionPreset>& resolution_presets() {
    static const std::vector<ResolutionPreset> t{{"low", 640, 480}, {"medium", 1280, 720}, {"high", 1920, 1080}};
    return t;
}

double preset_value(const std::vector<NamedValue>& table, std::string_view name, std::string_view path) {
    const std::string n = normalize_name(name);
    for (const auto& nv : table)
        if (nv.name == n) return nv.value;
    fail_validation(std::string(path) + ": unknown preset '" + std::string(name) + "' (valid: " + join_names(table) + ")");
}

std::optional<std::string_view> preset_name(const std::vector<NamedValue>& table, double value) {
    for (const auto& nv : table)
        if (nv.value == value) return nv.name;
    return std::nullopt;
}

std::optional<Rgba> named_color(std::string_view name) {
    const std::string n = normalize_name(name);
    for (const auto& c : kColors)
        if (c.name == n) return c.color;
    return std::nullopt;
}

Rgba parse_color(const Json& j, std::string_view path) {
    if (j.is_string()) {
        if (auto c = named_color(j.get<std::string>())) return *c;
        fail_validation(std::string(path) + ": unknown color name '" + j.get<std::string>() + "'");
    }
    return rgba_from_json(j, path);
}

Material parse_material(const Json& j, const Material& fallback, std::string_view path) {
    Material m = fallback;
    if (j.is_null()) return m;
    if (j.is_string() || j.is_array()) {
        m.color = parse_color(j, path);
        return m;
    }
    if (!j.is_object()) fail_validation(std::string(path) + ": expected a material mapping");
    if (auto it = j.find("color"); it != j.end() && !it->is_null())
        m.color = parse_color(*it, std::string(path) + ".color");
    m.roughness = get_or<double>(j, "roughness", m.roughness, path);
    m.material_name = get_or<std::string>(j, "material_name", m.material_name, path);
    return m;
}

std::string_view to_string(TableShape shape) {
    for (const auto& [n, e] : kShapes)
        if (e == shape) return n;
    return "rectangular";
}

std::string_view to_string(TableTexture texture) {
    for (const auto& [n, e] : kTextures)
        if (e == texture) return n;
    return "wood";
}

std::string_view to_string(TextureEntropy entropy) {
    for (const auto& [n, e] : kEntropy)
        if (e == entropy) return n;
    return "medium";
}

Environment resolve_environment(const Json& setup_json, const Json& noise_json, Rng& rng) {
    const Json setup = setup_json.is_null() ? Json::object() : setup_json;
    const Json noise = noise_json.is_null() ? Json::object() : noise_json;
    if (!setup.is_object()) fail_validation("setup: expected a mapping");
    if (!noise.is_object()) fail_validation("noise: expected a mapping");

    Environment env;
    Setup& s = env.setup;
    s.resolution = resolve_resolution(setup.value("resolution", Json()), rng);
    s.camera = resolve_camera(setup.value("camera", Json()), rng);
    s.table = resolve_table(setup.value("table", Json()));

    if (auto it = setup.find("background"); it != setup.end() && it->is_object()) {
        if (auto c = it->find("color"); c != it->end()) s.background.color = parse_color(*c, "setup.background.color");
        s.background.use_hdri = get_or<bool>(*it, "use_hdri", false, "setup.background");
        s.background.hdri_path = get_or<std::string>(*it, "hdri_path", "", "setup.background");
    }
    if (auto it = setup.find("floor"); it != setup.end()) s.floor = parse_material(*it, s.floor, "setup.floor");
    if (auto it = setup.find("render"); it != setup.end() && it->is_object()) {
        s.render.engine = get_or<std::string>(*it, "engine", s.render.engine, "setup.render");
        s.render.samples = get_or<int>(*it, "samples", s.render.samples, "setup.render");
        s.render.exposure = get_or<double>(*it, "exposure", s.render.exposure, "setup.render");
    }

    Json lighting = setup.value("lighting", Json());
    if (lighting.is_string() || lighting.is_number()) lighting = Json{{"lighting", lighting}};
    if (lighting.is_object()) {
        if (auto it = lighting.find("lighting"); it != lighting.end() && !it->is_null())
            s.lighting.multiplier =
                preset_or_number(*it, lighting_presets(), "setup.lighting.lighting", s.lighting.preset);
        s.lighting.key_base = get_or<double>(lighting, "key_light_power", s.lighting.key_base, "setup.lighting");
        s.lighting.fill_base = get_or<double>(lighting, "fill_light_power", s.lighting.fill_base, "setup.lighting");
        s.lighting.back_base = get_or<double>(lighting, "back_light_power", s.lighting.back_base, "setup.lighting");
    } else if (!lighting.is_null()) {
        fail_validation("setup.lighting: expected a preset, a multiplier or a mapping");
    }

    Noise& n = env.noise;
    if (auto it = noise.find("blur"); it != noise.end() && !it->is_null()) {
        Json blur = *it;
        if (blur.is_object()) blur = blur.value("intensity", Json("none"));
        n.blur_fstop = preset_or_number(blur, blur_presets(), "noise.blur", n.blur_preset);
        if (!(n.blur_fstop > 0)) fail_validation("noise.blur: f-stop must be positive");
    }
    if (auto it = noise.find("lighting"); it != noise.end() && !it->is_null()) {
        n.lighting_active = true;
        n.lighting_multiplier = preset_or_number(*it, lighting_presets(), "noise.lighting", n.lighting_preset);
        s.lighting.multiplier = n.lighting_multiplier;
        s.lighting.preset = n.lighting_preset;
        s.lighting.key_base = kNoiseKeyBase;
        s.lighting.fill_base = kNoiseFillBase;
        s.lighting.back_base = kNoiseBackBase;
    } else {
        n.lighting_multiplier = s.lighting.multiplier;
        n.lighting_preset = s.lighting.preset;
    }
    n.table_texture = parse_enum(noise, "table_texture", n.table_texture, kEntropy, "noise");
    return env;
}

Json to_json(const Material& m) {
    Json j{{"color", to_json(m.color)}, {"roughness", m.roughness}};
    if (!m.material_name.empty()) j["material_name"] = m.material_name;
    return j;
}

Json to_json(const Setup& s) {
    Json j = Json::object();
    j["resolution"] = {{"width", s.resolution.width},
                       {"height", s.resolution.height},
                       {"resolution_percentage", s.resolution.percentage}};
    j["camera"] = {{"distance", s.camera.distance},
                   {"angle", s.camera.angle},
                   {"horizontal_angle", s.camera.horizontal_angle}};
    j["table"] = {{"shape", std::string(to_string(s.table.shape))},
                  {"length", s.table.length},
                  {"width", s.table.width},
                  {"height", s.table.height},
                  {"texture", std::string(to_string(s.table.texture))},
                  {"material", to_json(s.table.material)}};
    j["lighting"] = {{"lighting", s.lighting.multiplier},
                     {"key_light_power", s.lighting.key_base},
                     {"fill_light_power", s.lighting.fill_base},
                     {"back_light_power", s.lighting.back_base}};
    j["background"] = {{"color", to_json(s.background.color)}, {"use_hdri", s.background.use_hdri}};
    if (!s.background.hdri_path.empty()) j["background"]["hdri_path"] = s.background.hdri_path;
    j["floor"] = to_json(s.floor);
    j["render"] = {{"engine", s.render.engine}, {"samples", s.render.samples}, {"exposure", s.render.exposure}};
    return j;
}

Json to_json(const Noise& n) {
    Json j = Json::object();
    if (n.blur_enabled()) j["blur"] = n.blur_fstop;
    else j["blur"] = "none";
    if (n.lighting_active) j["lighting"] = n.lighting_multiplier;
    j["table_texture"] = std::string(to_string(n.table_texture));
    return j;
}

}  // namespace scenediag::scene
