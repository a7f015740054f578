#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "common/geometry.hpp"
#include "common/json_util.hpp"
#include "common/rng.hpp"

namespace scenediag::scene {

struct Material {
    Rgba color{0.8, 0.8, 0.8, 1.0};
    double roughness = 0.5;
    std::string material_name;

    friend bool operator==(const Material&, const Material&) = default;
};

enum class TableShape { rectangular, circular, elliptic };
enum class TableTexture { wood, marble, metal };
enum class TextureEntropy { low, medium, high };

struct Camera {
    double distance = 3.5;
    double angle = 55.0;  // elevation, 90 = top-down
    double horizontal_angle = 0.0;
    std::string distance_preset = "medium";
    std::string angle_preset = "medium";

    friend bool operator==(const Camera&, const Camera&) = default;
};

struct Table {
    TableShape shape = TableShape::rectangular;
    double length = 2.0;  // along x
    double width = 1.0;   // along y
    double height = 0.9;
    TableTexture texture = TableTexture::wood;
    Material material{{0.6, 0.5, 0.4, 1.0}, 0.5, ""};

    friend bool operator==(const Table&, const Table&) = default;
};

/// Base powers before the multiplier. When the lighting noise layer is active
/// the bases are the noise-layer triple and the multiplier is the noise one.
struct Lighting {
    double multiplier = 1.0;
    double key_base = 300.0;
    double fill_base = 50.0;
    double back_base = 50.0;
    std::string preset = "medium";

    double key_power() const { return key_base * multiplier; }
    double fill_power() const { return fill_base * multiplier; }
    double back_power() const { return back_base * multiplier; }

    friend bool operator==(const Lighting&, const Lighting&) = default;
};

struct Resolution {
    int width = 1920;
    int height = 1080;
    int percentage = 100;
    std::string preset;

    int pixel_width() const { return width * percentage / 100; }
    int pixel_height() const { return height * percentage / 100; }

    friend bool operator==(const Resolution&, const Resolution&) = default;
};

struct Background {
    Rgba color{0.5, 0.5, 0.5, 1.0};
    bool use_hdri = false;
    std::string hdri_path;

    friend bool operator==(const Background&, const Background&) = default;
};

struct RenderSettings {
    std::string engine = "CYCLES";
    int samples = 128;
    double exposure = 0.0;

    friend bool operator==(const RenderSettings&, const RenderSettings&) = default;
};

struct Setup {
    Resolution resolution;
    Camera camera;
    Table table;
    Lighting lighting;
    Background background;
    Material floor{{0.8, 0.8, 0.8, 1.0}, 0.5, ""};
    RenderSettings render;

    friend bool operator==(const Setup&, const Setup&) = default;
};

struct Noise {
    /// +inf when blur is disabled.
    double blur_fstop = kBlurDisabled;
    std::string blur_preset = "none";
    /// Brightness multiplier applied in image space.
    double lighting_multiplier = 1.0;
    std::string lighting_preset = "medium";
    /// True when the config carried a lighting noise entry.
    bool lighting_active = false;
    TextureEntropy table_texture = TextureEntropy::medium;

    static constexpr double kBlurDisabled = std::numeric_limits<double>::infinity();

    bool blur_enabled() const { return blur_fstop < kBlurDisabled; }

    friend bool operator==(const Noise&, const Noise&) = default;
};

struct NamedValue {
    std::string_view name;
    double value;
};

const std::vector<NamedValue>& blur_presets();
const std::vector<NamedValue>& lighting_presets();
const std::vector<NamedValue>& camera_distance_presets();
const std::vector<NamedValue>& camera_angle_presets();

struct ResolutionPreset {
    std::string_view name;
    int width;
    int height;
};
const std::vector<ResolutionPreset>& resolution_presets();

/// Looks a preset up by name; unknown names raise a validation error listing
/// the valid ones.
double preset_value(const std::vector<NamedValue>& table, std::string_view name, std::string_view path);
/// Reverse lookup; at most one preset maps to a value.
std::optional<std::string_view> preset_name(const std::vector<NamedValue>& table, double value);

std::optional<Rgba> named_color(std::string_view name);
Material parse_material(const Json& j, const Material& fallback, std::string_view path);
Rgba parse_color(const Json& j, std::string_view path);

std::string_view to_string(TableShape shape);
std::string_view to_string(TableTexture texture);
std::string_view to_string(TextureEntropy entropy);

constexpr double kNoiseKeyBase = 400.0;
constexpr double kNoiseFillBase = 200.0;
constexpr double kNoiseBackBase = 300.0;

struct Environment {
    Setup setup;
    Noise noise;
};

/// Resolves the `setup` and `noise` sections. Randomized camera values draw
/// from `rng`; randomize flags do not survive resolution. The noise lighting
/// layer, when present, replaces the setup light bases and multiplier.
Environment resolve_environment(const Json& setup, const Json& noise, Rng& rng);

Json to_json(const Material& m);
Json to_json(const Setup& s);
Json to_json(const Noise& n);

}  // namespace scenediag::scene
