#include "render/noise.hpp"

#include <cmath>
#include <vector>

#include "common/rng.hpp"

namespace scenediag::render {

namespace {

double lattice(std::int64_t ix, std::int64_t iy, std::uint64_t seed) {
    const std::uint64_t h = mix64(seed ^ mix64(static_cast<std::uint64_t>(ix) * 0x9E3779B97F4A7C15ULL ^
                                               static_cast<std::uint64_t>(iy) * 0xC2B2AE3D27D4EB4FULL));
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

double smooth(double t) { return t * t * (3.0 - 2.0 * t); }

Vec2 texture_frequency(scene::TableTexture t) {
    switch (t) {
        case scene::TableTexture::wood: return {3.0, 30.0};
        case scene::TableTexture::marble: return {9.0, 9.0};
        case scene::TableTexture::metal: return {60.0, 2.0};
    }
    return {8.0, 8.0};
}

double luma(const std::uint8_t* p) { return 0.2126 * p[0] + 0.7152 * p[1] + 0.0722 * p[2]; }

}  // namespace

double value_noise(double x, double y, std::uint64_t seed) {
    const double fx = std::floor(x), fy = std::floor(y);
    const auto ix = static_cast<std::int64_t>(fx), iy = static_cast<std::int64_t>(fy);
    const double tx = smooth(x - fx), ty = smooth(y - fy);
    const double a = lattice(ix, iy, seed), b = lattice(ix + 1, iy, seed);
    const double c = lattice(ix, iy + 1, seed), d = lattice(ix + 1, iy + 1, seed);
    const double top = a + (b - a) * tx, bottom = c + (d - c) * tx;
    return top + (bottom - top) * ty;
}

Rgba texture_color(const SurfaceTexture& tex, Rgba base, Vec2 pixel) {
    if (tex.entropy == scene::TextureEntropy::low) return base;
    const auto hit = unproject_to_plane(tex.pose, pixel, tex.plane_z);
    if (!hit) return base;
    const Vec2 f = texture_frequency(tex.texture);
    const double u = hit->x * f.x, v = hit->y * f.y;
    double factor = 1.0;
    if (tex.entropy == scene::TextureEntropy::medium) {
        factor += 0.08 * (2.0 * value_noise(u, v, tex.seed) - 1.0);
    } else {
        const double n1 = value_noise(u, v, tex.seed);
        const double n2 = value_noise(u * 4.0, v * 4.0, tex.seed ^ 0x5bd1e995ULL);
        const double bump = value_noise(u + 0.05, v + 0.05, tex.seed) - n1;
        factor += 0.12 * (2.0 * n1 - 1.0) + 0.06 * (2.0 * n2 - 1.0) + 1.5 * bump;
    }
    return {base.r * factor, base.g * factor, base.b * factor, base.a};
}

double blur_sigma(int width, int height, double fstop) {
    if (!std::isfinite(fstop) || !(fstop > 0)) return 0.0;
    return std::min(width, height) / (100.0 * fstop);
}

RasterImage gaussian_blur(const RasterImage& image, double sigma) {
    if (!(sigma > 0) || !std::isfinite(sigma)) return image;
    const int r = static_cast<int>(std::ceil(3.0 * sigma));
    std::vector<double> kernel(static_cast<std::size_t>(2 * r + 1));
    double sum = 0;
    for (int i = -r; i <= r; ++i) {
        kernel[static_cast<std::size_t>(i + r)] = std::exp(-(i * i) / (2.0 * sigma * sigma));
        sum += kernel[static_cast<std::size_t>(i + r)];
    }
    for (auto& k : kernel) k /= sum;

    const int w = image.width, h = image.height;
    std::vector<double> tmp(static_cast<std::size_t>(w) * h * 3);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x)
            for (int c = 0; c < 3; ++c) {
                double acc = 0;
                for (int i = -r; i <= r; ++i) {
                    const int xx = std::clamp(x + i, 0, w - 1);
                    acc += kernel[static_cast<std::size_t>(i + r)] * image.at(xx, y)[c];
                }
                tmp[(static_cast<std::size_t>(y) * w + x) * 3 + c] = acc;
            }
    RasterImage out(w, h);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            std::uint8_t* px = out.at(x, y);
            for (int c = 0; c < 3; ++c) {
                double acc = 0;
                for (int i = -r; i <= r; ++i) {
                    const int yy = std::clamp(y + i, 0, h - 1);
                    acc += kernel[static_cast<std::size_t>(i + r)] * tmp[(static_cast<std::size_t>(yy) * w + x) * 3 + c];
                }
                px[c] = static_cast<std::uint8_t>(std::clamp(std::lround(acc), 0L, 255L));
            }
            px[3] = image.at(x, y)[3];
        }
    return out;
}

RasterImage apply_brightness(const RasterImage& image, double multiplier) {
    if (multiplier == 1.0) return image;
    RasterImage out = image;
    for (std::size_t i = 0; i < out.pixels.size(); i += 4)
        for (std::size_t c = 0; c < 3; ++c)
            out.pixels[i + c] =
                static_cast<std::uint8_t>(std::clamp(std::lround(image.pixels[i + c] * multiplier), 0L, 255L));
    return out;
}

RasterImage apply_noise(const RasterImage& image, const scene::Noise& noise) {
    return apply_brightness(gaussian_blur(image, blur_sigma(image.width, image.height, noise.blur_fstop)),
                            noise.lighting_multiplier);
}

double high_frequency_energy(const RasterImage& image) {
    double acc = 0;
    std::size_t n = 0;
    for (int y = 0; y < image.height; ++y)
        for (int x = 0; x < image.width; ++x) {
            const double l = luma(image.at(x, y));
            if (x + 1 < image.width) {
                const double d = luma(image.at(x + 1, y)) - l;
                acc += d * d;
                ++n;
            }
            if (y + 1 < image.height) {
                const double d = luma(image.at(x, y + 1)) - l;
                acc += d * d;
                ++n;
            }
        }
    return n ? acc / static_cast<double>(n) : 0.0;
}

double mean_gray(const RasterImage& image) {
    double acc = 0;
    for (int y = 0; y < image.height; ++y)
        for (int x = 0; x < image.width; ++x) acc += luma(image.at(x, y));
    return acc / (static_cast<double>(image.width) * image.height);
}

double luminance_variance(const RasterImage& image) {
    const double m = mean_gray(image);
    double acc = 0;
    for (int y = 0; y < image.height; ++y)
        for (int x = 0; x < image.width; ++x) {
            const double d = luma(image.at(x, y)) - m;
            acc += d * d;
        }
    return acc / (static_cast<double>(image.width) * image.height);
}

}  // namespace scenediag::render
