#pragma once

#include <cstdint>

#include "render/raster.hpp"
#include "scene/scene_model.hpp"

namespace scenediag::render {

/// Smooth lattice noise in [0, 1), a pure function of (x, y, seed).
double value_noise(double x, double y, std::uint64_t seed);

/// Table color at a pixel, modulated by the surface texture entropy.
Rgba texture_color(const SurfaceTexture& texture, Rgba base, Vec2 pixel);

/// sigma = min(W, H) / (100 * fstop); 0 when blur is disabled.
double blur_sigma(int width, int height, double fstop);

/// Separable Gaussian with a normalized kernel of radius ceil(3 sigma) and
/// clamped borders. sigma <= 0 returns the input unchanged.
RasterImage gaussian_blur(const RasterImage& image, double sigma);

/// Multiplies RGB by `multiplier`, rounding and clamping to [0, 255].
RasterImage apply_brightness(const RasterImage& image, double multiplier);

/// Blur, then brightness.
RasterImage apply_noise(const RasterImage& image, const scene::Noise& noise);

/// Mean squared luminance difference between horizontal and vertical neighbors.
double high_frequency_energy(const RasterImage& image);

/// Population variance of the luminance channel.
double luminance_variance(const RasterImage& image);
double mean_gray(const RasterImage& image);

}  // namespace scenediag::render
