#include "render/raster.hpp"

#include <algorithm>
#include <cmath>

#include "common/errors.hpp"
#include "render/noise.hpp"

namespace scenediag::render {

namespace {

struct Edge {
    double x0, y0, x1, y1;
    int dir;
};

struct Crossing {
    double x;
    int dir;
};

double signed_area(const Contour& c) {
    double a = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        const Vec2 p = c[i], q = c[(i + 1) % c.size()];
        a += p.x * q.y - q.x * p.y;
    }
    return a / 2.0;
}

std::vector<Edge> build_edges(const std::vector<Contour>& contours) {
    std::vector<Edge> edges;
    for (const auto& c : contours) {
        if (c.size() < 3) continue;
        const bool flip = signed_area(c) < 0;
        for (std::size_t i = 0; i < c.size(); ++i) {
            Vec2 p = c[i], q = c[(i + 1) % c.size()];
            if (flip) std::swap(p, q);
            if (p.y == q.y) continue;
            edges.push_back({p.x, p.y, q.x, q.y, q.y > p.y ? 1 : -1});
        }
    }
    return edges;
}

class SampleBuffer {
public:
    SampleBuffer(int w, int h, Rgba bg) : w_(w), h_(h), data_(static_cast<std::size_t>(w) * h * 3) {
        for (std::size_t i = 0; i < data_.size(); i += 3) {
            data_[i] = bg.r;
            data_[i + 1] = bg.g;
            data_[i + 2] = bg.b;
        }
    }

    int width() const { return w_; }
    int height() const { return h_; }

    void blend(int sx, int sy, Rgba c) {
        double* p = data_.data() + (static_cast<std::size_t>(sy) * w_ + sx) * 3;
        p[0] = p[0] * (1.0 - c.a) + c.r * c.a;
        p[1] = p[1] * (1.0 - c.a) + c.g * c.a;
        p[2] = p[2] * (1.0 - c.a) + c.b * c.a;
    }

    const double* at(int sx, int sy) const { return data_.data() + (static_cast<std::size_t>(sy) * w_ + sx) * 3; }

private:
    int w_, h_;
    std::vector<double> data_;
};

template <typename ColorFn>
void fill_contours(SampleBuffer& buf, const std::vector<Contour>& contours, ColorFn color) {
    const std::vector<Edge> edges = build_edges(contours);
    if (edges.empty()) return;
    double ymin = edges[0].y0, ymax = edges[0].y0;
    for (const auto& e : edges) {
        ymin = std::min({ymin, e.y0, e.y1});
        ymax = std::max({ymax, e.y0, e.y1});
    }
    const double k = kSupersample;
    const int row0 = std::max(0, static_cast<int>(std::floor(ymin * k - 0.5)));
    const int row1 = std::min(buf.height() - 1, static_cast<int>(std::ceil(ymax * k - 0.5)));
    std::vector<Crossing> xs;
    for (int sy = row0; sy <= row1; ++sy) {
        const double yc = (sy + 0.5) / k;
        xs.clear();
        for (const auto& e : edges) {
            const double lo = std::min(e.y0, e.y1), hi = std::max(e.y0, e.y1);
            if (yc < lo || yc >= hi) continue;
            const double t = (yc - e.y0) / (e.y1 - e.y0);
            xs.push_back({e.x0 + t * (e.x1 - e.x0), e.dir});
        }
        if (xs.size() < 2) continue;
        std::sort(xs.begin(), xs.end(), [](const Crossing& a, const Crossing& b) {
            return a.x < b.x || (a.x == b.x && a.dir < b.dir);
        });
        int winding = 0;
        for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
            winding += xs[i].dir;
            if (winding == 0) continue;
            const int c0 = std::max(0, static_cast<int>(std::ceil(xs[i].x * k - 0.5)));
            const int c1 = std::min(buf.width(), static_cast<int>(std::ceil(xs[i + 1].x * k - 0.5)));
            for (int sx = c0; sx < c1; ++sx) buf.blend(sx, sy, color((sx + 0.5) / k, yc));
        }
    }
}

std::vector<Contour> stroke_contours(const std::vector<Contour>& contours, double width) {
    std::vector<Contour> out;
    const double h = width / 2.0;
    for (const auto& c : contours) {
        for (std::size_t i = 0; i < c.size(); ++i) {
            const Vec2 a = c[i], b = c[(i + 1) % c.size()];
            const double len = std::hypot(b.x - a.x, b.y - a.y);
            if (len == 0) continue;
            const Vec2 n{-(b.y - a.y) / len * h, (b.x - a.x) / len * h};
            const Vec2 t{(b.x - a.x) / len * h, (b.y - a.y) / len * h};
            out.push_back({a - n - t, b - n + t, b + n + t, a + n - t});
        }
    }
    return out;
}

}  // namespace

std::uint8_t to_byte(double v) {
    if (!(v > 0)) return 0;
    if (v >= 1.0) return 255;
    return static_cast<std::uint8_t>(std::lround(v * 255.0));
}

void sort_primitives(std::vector<ScenePrimitive>& primitives) {
    std::sort(primitives.begin(), primitives.end(), [](const ScenePrimitive& a, const ScenePrimitive& b) {
        if (a.layer != b.layer) return a.layer < b.layer;
        if (a.depth != b.depth) return a.depth > b.depth;
        return a.order < b.order;
    });
}

RasterImage rasterize(const std::vector<ScenePrimitive>& primitives, int width, int height, Rgba background) {
    if (width <= 0 || height <= 0) fail_validation("rasterize: zero-area resolution");
    SampleBuffer buf(width * kSupersample, height * kSupersample, background);
    for (const auto& p : primitives) {
        if (p.texture) {
            const SurfaceTexture& tex = *p.texture;
            const Rgba base = p.fill;
            fill_contours(buf, p.contours, [&](double x, double y) { return texture_color(tex, base, {x, y}); });
        } else {
            fill_contours(buf, p.contours, [&](double, double) { return p.fill; });
        }
        if (p.outline) {
            const Rgba oc = *p.outline;
            fill_contours(buf, stroke_contours(p.contours, 1.0), [&](double, double) { return oc; });
        }
    }

    RasterImage img(width, height);
    const double norm = 1.0 / (kSupersample * kSupersample);
    for (int y = 0; y < height; ++y) {
        for (int x = 0; x < width; ++x) {
            double acc[3] = {0, 0, 0};
            for (int j = 0; j < kSupersample; ++j)
                for (int i = 0; i < kSupersample; ++i) {
                    const double* s = buf.at(x * kSupersample + i, y * kSupersample + j);
                    acc[0] += s[0];
                    acc[1] += s[1];
                    acc[2] += s[2];
                }
            std::uint8_t* px = img.at(x, y);
            px[0] = to_byte(acc[0] * norm);
            px[1] = to_byte(acc[1] * norm);
            px[2] = to_byte(acc[2] * norm);
            px[3] = 255;
        }
    }
    return img;
}

BoundingBox bounding_box(const ScenePrimitive& p) {
    BoundingBox b{1e300, 1e300, -1e300, -1e300};
    for (const auto& c : p.contours)
        for (const auto& v : c) {
            b.x0 = std::min(b.x0, v.x);
            b.y0 = std::min(b.y0, v.y);
            b.x1 = std::max(b.x1, v.x);
            b.y1 = std::max(b.y1, v.y);
        }
    return b;
}

}  // namespace scenediag::render
