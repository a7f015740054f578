#include "render/project.hpp"

#include <algorithm>
#include <cmath>

#include "render/noise.hpp"

namespace scenediag::render {

namespace {

Rgba shade(Rgba c, double f) { return {c.r * f, c.g * f, c.b * f, c.a}; }

class Builder {
public:
    explicit Builder(const CameraPose& pose) : pose_(pose) {}

    ScenePrimitive& flat(const std::vector<Vec3>& poly, int layer, double depth, Rgba fill, Shape shape = Shape::polygon) {
        ScenePrimitive p;
        p.shape = shape;
        p.layer = layer;
        p.depth = depth;
        p.order = out_.size();
        p.fill = fill;
        p.contours.push_back(project_polygon(pose_, poly));
        out_.push_back(std::move(p));
        return out_.back();
    }

    ScenePrimitive& screen(std::vector<Contour> contours, int layer, double depth, Rgba fill, Shape shape) {
        ScenePrimitive p;
        p.shape = shape;
        p.layer = layer;
        p.depth = depth;
        p.order = out_.size();
        p.fill = fill;
        p.contours = std::move(contours);
        out_.push_back(std::move(p));
        return out_.back();
    }

    double depth_of(Vec3 w) const { return to_camera(pose_, w).z; }

    std::vector<ScenePrimitive> take() { return std::move(out_); }

private:
    const CameraPose& pose_;
    std::vector<ScenePrimitive> out_;
};

std::vector<Vec3> rect_at(double cx, double cy, double hx, double hy, double z) {
    return {{cx - hx, cy - hy, z}, {cx + hx, cy - hy, z}, {cx + hx, cy + hy, z}, {cx - hx, cy + hy, z}};
}

std::vector<Vec3> table_outline(const scene::Table& t, double z) {
    if (t.shape == scene::TableShape::rectangular) return rect_at(0, 0, t.length / 2, t.width / 2, z);
    std::vector<Vec3> out;
    for (int i = 0; i < 64; ++i) {
        const double a = 2.0 * kPi * i / 64.0;
        out.push_back({t.length / 2 * std::cos(a), t.width / 2 * std::sin(a), z});
    }
    return out;
}

Contour convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](Vec2 a, Vec2 b) { return a.x < b.x || (a.x == b.x && a.y < b.y); });
    if (pts.size() < 3) return pts;
    auto turn = [](Vec2 o, Vec2 a, Vec2 b) { return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x); };
    Contour hull(2 * pts.size());
    std::size_t k = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        while (k >= 2 && turn(hull[k - 2], hull[k - 1], pts[i]) <= 0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = pts.size() - 1, t = k + 1; i > 0; --i) {
        while (k >= t && turn(hull[k - 2], hull[k - 1], pts[i - 1]) <= 0) --k;
        hull[k++] = pts[i - 1];
    }
    hull.resize(k - 1);
    return hull;
}

/// Maps card-local (u, v) to world; u runs along the card's x footprint.
struct CardFrame {
    Vec3 center;
    Vec3 ax;  // unit along the card width
    Vec3 ay;  // unit along the card height
    Vec3 at(double u, double v) const { return center + ax * u + ay * v; }
};

void add_chess(Builder& b, const CameraPose& pose, const scene::ResolvedScene& s) {
    const chess::BoardSpec& spec = s.chess.board;
    const chess::BoardLayout layout = chess::generate_board(spec, s.seed);
    const double top = spec.location.z + spec.thickness;
    const double hx = spec.length / 2, hy = spec.width / 2;
    b.flat(rect_at(spec.location.x, spec.location.y, hx, hy, spec.location.z), kLayerBoard, 2,
           shade(spec.board_material.color, 0.6)).tag = "board_side";
    b.flat(rect_at(spec.location.x, spec.location.y, hx, hy, top), kLayerBoard, 1, spec.board_material.color).tag =
        "board";
    for (int r = 0; r < layout.rows(); ++r)
        for (int c = 0; c < layout.columns(); ++c) {
            const Vec3 center = chess::cell_to_world(layout, r, c);
            const Rgba color = layout.is_dark({r, c}) ? spec.black_material.color : spec.white_material.color;
            b.flat(rect_at(center.x, center.y, layout.row_pitch / 2, layout.col_pitch / 2, top), kLayerBoard, 0, color)
                .tag = "square:" + std::to_string(r) + ":" + std::to_string(c);
        }

    for (std::size_t i = 0; i < s.chess.pieces.size(); ++i) {
        const auto& piece = s.chess.pieces[i];
        const Vec3 base = piece.world_location;
        const double depth = b.depth_of(base);
        const double height = piece.scale * piece_height_factor(piece.type);
        const Rgba fill = piece.material.color;
        const Rgba halo = chess::color_label(fill) == "white" ? Rgba{0.12, 0.12, 0.12, 1.0} : Rgba{0.78, 0.78, 0.78, 1.0};
        const std::string tag = "piece:" + std::to_string(i);

        std::vector<Vec3> shadow;
        for (int k = 0; k < 20; ++k) {
            const double a = 2.0 * kPi * k / 20.0;
            shadow.push_back({base.x + 0.3 * height * std::cos(a), base.y + 0.3 * height * std::sin(a), base.z});
        }
        b.flat(shadow, kLayerUpright, depth, {0.0, 0.0, 0.0, 0.35}, Shape::disk).tag = tag + ":shadow";

        auto to_screen = [&](const std::vector<Contour>& local, double grow) {
            std::vector<Contour> out;
            for (const auto& c : local) {
                std::vector<Vec3> world;
                for (const auto& v : c) {
                    const double u = v.x * grow, w = 0.5 + (v.y - 0.5) * grow;
                    world.push_back(base + pose.right * (u * height) + pose.up * (w * height));
                }
                out.push_back(project_polygon(pose, world));
            }
            return out;
        };
        const auto& glyph = piece_glyph(piece.type);
        b.screen(to_screen(glyph, 1.12), kLayerUpright, depth, halo, Shape::glyph).tag = tag + ":halo";
        b.screen(to_screen(glyph, 1.0), kLayerUpright, depth, fill, Shape::glyph).tag = tag;
    }
}

void add_card(Builder& b, const CameraPose& pose, const poker::PlacedCard& card, poker::CardGeometry size) {
    const double rot = deg_to_rad(card.rotation);
    const Vec3 ax{-std::sin(rot), std::cos(rot), 0.0};
    const Vec3 ay{std::cos(rot), std::sin(rot), 0.0};
    const CardFrame frame{card.position, ax, ay};
    const double hw = size.width / 2, hh = size.height / 2;
    const double depth = -card.position.z;
    const std::string tag = "card:" + poker::encode(card.card);

    auto world_contour = [&](const Contour& local) {
        std::vector<Vec3> w;
        for (const auto& v : local) w.push_back(frame.at(v.x, v.y));
        return w;
    };
    ScenePrimitive& body = b.flat(world_contour(rounded_rect_contour({-hw, -hh}, {hw, hh}, 0.08 * size.width)),
                                  kLayerFlat, depth, {0.97, 0.97, 0.95, 1.0}, Shape::rounded_rect);
    body.outline = Rgba{0.25, 0.25, 0.25, 1.0};
    body.tag = tag;

    if (!card.face_up) {
        b.flat(world_contour(rounded_rect_contour({-hw * 0.82, -hh * 0.86}, {hw * 0.82, hh * 0.86}, 0.05 * size.width)),
               kLayerFlat, depth, {0.16, 0.25, 0.62, 1.0}, Shape::rounded_rect).tag = tag + ":back";
        return;
    }

    // Glyphs are laid out in a screen-upright frame: text x along image right,
    // text y toward the far side of the table.
    const Vec3 tx{pose.right.x, pose.right.y, 0.0};
    const Vec3 ty{-pose.right.y, pose.right.x, 0.0};
    auto glyph_contours = [&](const std::vector<Contour>& local, Vec2 origin, double scale) {
        std::vector<Contour> out;
        for (const auto& c : local) {
            std::vector<Vec3> w;
            for (const auto& v : c) {
                const Vec3 offset = tx * (origin.x + v.x * scale) + ty * (origin.y + v.y * scale);
                w.push_back(card.position + offset);
            }
            out.push_back(project_polygon(pose, w));
        }
        return out;
    };
    // Extents of the card footprint along the text axes.
    const double ex = std::abs(dot(ax, tx)) * hw + std::abs(dot(ay, tx)) * hh;
    const double ey = std::abs(dot(ax, ty)) * hw + std::abs(dot(ay, ty)) * hh;
    const bool red = card.card.suit == 'H' || card.card.suit == 'D';
    const Rgba ink = red ? Rgba{0.8, 0.08, 0.08, 1.0} : Rgba{0.05, 0.05, 0.05, 1.0};
    const std::string rank = poker::encode(card.card).substr(0, poker::encode(card.card).size() - 1);
    const double glyph_h = 0.34 * std::min(ex, ey) * 2.0;
    const Vec2 text_origin{-ex + 0.12 * ex, ey - 0.12 * ey - glyph_h};
    b.screen(glyph_contours(text_contours(rank, 0.16), text_origin, glyph_h), kLayerFlat, depth, ink, Shape::glyph)
        .tag = tag + ":rank";
    const double pip = 0.9 * std::min(ex, ey);
    b.screen(glyph_contours(suit_glyph(card.card.suit), {0.15 * ex, -0.2 * ey}, pip), kLayerFlat, depth, ink,
             Shape::glyph)
        .tag = tag + ":suit";
}

void add_chips(Builder& b, const CameraPose& pose, const poker::ChipPile& pile, const std::string& tag) {
    const double radius = pile.scale / 3.0;
    const double thickness = pile.scale * 0.055;
    const double height = thickness * std::max(pile.n_chips, 0);
    const double depth = b.depth_of(pile.position);
    std::vector<Vec2> pts;
    Contour top;
    for (int k = 0; k < 24; ++k) {
        const double a = 2.0 * kPi * k / 24.0;
        const Vec3 p{pile.position.x + radius * std::cos(a), pile.position.y + radius * std::sin(a), pile.position.z};
        if (auto q = project_point(pose, p)) pts.push_back(q->pixel);
        if (auto q = project_point(pose, p + Vec3{0, 0, height})) {
            pts.push_back(q->pixel);
            top.push_back(q->pixel);
        }
    }
    if (pts.size() < 3) return;
    b.screen({convex_hull(pts)}, kLayerUpright, depth, shade(pile.color, 0.65), Shape::disk).tag = tag;
    ScenePrimitive& cap = b.screen({top}, kLayerUpright, depth, pile.color, Shape::disk);
    cap.outline = Rgba{0.95, 0.95, 0.95, 1.0};
    cap.tag = tag + ":top";
}

void add_poker(Builder& b, const CameraPose& pose, const scene::ResolvedScene& s) {
    const poker::PokerScene& p = s.poker;
    if (p.grid) {
        const auto& g = *p.grid;
        const double z = g.center.z;
        const double lw = 0.004;
        for (int r = 0; r <= g.rows; ++r) {
            const double x = g.center.x - g.size / 2 + g.size * r / g.rows;
            b.flat(rect_at(x, g.center.y, lw, g.size / 2 + lw, z), kLayerMarks, 0, {0.08, 0.08, 0.08, 1.0}).tag =
                "grid_line";
        }
        for (int c = 0; c <= g.cols; ++c) {
            const double y = g.center.y - g.size / 2 + g.size * c / g.cols;
            b.flat(rect_at(g.center.x, y, g.size / 2 + lw, lw, z), kLayerMarks, 0, {0.08, 0.08, 0.08, 1.0}).tag =
                "grid_line";
        }
    }
    for (const auto& card : poker::all_cards(p)) add_card(b, pose, card, p.card_size);
    for (const auto& player : p.players)
        for (std::size_t i = 0; i < player.chips.size(); ++i)
            add_chips(b, pose, player.chips[i], "chip:" + player.player_id + ":" + std::to_string(i));
}

}  // namespace

std::vector<ScenePrimitive> project_scene(const scene::ResolvedScene& s) {
    const CameraPose pose = make_camera_pose(s.setup);
    Builder b(pose);
    b.flat(rect_at(0, 0, 8.0, 8.0, 0.0), kLayerFloor, 0, s.setup.floor.color).tag = "floor";

    const scene::Table& t = s.setup.table;
    b.flat(table_outline(t, t.height - 0.04), kLayerTable, 1, shade(t.material.color, 0.55)).tag = "table_side";
    ScenePrimitive& top = b.flat(table_outline(t, t.height), kLayerTable, 0, t.material.color);
    top.tag = "table";
    top.texture = SurfaceTexture{pose, t.height, t.texture, s.noise.table_texture, derive_seed(s.seed, 21)};

    if (s.game == config::Game::chess) add_chess(b, pose, s);
    else add_poker(b, pose, s);

    std::vector<ScenePrimitive> out = b.take();
    sort_primitives(out);
    return out;
}

RasterImage render_scene(const scene::ResolvedScene& s) {
    const auto prims = project_scene(s);
    const RasterImage raw =
        rasterize(prims, s.setup.resolution.pixel_width(), s.setup.resolution.pixel_height(), s.setup.background.color);
    return apply_noise(raw, s.noise);
}

}  // namespace scenediag::render
