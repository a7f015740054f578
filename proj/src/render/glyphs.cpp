#include "render/glyphs.hpp"

#include <array>
#include <cmath>
#include <map>

namespace scenediag::render {

namespace {

struct Stroke {
    Vec2 a, b;
};

Contour base_plinth() { return {{-0.32, 0.0}, {0.32, 0.0}, {0.26, 0.12}, {-0.26, 0.12}}; }

std::vector<Contour> build_piece(chess::PieceType type) {
    using chess::PieceType;
    switch (type) {
        case PieceType::pawn:
            return {base_plinth(), {{-0.13, 0.12}, {0.13, 0.12}, {0.07, 0.55}, {-0.07, 0.55}},
                    circle_contour({0.0, 0.7}, 0.17)};
        case PieceType::rook:
            return {base_plinth(),
                    {{-0.2, 0.12}, {0.2, 0.12}, {0.2, 0.62}, {-0.2, 0.62}},
                    {{-0.27, 0.62}, {0.27, 0.62}, {0.27, 1.0}, {0.16, 1.0}, {0.16, 0.88}, {0.05, 0.88}, {0.05, 1.0},
                     {-0.05, 1.0}, {-0.05, 0.88}, {-0.16, 0.88}, {-0.16, 1.0}, {-0.27, 1.0}}};
        case PieceType::knight:
            return {base_plinth(),
                    {{-0.22, 0.12}, {0.22, 0.12}, {0.16, 0.42}, {0.25, 0.66}, {0.1, 0.88}, {-0.02, 0.9}, {-0.08, 1.0},
                     {-0.13, 0.86}, {-0.3, 0.64}, {-0.28, 0.54}, {-0.08, 0.58}, {-0.15, 0.42}}};
        case PieceType::bishop: {
            Contour mitre;
            for (int i = 0; i < 24; ++i) {
                const double t = 2.0 * kPi * i / 24.0;
                mitre.push_back({0.16 * std::cos(t), 0.66 + 0.2 * std::sin(t)});
            }
            return {base_plinth(), {{-0.14, 0.12}, {0.14, 0.12}, {0.08, 0.5}, {-0.08, 0.5}}, mitre,
                    circle_contour({0.0, 0.93}, 0.07, 12)};
        }
        case PieceType::queen:
            return {base_plinth(),
                    {{-0.16, 0.12}, {0.16, 0.12}, {0.09, 0.58}, {-0.09, 0.58}},
                    {{-0.22, 0.58}, {0.22, 0.58}, {0.3, 0.88}, {0.15, 0.74}, {0.08, 0.92}, {0.0, 0.76}, {-0.08, 0.92},
                     {-0.15, 0.74}, {-0.3, 0.88}},
                    circle_contour({0.0, 0.94}, 0.06, 12)};
        case PieceType::king:
            return {base_plinth(),
                    {{-0.16, 0.12}, {0.16, 0.12}, {0.1, 0.6}, {-0.1, 0.6}},
                    {{-0.19, 0.6}, {0.19, 0.6}, {0.14, 0.76}, {-0.14, 0.76}},
                    rect_contour({-0.035, 0.76}, {0.035, 1.0}),
                    rect_contour({-0.11, 0.85}, {0.11, 0.91})};
    }
    return {};
}

std::vector<Contour> build_suit(char suit) {
    switch (suit) {
        case 'D':
            return {{{0.0, -0.5}, {0.36, 0.0}, {0.0, 0.5}, {-0.36, 0.0}}};
        case 'H':
            return {circle_contour({-0.22, 0.16}, 0.26), circle_contour({0.22, 0.16}, 0.26),
                    {{-0.46, 0.08}, {0.46, 0.08}, {0.0, -0.48}}};
        case 'S':
            return {circle_contour({-0.22, -0.06}, 0.24), circle_contour({0.22, -0.06}, 0.24),
                    {{-0.44, 0.0}, {0.0, 0.5}, {0.44, 0.0}},
                    {{-0.05, -0.2}, {0.05, -0.2}, {0.16, -0.5}, {-0.16, -0.5}}};
        case 'C':
            return {circle_contour({0.0, 0.24}, 0.2), circle_contour({-0.22, -0.08}, 0.2),
                    circle_contour({0.22, -0.08}, 0.2), {{-0.05, 0.0}, {0.05, 0.0}, {0.16, -0.5}, {-0.16, -0.5}}};
        default:
            return {};
    }
}

const std::map<char, std::vector<Stroke>>& font() {
    static const std::map<char, std::vector<Stroke>> f = [] {
        const double w = 0.6;
        std::map<char, std::vector<Stroke>> m;
        m['0'] = {{{0, 0}, {w, 0}}, {{w, 0}, {w, 1}}, {{w, 1}, {0, 1}}, {{0, 1}, {0, 0}}};
        m['1'] = {{{w / 2, 0}, {w / 2, 1}}, {{w / 2, 1}, {w / 6, 0.8}}};
        m['2'] = {{{0, 1}, {w, 1}}, {{w, 1}, {w, 0.5}}, {{w, 0.5}, {0, 0.5}}, {{0, 0.5}, {0, 0}}, {{0, 0}, {w, 0}}};
        m['3'] = {{{0, 1}, {w, 1}}, {{w, 1}, {w, 0}}, {{0, 0.5}, {w, 0.5}}, {{0, 0}, {w, 0}}};
        m['4'] = {{{0, 1}, {0, 0.5}}, {{0, 0.5}, {w, 0.5}}, {{w, 1}, {w, 0}}};
        m['5'] = {{{w, 1}, {0, 1}}, {{0, 1}, {0, 0.5}}, {{0, 0.5}, {w, 0.5}}, {{w, 0.5}, {w, 0}}, {{w, 0}, {0, 0}}};
        m['6'] = {{{w, 1}, {0, 1}}, {{0, 1}, {0, 0}}, {{0, 0}, {w, 0}}, {{w, 0}, {w, 0.5}}, {{w, 0.5}, {0, 0.5}}};
        m['7'] = {{{0, 1}, {w, 1}}, {{w, 1}, {w * 0.35, 0}}};
        m['8'] = {{{0, 0}, {w, 0}}, {{w, 0}, {w, 1}}, {{w, 1}, {0, 1}}, {{0, 1}, {0, 0}}, {{0, 0.5}, {w, 0.5}}};
        m['9'] = {{{w, 0.5}, {0, 0.5}}, {{0, 0.5}, {0, 1}}, {{0, 1}, {w, 1}}, {{w, 1}, {w, 0}}, {{w, 0}, {0, 0}}};
        m['J'] = {{{w * 0.3, 1}, {w, 1}}, {{w * 0.8, 1}, {w * 0.8, 0}}, {{w * 0.8, 0}, {0, 0}}, {{0, 0}, {0, 0.3}}};
        m['Q'] = {{{0, 0}, {w, 0}}, {{w, 0}, {w, 1}}, {{w, 1}, {0, 1}}, {{0, 1}, {0, 0}}, {{w * 0.55, 0.3}, {w * 1.1, -0.1}}};
        m['K'] = {{{0, 0}, {0, 1}}, {{0, 0.5}, {w, 1}}, {{0, 0.5}, {w, 0}}};
        m['A'] = {{{0, 0}, {w / 2, 1}}, {{w / 2, 1}, {w, 0}}, {{w * 0.25, 0.45}, {w * 0.75, 0.45}}};
        return m;
    }();
    return f;
}

Contour thicken(Stroke s, double width) {
    const double dx = s.b.x - s.a.x, dy = s.b.y - s.a.y;
    const double len = std::hypot(dx, dy);
    const double h = width / 2.0;
    const Vec2 n{-dy / len * h, dx / len * h};
    const Vec2 t{dx / len * h, dy / len * h};
    return {s.a - n - t, s.b - n + t, s.b + n + t, s.a + n - t};
}

}  // namespace

const std::vector<Contour>& piece_glyph(chess::PieceType type) {
    static const std::array<std::vector<Contour>, 6> glyphs = [] {
        std::array<std::vector<Contour>, 6> g;
        for (auto t : chess::kAllPieceTypes) g[static_cast<std::size_t>(t)] = build_piece(t);
        return g;
    }();
    return glyphs[static_cast<std::size_t>(type)];
}

double piece_height_factor(chess::PieceType type) {
    static constexpr std::array<double, 6> factors{0.6, 0.72, 0.8, 0.86, 0.95, 1.0};
    return factors[static_cast<std::size_t>(type)];
}

Contour circle_contour(Vec2 center, double radius, int segments) {
    Contour c;
    c.reserve(static_cast<std::size_t>(segments));
    for (int i = 0; i < segments; ++i) {
        const double t = 2.0 * kPi * i / segments;
        c.push_back({center.x + radius * std::cos(t), center.y + radius * std::sin(t)});
    }
    return c;
}

Contour rect_contour(Vec2 lo, Vec2 hi) { return {{lo.x, lo.y}, {hi.x, lo.y}, {hi.x, hi.y}, {lo.x, hi.y}}; }

Contour rounded_rect_contour(Vec2 lo, Vec2 hi, double radius, int corner_segments) {
    radius = std::min({radius, (hi.x - lo.x) / 2.0, (hi.y - lo.y) / 2.0});
    const std::array<Vec2, 4> centers{Vec2{hi.x - radius, lo.y + radius}, Vec2{hi.x - radius, hi.y - radius},
                                      Vec2{lo.x + radius, hi.y - radius}, Vec2{lo.x + radius, lo.y + radius}};
    Contour c;
    for (int k = 0; k < 4; ++k) {
        const double start = -kPi / 2.0 + k * kPi / 2.0;
        for (int i = 0; i <= corner_segments; ++i) {
            const double t = start + (kPi / 2.0) * i / corner_segments;
            c.push_back({centers[static_cast<std::size_t>(k)].x + radius * std::cos(t),
                         centers[static_cast<std::size_t>(k)].y + radius * std::sin(t)});
        }
    }
    return c;
}

const std::vector<Contour>& suit_glyph(char suit) {
    static const std::map<char, std::vector<Contour>> suits = [] {
        std::map<char, std::vector<Contour>> m;
        for (char s : {'S', 'H', 'D', 'C'}) m[s] = build_suit(s);
        return m;
    }();
    static const std::vector<Contour> none;
    auto it = suits.find(suit);
    return it == suits.end() ? none : it->second;
}

std::vector<Contour> text_contours(std::string_view text, double stroke) {
    std::vector<Contour> out;
    double x = 0.0;
    for (char ch : text) {
        auto it = font().find(ch);
        if (it != font().end())
            for (const auto& s : it->second) out.push_back(thicken({s.a + Vec2{x, 0}, s.b + Vec2{x, 0}}, stroke));
        x += 0.8;
    }
    return out;
}

double text_width(std::string_view text) { return text.empty() ? 0.0 : 0.8 * static_cast<double>(text.size()) - 0.2; }

}  // namespace scenediag::render
