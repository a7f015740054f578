#pragma once

#include <string_view>
#include <vector>

#include "chess/chess_domain.hpp"
#include "common/geometry.hpp"

namespace scenediag::render {

using Contour = std::vector<Vec2>;

/// Piece silhouette in units of the piece height: base on y = 0, top at
/// y = 1, x centered on 0.
const std::vector<Contour>& piece_glyph(chess::PieceType type);
/// Height of the silhouette relative to the piece scale.
double piece_height_factor(chess::PieceType type);

Contour circle_contour(Vec2 center, double radius, int segments = 24);
Contour rect_contour(Vec2 lo, Vec2 hi);
Contour rounded_rect_contour(Vec2 lo, Vec2 hi, double radius, int corner_segments = 4);

/// Suit pip inside [-0.5, 0.5]^2, y up.
const std::vector<Contour>& suit_glyph(char suit);

/// Stroke font for card ranks. Each character sits in a 0.6 x 1 box, y up,
/// advancing by 0.8; strokes are thickened into quads of the given width.
std::vector<Contour> text_contours(std::string_view text, double stroke);
double text_width(std::string_view text);

}  // namespace scenediag::render
