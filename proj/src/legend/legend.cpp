#include "legend/legend.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>

namespace scenediag::legend {

namespace {

CardRecord card_record(const poker::PlacedCard& c) { return {poker::encode(c.card), c.position, c.face_up}; }

std::vector<CardRecord> card_records(const std::vector<poker::PlacedCard>& cards) {
    std::vector<CardRecord> out;
    for (const auto& c : cards) out.push_back(card_record(c));
    return out;
}

Json card_json(const CardRecord& c) {
    return Json{{"card", c.card}, {"position", to_json(c.position)}, {"face_up", c.face_up}};
}

Json cards_json(const std::vector<CardRecord>& cards) {
    Json arr = Json::array();
    for (const auto& c : cards) arr.push_back(card_json(c));
    return arr;
}

CardRecord parse_card(const Json& j, const std::string& path) {
    CardRecord c;
    c.card = get_or<std::string>(j, "card", "", path);
    c.position = vec3_from_json(j.value("position", Json::array({0, 0, 0})), path + ".position");
    c.face_up = get_or<bool>(j, "face_up", true, path);
    return c;
}

std::vector<CardRecord> parse_cards(const Json& j, const std::string& path) {
    std::vector<CardRecord> out;
    if (!j.is_array()) return out;
    for (std::size_t i = 0; i < j.size(); ++i) out.push_back(parse_card(j[i], path + "[" + std::to_string(i) + "]"));
    return out;
}

std::string upper(std::string s) {
    for (auto& ch : s) ch = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
    return s;
}

std::string rgba_text(const Rgba& c) {
    return "RGBA(" + format_real(c.r) + ", " + format_real(c.g) + ", " + format_real(c.b) + ", " + format_real(c.a) + ")";
}

std::string card_list(const std::vector<CardRecord>& cards) {
    std::string out;
    for (std::size_t i = 0; i < cards.size(); ++i) {
        if (i) out += ", ";
        out += cards[i].card;
        if (!cards[i].face_up) out += " (face down)";
    }
    return out;
}

constexpr std::array<chess::PieceType, 6> kTextOrder{chess::PieceType::king,   chess::PieceType::queen,
                                                     chess::PieceType::rook,   chess::PieceType::bishop,
                                                     chess::PieceType::knight, chess::PieceType::pawn};

}  // namespace

Legend build_legend(const scene::ResolvedScene& s) {
    Legend l;
    l.game = std::string(config::to_string(s.game));
    const auto& st = s.setup;
    l.camera = CameraRecord{st.camera.distance, st.camera.angle, st.camera.horizontal_angle, 50.0};
    NoiseRecord n;
    n.blur = s.noise.blur_preset;
    if (s.noise.blur_enabled()) n.f_stop = s.noise.blur_fstop;
    n.lighting = s.noise.lighting_multiplier;
    n.table_texture = std::string(scene::to_string(s.noise.table_texture));
    l.noise = n;
    l.seed = s.seed;
    l.table = TableRecord{std::string(scene::to_string(st.table.shape)), st.table.length, st.table.width, st.table.height};

    if (s.game == config::Game::chess) {
        const auto& b = s.chess.board;
        l.board = BoardRecord{b.rows, b.columns, b.length, b.width, b.location};
        for (const auto& p : s.chess.pieces)
            l.pieces.push_back({std::string(chess::to_string(p.type)), p.cell.row, p.cell.col, p.material.color, p.scale,
                                p.world_location});
    } else {
        const auto& p = s.poker;
        l.community = card_records(p.community);
        for (const auto& pl : p.players) {
            PlayerRecord r;
            r.player_id = pl.player_id;
            r.hand = card_records(pl.hand);
            for (const auto& c : pl.chips) r.chips.push_back({c.position, c.n_chips, c.color});
            l.players.push_back(std::move(r));
        }
        if (p.overlap)
            l.overlap = OverlapRecord{std::string(poker::to_string(p.overlap->axis)), p.overlap->overlap_fraction,
                                      card_records(p.overlap->cards)};
        if (p.grid) l.grid = GridRecord{p.grid->rows, p.grid->cols, p.grid->row, p.grid->col, card_record(p.grid->card)};
    }
    return l;
}

std::vector<CardRecord> all_cards(const Legend& l) {
    std::vector<CardRecord> out = l.community;
    for (const auto& p : l.players) out.insert(out.end(), p.hand.begin(), p.hand.end());
    if (l.overlap) out.insert(out.end(), l.overlap->cards.begin(), l.overlap->cards.end());
    if (l.grid) out.push_back(l.grid->card);
    return out;
}

Json render_legend_json(const Legend& l) {
    Json j = Json::object();
    j["game"] = l.game;
    if (l.board)
        j["board"] = Json{{"rows", l.board->rows},
                          {"columns", l.board->columns},
                          {"length", l.board->length},
                          {"width", l.board->width},
                          {"location", to_json(l.board->location)}};
    if (l.game == "chess") {
        Json pieces = Json::array();
        for (const auto& p : l.pieces)
            pieces.push_back(Json{{"type", p.type},
                                  {"position", Json::array({p.row, p.col})},
                                  {"color", to_json(p.color)},
                                  {"scale", p.scale},
                                  {"world_location", to_json(p.world_location)}});
        j["pieces"] = std::move(pieces);
    }
    if (l.table)
        j["table"] = Json{{"shape", l.table->shape},
                          {"length", l.table->length},
                          {"width", l.table->width},
                          {"height", l.table->height}};
    if (l.game == "poker") {
        j["community"] = cards_json(l.community);
        Json players = Json::array();
        for (const auto& p : l.players) {
            Json chips = Json::array();
            for (const auto& c : p.chips)
                chips.push_back(Json{{"position", to_json(c.position)}, {"n_chips", c.n_chips}, {"color", to_json(c.color)}});
            players.push_back(Json{{"player_id", p.player_id}, {"hand", cards_json(p.hand)}, {"chips", std::move(chips)}});
        }
        j["players"] = std::move(players);
        if (l.overlap)
            j["overlap"] = Json{{"axis", l.overlap->axis},
                                {"overlap_fraction", l.overlap->overlap_fraction},
                                {"cards", cards_json(l.overlap->cards)}};
        if (l.grid)
            j["grid"] = Json{{"rows", l.grid->rows},
                             {"cols", l.grid->cols},
                             {"row", l.grid->row},
                             {"col", l.grid->col},
                             {"card", card_json(l.grid->card)}};
    }
    if (l.camera)
        j["camera"] = Json{{"distance", l.camera->distance},
                           {"angle", l.camera->angle},
                           {"horizontal_angle", l.camera->horizontal_angle},
                           {"vfov", l.camera->vfov}};
    if (l.noise) {
        Json n{{"blur", l.noise->blur}};
        if (l.noise->f_stop) n["f_stop"] = *l.noise->f_stop;
        n["lighting"] = l.noise->lighting;
        n["table_texture"] = l.noise->table_texture;
        j["noise"] = std::move(n);
    }
    if (l.seed) j["seeds"] = Json{{"scene", *l.seed}};
    return j;
}

Legend parse_legend_json(const Json& j) {
    if (!j.is_object()) fail_validation("legend: expected a mapping");
    Legend l;
    l.game = get_or<std::string>(j, "game", "chess", "legend");
    if (l.game != "chess" && l.game != "poker") fail_validation("legend.game: expected chess or poker");
    if (auto it = j.find("board"); it != j.end() && it->is_object()) {
        BoardRecord b;
        b.rows = get_or<int>(*it, "rows", b.rows, "legend.board");
        b.columns = get_or<int>(*it, "columns", b.columns, "legend.board");
        b.length = get_or<double>(*it, "length", b.length, "legend.board");
        b.width = get_or<double>(*it, "width", b.width, "legend.board");
        if (it->contains("location")) b.location = vec3_from_json((*it)["location"], "legend.board.location");
        l.board = b;
    }
    if (auto it = j.find("pieces"); it != j.end() && it->is_array()) {
        for (std::size_t i = 0; i < it->size(); ++i) {
            const Json& pj = (*it)[i];
            const std::string where = "legend.pieces[" + std::to_string(i) + "]";
            PieceRecord p;
            p.type = get_or<std::string>(pj, "type", "", where);
            const Json pos = pj.value("position", Json());
            if (!pos.is_array() || pos.size() != 2 || !pos[0].is_number_integer() || !pos[1].is_number_integer())
                fail_validation(where + ".position: expected [row, col]");
            p.row = pos[0].get<int>();
            p.col = pos[1].get<int>();
            if (pj.contains("color")) p.color = rgba_from_json(pj["color"], where + ".color");
            p.scale = get_or<double>(pj, "scale", p.scale, where);
            if (pj.contains("world_location")) p.world_location = vec3_from_json(pj["world_location"], where + ".world_location");
            l.pieces.push_back(p);
        }
    }
    if (auto it = j.find("table"); it != j.end() && it->is_object()) {
        TableRecord t;
        t.shape = get_or<std::string>(*it, "shape", t.shape, "legend.table");
        t.length = get_or<double>(*it, "length", t.length, "legend.table");
        t.width = get_or<double>(*it, "width", t.width, "legend.table");
        t.height = get_or<double>(*it, "height", t.height, "legend.table");
        l.table = t;
    }
    l.community = parse_cards(j.value("community", Json()), "legend.community");
    if (auto it = j.find("players"); it != j.end() && it->is_array()) {
        for (std::size_t i = 0; i < it->size(); ++i) {
            const Json& pj = (*it)[i];
            const std::string where = "legend.players[" + std::to_string(i) + "]";
            PlayerRecord p;
            p.player_id = get_or<std::string>(pj, "player_id", "", where);
            p.hand = parse_cards(pj.value("hand", Json()), where + ".hand");
            for (const auto& cj : pj.value("chips", Json::array())) {
                ChipRecord c;
                c.position = vec3_from_json(cj.value("position", Json::array({0, 0, 0})), where + ".chips.position");
                c.n_chips = get_or<int>(cj, "n_chips", 0, where + ".chips");
                if (cj.contains("color")) c.color = rgba_from_json(cj["color"], where + ".chips.color");
                p.chips.push_back(c);
            }
            l.players.push_back(std::move(p));
        }
    }
    if (auto it = j.find("overlap"); it != j.end() && it->is_object()) {
        OverlapRecord o;
        o.axis = get_or<std::string>(*it, "axis", "horizontal", "legend.overlap");
        o.overlap_fraction = get_or<double>(*it, "overlap_fraction", 0.0, "legend.overlap");
        o.cards = parse_cards(it->value("cards", Json()), "legend.overlap.cards");
        l.overlap = std::move(o);
    }
    if (auto it = j.find("grid"); it != j.end() && it->is_object()) {
        GridRecord g;
        g.rows = get_or<int>(*it, "rows", g.rows, "legend.grid");
        g.cols = get_or<int>(*it, "cols", g.cols, "legend.grid");
        g.row = get_or<int>(*it, "row", 0, "legend.grid");
        g.col = get_or<int>(*it, "col", 0, "legend.grid");
        g.card = parse_card(it->value("card", Json::object()), "legend.grid.card");
        l.grid = g;
    }
    if (auto it = j.find("camera"); it != j.end() && it->is_object()) {
        CameraRecord c;
        c.distance = get_or<double>(*it, "distance", 0.0, "legend.camera");
        c.angle = get_or<double>(*it, "angle", 0.0, "legend.camera");
        c.horizontal_angle = get_or<double>(*it, "horizontal_angle", 0.0, "legend.camera");
        c.vfov = get_or<double>(*it, "vfov", 50.0, "legend.camera");
        l.camera = c;
    }
    if (auto it = j.find("noise"); it != j.end() && it->is_object()) {
        NoiseRecord n;
        n.blur = get_or<std::string>(*it, "blur", "none", "legend.noise");
        if (auto f = it->find("f_stop"); f != it->end() && f->is_number()) n.f_stop = f->get<double>();
        n.lighting = get_or<double>(*it, "lighting", 1.0, "legend.noise");
        n.table_texture = get_or<std::string>(*it, "table_texture", "medium", "legend.noise");
        l.noise = n;
    }
    if (auto it = j.find("seeds"); it != j.end() && it->is_object() && it->contains("scene"))
        l.seed = (*it)["scene"].get<std::uint64_t>();
    return l;
}

std::string render_legend_text(const Legend& l) {
    std::ostringstream out;
    if (l.game == "chess") {
        out << "CHESS PIECES LEGEND\n";
        if (l.board)
            out << "Board: " << l.board->rows << "x" << l.board->columns << "; Length: " << format_real(l.board->length)
                << "; Width: " << format_real(l.board->width) << "\n";
        out << "TOTAL PIECES (" << l.pieces.size() << ")\n";
        for (auto type : kTextOrder) {
            const std::string name = upper(std::string(chess::to_string(type)));
            std::vector<const PieceRecord*> of_type;
            for (const auto& p : l.pieces)
                if (p.type == chess::to_string(type)) of_type.push_back(&p);
            out << name << " PIECES (" << of_type.size() << "):\n";
            for (std::size_t k = 0; k < of_type.size(); ++k) {
                const PieceRecord& p = *of_type[k];
                out << "- " << name << "_" << (k + 1) << ": Board Position: row " << p.row << ", col " << p.col
                    << "; Color: " << rgba_text(p.color) << "; Scale: " << format_real(p.scale) << "\n";
            }
        }
    } else {
        out << "POKER TABLE LEGEND\n";
        if (l.table)
            out << "Table: " << l.table->shape << "; Length: " << format_real(l.table->length)
                << "; Width: " << format_real(l.table->width) << "; Height: " << format_real(l.table->height) << "\n";
        out << "TOTAL CARDS (" << all_cards(l).size() << ")\n";
        out << "COMMUNITY CARDS (POKER):\n";
        out << "Cards: " << card_list(l.community) << "\n";
        out << "PLAYERS (" << l.players.size() << "):\n";
        for (const auto& p : l.players) {
            out << "Player: " << p.player_id << "; Hand Cards: " << card_list(p.hand) << "\n";
            if (!p.chips.empty()) {
                out << "Player: " << p.player_id << "; Chips: " << p.chips.size() << " piles (";
                for (std::size_t i = 0; i < p.chips.size(); ++i) out << (i ? ", " : "") << p.chips[i].n_chips;
                out << ")\n";
            }
        }
        if (l.overlap) {
            out << "OVERLAP ROW (" << l.overlap->axis << ", " << format_real(l.overlap->overlap_fraction) << "):\n";
            out << "Cards: " << card_list(l.overlap->cards) << "\n";
        }
        if (l.grid)
            out << "GRID (" << l.grid->rows << "x" << l.grid->cols << "):\nCard: " << l.grid->card.card << " at row "
                << l.grid->row << ", col " << l.grid->col << "\n";
    }
    if (l.camera)
        out << "CAMERA: distance " << format_real(l.camera->distance) << "; angle " << format_real(l.camera->angle)
            << "; horizontal angle " << format_real(l.camera->horizontal_angle) << "\n";
    if (l.noise) {
        out << "NOISE: blur " << l.noise->blur;
        if (l.noise->f_stop) out << " (f/" << format_real(*l.noise->f_stop) << ")";
        out << "; lighting " << format_real(l.noise->lighting) << "; table texture " << l.noise->table_texture << "\n";
    }
    if (l.seed) out << "SEED: " << *l.seed << "\n";
    return out.str();
}

}  // namespace scenediag::legend
