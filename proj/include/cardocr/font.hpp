#pragma once

// Bundled bitmap font covering the 73-symbol alphabet, plus a text rasteriser
// used by the template builder and the synthetic card generator.
//
// Cell metrics (font units): 12 rows; capitals and ascenders occupy rows 0-8,
// x-height rows 3-8, descenders reach row 11. Glyph bitmaps are tight
// horizontally and contain no all-blank column.

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cardocr/image.hpp"

namespace cardocr {

/// The 73 classes, in table order (specials, digits, capitals, smalls).
inline constexpr std::string_view alphabet = "#&()+,-./0123456789:@ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz";
static_assert(alphabet.size() == 73);

inline std::optional<int> class_index(char c) {
    const auto pos = alphabet.find(c);
    if (pos == std::string_view::npos) return std::nullopt;
    return static_cast<int>(pos);
}

struct FontGlyph {
    char ch;
    int top;                // first row in the 12-row cell
    std::string_view rows;  // rows separated by ' ', '#' = ink
};

namespace font {

inline constexpr int cell_rows = 12;
inline constexpr int baseline_row = 8;  // last row of capitals
inline constexpr int letter_spacing = 1;
inline constexpr int space_advance = 2;  // added to letter_spacing between words
inline constexpr int line_gap_px = 2;  // blank rows between one cell and the next, at any scale

// clang-format off
inline constexpr std::array<FontGlyph, 73> glyphs{{
    {'#', 1, "..#.#.. ..#.#.. ####### ..#.#.. ..#.#.. ####### ..#.#.. ..#.#.."},
    {'&', 0, ".##.... #..#... #..#... .##.... .#.#..# #...##. #...#.. #..#.#. .##...#"},
    {'(', 0, "..# .#. .#. #.. #.. #.. #.. #.. .#. .#. ..#"},
    {')', 0, "#.. .#. .#. ..# ..# ..# ..# ..# .#. .#. #.."},
    {'+', 3, "..#.. ..#.. ##### ..#.. ..#.."},
    {',', 7, "## ## .# #."},
    {'-', 5, "####"},
    {'.', 5, ".##. #### #### .##."},
    {'/', 0, "....# ....# ...#. ...#. ..#.. .#... .#... #.... #...."},
    {'0', 0, ".####. #....# #...## #..#.# #.#..# ##...# #....# #....# .####."},
    {'1', 0, "..#.. .##.. #.#.. ..#.. ..#.. ..#.. ..#.. ..#.. #####"},
    {'2', 0, ".####. #....# .....# .....# ....#. ...#.. ..#... .#.... ######"},
    {'3', 0, ".####. #....# .....# .....# ..###. .....# .....# #....# .####."},
    {'4', 0, "....#. ...##. ..#.#. .#..#. #...#. ###### ....#. ....#. ....#."},
    {'5', 0, "###### #..... #..... #####. .....# .....# .....# #....# .####."},
    {'6', 0, ".####. #....# #..... #..... #####. #....# #....# #....# .####."},
    {'7', 0, "###### .....# ....#. ....#. ...#.. ...#.. ..#... ..#... ..#..."},
    {'8', 0, ".####. #....# #....# #....# .####. #....# #....# #....# .####."},
    {'9', 0, ".####. #....# #....# #....# .##### .....# .....# #....# .####."},
    {':', 3, "## ## .. .. ## ##"},
    {'@', 0, ".#####. #.....# #..#### #.#...# #.#...# #.#..## #..##.# #...... .######"},
    {'A', 0, "..##.. .#..#. #....# #....# ###### #....# #....# #....# #....#"},
    {'B', 0, "#####. #....# #....# #....# #####. #....# #....# #....# #####."},
    {'C', 0, ".####. #....# #..... #..... #..... #..... #..... #....# .####."},
    {'D', 0, "####.. #...#. #....# #....# #....# #....# #....# #...#. ####.."},
    {'E', 0, "###### #..... #..... #..... #####. #..... #..... #..... ######"},
    {'F', 0, "###### #..... #..... #..... #####. #..... #..... #..... #....."},
    {'G', 0, ".####. #....# #..... #..... #..### #....# #....# #....# .####."},
    {'H', 0, "#....# #....# #....# #....# ###### #....# #....# #....# #....#"},
    {'I', 0, "##### ..#.. ..#.. ..#.. ..#.. ..#.. ..#.. ..#.. #####"},
    {'J', 0, "..#### ....#. ....#. ....#. ....#. ....#. #...#. #...#. .###.."},
    {'K', 0, "#....# #...#. #..#.. #.#... ##.... #.#... #..#.. #...#. #....#"},
    {'L', 0, "#..... #..... #..... #..... #..... #..... #..... #..... ######"},
    {'M', 0, "#.....# ##...## #.#.#.# #..#..# #.....# #.....# #.....# #.....# #.....#"},
    {'N', 0, "#....# ##...# #.#..# #.#..# #..#.# #..#.# #...## #....# #....#"},
    {'O', 0, ".####. #....# #....# #....# #....# #....# #....# #....# .####."},
    {'P', 0, "#####. #....# #....# #....# #####. #..... #..... #..... #....."},
    {'Q', 0, ".####. #....# #....# #....# #....# #....# #..#.# #...#. .###.#"},
    {'R', 0, "#####. #....# #....# #....# #####. #.#... #..#.. #...#. #....#"},
    {'S', 0, ".####. #....# #..... #..... .####. .....# .....# #....# .####."},
    {'T', 0, "####### ...#... ...#... ...#... ...#... ...#... ...#... ...#... ...#..."},
    {'U', 0, "#....# #....# #....# #....# #....# #....# #....# #....# .####."},
    {'V', 0, "#.....# #.....# #.....# .#...#. .#...#. .#...#. ..#.#.. ..#.#.. ...#..."},
    {'W', 0, "#.....# #.....# #.....# #.....# #..#..# #..#..# #.#.#.# ##...## #.....#"},
    {'X', 0, "#....# #....# .#..#. .#..#. ..##.. .#..#. .#..#. #....# #....#"},
    {'Y', 0, "#.....# .#...#. ..#.#.. ...#... ...#... ...#... ...#... ...#... ...#..."},
    {'Z', 0, "###### .....# ....#. ....#. ...#.. ..#... .#.... #..... ######"},
    {'a', 3, ".####. .....# .##### #....# #...## .###.#"},
    {'b', 0, "#..... #..... #..... #####. #....# #....# #....# #....# #####."},
    {'c', 3, ".#### #.... #.... #.... #.... .####"},
    {'d', 0, ".....# .....# .....# .##### #....# #....# #....# #....# .#####"},
    {'e', 3, ".####. #....# ###### #..... #..... .####."},
    {'f', 0, "..### .#... .#... ####. .#... .#... .#... .#... .#..."},
    {'g', 3, ".##### #....# #....# #....# .##### .....# .....# #....# .####."},
    {'h', 0, "#..... #..... #..... #####. #....# #....# #....# #....# #....#"},
    {'i', 1, ".#. ... ##. .#. .#. .#. .#. ###"},
    {'j', 1, "...# .... ..## ...# ...# ...# ...# ...# ...# #..# .##."},
    {'k', 0, "#.... #.... #.... #..#. #.#.. ##... #.#.. #..#. #...#"},
    {'l', 0, "## .# .# .# .# .# .# .# .#"},
    {'m', 3, "######. #..#..# #..#..# #..#..# #..#..# #..#..#"},
    {'n', 3, "#####. #....# #....# #....# #....# #....#"},
    {'o', 3, ".####. #....# #....# #....# #....# .####."},
    {'p', 3, "#####. #....# #....# #....# #....# #####. #..... #..... #....."},
    {'q', 3, ".##### #....# #....# #....# #....# .##### .....# .....# .....#"},
    {'r', 3, "#.### ##... #.... #.... #.... #...."},
    {'s', 3, ".#### #.... .###. ....# ....# ####."},
    {'t', 1, ".#... .#... ####. .#... .#... .#... .#... ..###"},
    {'u', 3, "#....# #....# #....# #....# #...## .###.#"},
    {'v', 3, "#...# #...# #...# .#.#. .#.#. ..#.."},
    {'w', 3, "#.....# #.....# #..#..# #..#..# #.#.#.# .#...#."},
    {'x', 3, "#...# .#.#. ..#.. ..#.. .#.#. #...#"},
    {'y', 3, "#....# #....# #....# #....# #...## .###.# .....# #....# .####."},
    {'z', 3, "##### ...#. ..#.. .#... #.... #####"},
}};
// clang-format on

}  // namespace font

/// A glyph bitmap in font units (Ink per cell).
struct GlyphBitmap {
    char ch = 0;
    int top = 0;
    BinaryImage bits;
};

inline GlyphBitmap decode_glyph(const FontGlyph& g) {
    std::vector<std::string_view> rows;
    std::size_t start = 0;
    while (start <= g.rows.size()) {
        const std::size_t end = g.rows.find(' ', start);
        rows.push_back(g.rows.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    const int w = static_cast<int>(rows.front().size());
    GlyphBitmap out{g.ch, g.top, BinaryImage(w, static_cast<int>(rows.size()))};
    for (int y = 0; y < static_cast<int>(rows.size()); ++y) {
        if (static_cast<int>(rows[y].size()) != w) throw Error(std::string("font: ragged glyph '") + g.ch + "'");
        for (int x = 0; x < w; ++x) out.bits(x, y) = rows[y][x] == '#' ? Ink::foreground : Ink::background;
    }
    return out;
}

inline const GlyphBitmap& font_glyph(char c) {
    static const std::vector<GlyphBitmap> table = [] {
        std::vector<GlyphBitmap> t;
        for (const auto& g : font::glyphs) t.push_back(decode_glyph(g));
        return t;
    }();
    const auto idx = class_index(c);
    if (!idx) throw Error(std::string("font: no glyph for '") + c + "'");
    return table[static_cast<std::size_t>(*idx)];
}

/// Nearest-neighbour magnification by an integer factor.
inline BinaryImage magnify(const BinaryImage& bits, int scale) {
    BinaryImage out(bits.width() * scale, bits.height() * scale);
    for (int y = 0; y < out.height(); ++y)
        for (int x = 0; x < out.width(); ++x) out(x, y) = bits(x / scale, y / scale);
    return out;
}

struct PlacedGlyph {
    char ch = 0;
    Rect box;  // ink bounds in the rendered image
    int line = 0;
    int word = 0;
    int index_in_word = 0;
};

struct RenderedText {
    BinaryImage ink;
    std::vector<PlacedGlyph> glyphs;
    std::vector<Rect> line_boxes;  // ink bounds per line
};

/// Pixel width of one line of text at `scale`.
inline int text_width(std::string_view line, int scale) {
    int w = 0;
    bool first = true, pending_space = false;
    for (char c : line) {
        if (c == ' ') {
            pending_space = !first;
            continue;
        }
        if (pending_space) w += font::space_advance * scale;
        if (!first) w += font::letter_spacing * scale;
        w += font_glyph(c).bits.width() * scale;
        first = false;
        pending_space = false;
    }
    return w;
}

/// Rasterises text ('\n' separates lines, ' ' separates words) at an integer scale.
/// Consecutive spaces collapse into one word break.
inline RenderedText render_text(std::string_view text, int scale) {
    if (scale < 1) throw Error("render_text: scale must be >= 1");
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (true) {
        const std::size_t end = text.find('\n', start);
        lines.push_back(text.substr(start, end == std::string_view::npos ? std::string_view::npos : end - start));
        if (end == std::string_view::npos) break;
        start = end + 1;
    }
    int width = 1;
    for (auto l : lines) width = std::max(width, text_width(l, scale));
    const int pitch = font::cell_rows * scale + font::line_gap_px;
    const int height = static_cast<int>(lines.size()) * pitch - font::line_gap_px;

    RenderedText out{BinaryImage(width, height), {}, {}};
    for (int li = 0; li < static_cast<int>(lines.size()); ++li) {
        int pen = 0;
        int word = 0, idx = 0;
        bool pending_space = false, first = true;
        Rect line_box;
        for (char c : lines[li]) {
            if (c == ' ') {
                if (!first && !pending_space) pen += font::space_advance * scale;
                pending_space = !first;
                continue;
            }
            if (pending_space) {
                ++word;
                idx = 0;
                pending_space = false;
            }
            if (!first) pen += font::letter_spacing * scale;
            const GlyphBitmap& g = font_glyph(c);
            const int oy = li * pitch + g.top * scale;
            for (int y = 0; y < g.bits.height() * scale; ++y)
                for (int x = 0; x < g.bits.width() * scale; ++x)
                    if (g.bits(x / scale, y / scale) == Ink::foreground) out.ink(pen + x, oy + y) = Ink::foreground;
            const Rect box{pen, oy, g.bits.width() * scale, g.bits.height() * scale};
            out.glyphs.push_back({c, box, li, word, idx});
            line_box = unite(line_box, box);
            pen += g.bits.width() * scale;
            ++idx;
            first = false;
        }
        out.line_boxes.push_back(line_box);
    }
    return out;
}

}  // namespace cardocr
