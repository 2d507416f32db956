#pragma once

// 48x48 binary pattern normalisation and nearest-template classification by
// cell-wise absolute difference.

#include <algorithm>
#include <bitset>
#include <cstdint>
#include <map>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "cardocr/font.hpp"
#include "cardocr/image.hpp"

namespace cardocr {

class RecognitionError : public Error {
public:
    using Error::Error;
};

inline constexpr int pattern_side = 48;
inline constexpr int pattern_cells = pattern_side * pattern_side;

/// 48x48 matrix over {0, 1}; 1 is foreground.
class Pattern {
public:
    bool at(int x, int y) const { return bits_[static_cast<std::size_t>(y * pattern_side + x)]; }
    void set(int x, int y, bool v = true) { bits_[static_cast<std::size_t>(y * pattern_side + x)] = v; }
    std::size_t ink() const { return bits_.count(); }

    Pattern complement() const {
        Pattern p;
        p.bits_ = ~bits_;
        return p;
    }

    BinaryImage to_image() const {
        BinaryImage img(pattern_side, pattern_side);
        for (int y = 0; y < pattern_side; ++y)
            for (int x = 0; x < pattern_side; ++x) img(x, y) = at(x, y) ? Ink::foreground : Ink::background;
        return img;
    }

    friend int dissimilarity(const Pattern& a, const Pattern& b) { return static_cast<int>((a.bits_ ^ b.bits_).count()); }
    friend bool operator==(const Pattern&, const Pattern&) = default;

private:
    std::bitset<pattern_cells> bits_;
};

/// Exact 48x48 binary image to pattern (no resampling).
inline Pattern pattern_from_image(const BinaryImage& img) {
    if (img.width() != pattern_side || img.height() != pattern_side) throw RecognitionError("pattern: image is not 48x48");
    Pattern p;
    for (int y = 0; y < pattern_side; ++y)
        for (int x = 0; x < pattern_side; ++x) p.set(x, y, img(x, y) == Ink::foreground);
    return p;
}

/// Crops to the tight foreground box and resamples to 48x48 by nearest
/// neighbour (pixel-centre sampling, aspect ratio not preserved).
inline Pattern normalize_glyph(const BinaryImage& glyph) {
    const Rect box = foreground_bounds(glyph);
    if (box.empty()) throw RecognitionError("normalize_glyph: glyph has no foreground");
    Pattern p;
    for (int y = 0; y < pattern_side; ++y) {
        const int sy = box.y + (2 * y + 1) * box.h / (2 * pattern_side);
        for (int x = 0; x < pattern_side; ++x) {
            const int sx = box.x + (2 * x + 1) * box.w / (2 * pattern_side);
            p.set(x, y, glyph(sx, sy) == Ink::foreground);
        }
    }
    return p;
}

enum class SchemeMode { full, merged };

/// Collapses the visually symmetric groups onto one representative.
constexpr char merge_label(char c) {
    switch (c) {
        case 'c': return 'C';
        case '0': case 'o': return 'O';
        case 's': return 'S';
        case 'u': return 'U';
        case 'v': return 'V';
        case 'w': return 'W';
        case 'z': return 'Z';
        case 'l': case '1': return 'I';
        default: return c;
    }
}

struct ClassScheme {
    SchemeMode mode = SchemeMode::merged;

    char map(char c) const { return mode == SchemeMode::merged ? merge_label(c) : c; }

    /// Distinct labels the scheme can emit over the 73-symbol alphabet.
    int class_count() const {
        std::string seen;
        for (char c : alphabet)
            if (seen.find(map(c)) == std::string::npos) seen.push_back(map(c));
        return static_cast<int>(seen.size());
    }
};

struct Template {
    Pattern pattern;
    char label = 0;
    std::string source_id;
};

struct Classification {
    char label = 0;  // scheme-mapped
    int score = 0;
    std::size_t template_index = 0;
    std::optional<char> runner_up;  // best template of a different mapped label
    int runner_up_score = 0;
};

/// Minimum-dissimilarity template; ties go to the earliest template in the store.
inline Classification classify(const Pattern& p, const std::vector<Template>& store, const ClassScheme& scheme) {
    if (store.empty()) throw RecognitionError("classify: empty template store");
    Classification c;
    c.score = pattern_cells + 1;
    std::vector<int> scores(store.size());
    for (std::size_t i = 0; i < store.size(); ++i) {
        scores[i] = dissimilarity(p, store[i].pattern);
        if (scores[i] < c.score) {
            c.score = scores[i];
            c.template_index = i;
        }
    }
    c.label = scheme.map(store[c.template_index].label);
    for (std::size_t i = 0; i < store.size(); ++i) {
        const char l = scheme.map(store[i].label);
        if (l != c.label && (!c.runner_up || scores[i] < c.runner_up_score)) {
            c.runner_up = l;
            c.runner_up_score = scores[i];
        }
    }
    return c;
}

struct LabeledGlyph {
    char label = 0;
    BinaryImage image;
    std::string source_id;
};

inline constexpr int templates_per_class = 10;

/// Per class, keeps the `per_class` samples with the smallest summed
/// dissimilarity to the other samples of that class. Output is ordered by class
/// (alphabet order) and then by input order.
inline std::vector<Template> build_store(const std::vector<LabeledGlyph>& samples, int per_class = templates_per_class) {
    std::map<int, std::vector<std::size_t>> by_class;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto idx = class_index(samples[i].label);
        if (!idx) throw RecognitionError(std::string("build_store: label outside the alphabet: ") + samples[i].label);
        by_class[*idx].push_back(i);
    }
    std::vector<Template> store;
    for (const auto& [cls, members] : by_class) {
        if (static_cast<int>(members.size()) < per_class)
            throw RecognitionError(std::string("build_store: class '") + alphabet[static_cast<std::size_t>(cls)] +
                                   "' has " + std::to_string(members.size()) + " samples, needs " +
                                   std::to_string(per_class));
        std::vector<Pattern> pats;
        for (std::size_t i : members) pats.push_back(normalize_glyph(samples[i].image));
        std::vector<long long> cost(pats.size(), 0);
        for (std::size_t a = 0; a < pats.size(); ++a)
            for (std::size_t b = a + 1; b < pats.size(); ++b) {
                const int d = dissimilarity(pats[a], pats[b]);
                cost[a] += d;
                cost[b] += d;
            }
        std::vector<std::size_t> order(pats.size());
        std::iota(order.begin(), order.end(), 0);
        std::ranges::stable_sort(order, [&](std::size_t a, std::size_t b) { return cost[a] < cost[b]; });
        order.resize(static_cast<std::size_t>(per_class));
        std::ranges::sort(order);
        for (std::size_t k : order) {
            const LabeledGlyph& s = samples[members[k]];
            store.push_back({pats[k], s.label, s.source_id});
        }
    }
    return store;
}

struct RecognizedGlyph {
    char label = 0;
    int word = 0;
};

using RecognizedLine = std::vector<RecognizedGlyph>;
using RecognizedRegion = std::vector<RecognizedLine>;

/// Words joined by one space, lines by newline, regions by a blank line.
inline std::string transcribe(const std::vector<RecognizedRegion>& regions) {
    std::string out;
    for (std::size_t r = 0; r < regions.size(); ++r) {
        if (r > 0) out += "\n\n";
        for (std::size_t l = 0; l < regions[r].size(); ++l) {
            if (l > 0) out += '\n';
            const RecognizedLine& line = regions[r][l];
            for (std::size_t g = 0; g < line.size(); ++g) {
                if (g > 0 && line[g].word != line[g - 1].word) out += ' ';
                out += line[g].label;
            }
        }
    }
    return out;
}

}  // namespace cardocr
