#pragma once

// Line segmentation by horizontal projection with deliberate over-segmentation
// and false-separator rejection; word and character segmentation by vertical
// projection.

#include <algorithm>
#include <ostream>
#include <string>
#include <vector>

#include "cardocr/image.hpp"

namespace cardocr {

class SegmentationError : public Error {
public:
    enum class Kind { empty_region, empty_line };

    SegmentationError(Kind kind, const std::string& what) : Error("segmentation: " + what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

struct SegmentationConfig {
    int line_threshold = 0;  // rows with count <= threshold are separator candidates
    double r_min = 0.5;      // minimum band height relative to the median band
    double word_gap_factor = 2.0;
};

/// Inclusive run of rows (or columns).
struct Run {
    int first = 0;
    int last = 0;

    int length() const { return last - first + 1; }
    double center() const { return (first + last) / 2.0; }
    friend bool operator==(const Run&, const Run&) = default;
};

/// Inclusive row interval of a text line.
struct LineBand {
    int top = 0;
    int bottom = 0;

    int height() const { return bottom - top + 1; }
    friend bool operator==(const LineBand&, const LineBand&) = default;
};

struct LineSegment {
    LineBand band;
    BinaryImage image;  // full region width, band rows
};

struct GlyphBox {
    Rect rect;  // within the line image
    BinaryImage pixels;
    int word_index = 0;
    int char_index = 0;
};

inline std::vector<int> horizontal_histogram(const BinaryImage& region) {
    std::vector<int> f(static_cast<std::size_t>(region.height()), 0);
    for (int y = 0; y < region.height(); ++y)
        f[y] = static_cast<int>(std::ranges::count(region.row(y), Ink::foreground));
    return f;
}

inline std::vector<int> vertical_histogram(const BinaryImage& img) {
    std::vector<int> g(static_cast<std::size_t>(img.width()), 0);
    for (int y = 0; y < img.height(); ++y) {
        auto r = img.row(y);
        for (int x = 0; x < img.width(); ++x) g[x] += r[x] == Ink::foreground;
    }
    return g;
}

namespace detail {

template <class Pred>
std::vector<Run> runs_where(const std::vector<int>& v, Pred pred) {
    std::vector<Run> out;
    const int n = static_cast<int>(v.size());
    for (int i = 0; i < n;) {
        if (!pred(v[i])) {
            ++i;
            continue;
        }
        int j = i;
        while (j + 1 < n && pred(v[j + 1])) ++j;
        out.push_back({i, j});
        i = j + 1;
    }
    return out;
}

inline double median(std::vector<int> v) {
    std::ranges::sort(v);
    const std::size_t n = v.size();
    return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

}  // namespace detail

/// Maximal runs of rows with f_i <= t, including leading and trailing runs.
inline std::vector<Run> find_separators(const std::vector<int>& hist, int t) {
    return detail::runs_where(hist, [t](int f) { return f <= t; });
}

/// Bands between separators; any band shorter than r_min times the median band
/// height is merged into the neighbour across the narrower separator, repeated
/// until none remain.
inline std::vector<LineBand> reject_false_separators(const std::vector<Run>& seps, int rows, double r_min) {
    std::vector<LineBand> bands;
    int cursor = 0;
    for (const Run& s : seps) {
        if (s.first > cursor) bands.push_back({cursor, s.first - 1});
        cursor = s.last + 1;
    }
    if (cursor < rows) bands.push_back({cursor, rows - 1});
    if (bands.empty()) throw SegmentationError(SegmentationError::Kind::empty_region, "no text line found");

    while (bands.size() > 1) {
        std::vector<int> heights;
        for (const auto& b : bands) heights.push_back(b.height());
        const double m = detail::median(heights);

        std::size_t victim = bands.size();
        for (std::size_t i = 0; i < bands.size(); ++i)
            if (bands[i].height() < r_min * m && (victim == bands.size() || bands[i].height() < bands[victim].height()))
                victim = i;
        if (victim == bands.size()) break;

        const int gap_up = victim > 0 ? bands[victim].top - bands[victim - 1].bottom - 1 : -1;
        const int gap_down = victim + 1 < bands.size() ? bands[victim + 1].top - bands[victim].bottom - 1 : -1;
        const bool merge_up = gap_down < 0 || (gap_up >= 0 && gap_up <= gap_down);
        const std::size_t keep = merge_up ? victim - 1 : victim + 1;
        bands[keep].top = std::min(bands[keep].top, bands[victim].top);
        bands[keep].bottom = std::max(bands[keep].bottom, bands[victim].bottom);
        bands.erase(bands.begin() + static_cast<std::ptrdiff_t>(victim));
    }
    return bands;
}

inline std::vector<LineBand> reject_false_separators(const std::vector<Run>& seps, const std::vector<int>& hist,
                                                     double r_min) {
    return reject_false_separators(seps, static_cast<int>(hist.size()), r_min);
}

inline std::vector<LineSegment> segment_lines(const BinaryImage& region, const SegmentationConfig& cfg = {}) {
    const std::vector<int> hist = horizontal_histogram(region);
    const auto bands = reject_false_separators(find_separators(hist, cfg.line_threshold), hist, cfg.r_min);
    std::vector<LineSegment> out;
    out.reserve(bands.size());
    for (const LineBand& b : bands)
        out.push_back({b, crop(region, Rect{0, b.top, region.width(), b.height()})});
    return out;
}

/// Glyphs are column runs between all-background columns, tightened vertically.
/// A gap at least word_gap_factor times the median gap starts a new word.
inline std::vector<GlyphBox> segment_characters(const BinaryImage& line, const SegmentationConfig& cfg = {}) {
    const std::vector<int> g = vertical_histogram(line);
    const std::vector<Run> blobs = detail::runs_where(g, [](int v) { return v > 0; });
    if (blobs.empty()) throw SegmentationError(SegmentationError::Kind::empty_line, "line has no foreground");

    std::vector<int> gaps;
    for (std::size_t i = 1; i < blobs.size(); ++i) gaps.push_back(blobs[i].first - blobs[i - 1].last - 1);
    const double median_gap = gaps.empty() ? 0.0 : detail::median(gaps);

    std::vector<GlyphBox> out;
    int word = 0, ch = 0;
    for (std::size_t i = 0; i < blobs.size(); ++i) {
        if (i > 0) {
            if (gaps[i - 1] >= cfg.word_gap_factor * median_gap && gaps[i - 1] > median_gap) {
                ++word;
                ch = 0;
            } else {
                ++ch;
            }
        }
        const Run& b = blobs[i];
        int top = line.height(), bottom = -1;
        for (int y = 0; y < line.height(); ++y) {
            auto r = line.row(y).subspan(static_cast<std::size_t>(b.first), static_cast<std::size_t>(b.length()));
            if (std::ranges::find(r, Ink::foreground) != r.end()) {
                top = std::min(top, y);
                bottom = y;
            }
        }
        const Rect rect{b.first, top, b.length(), bottom - top + 1};
        out.push_back({rect, crop(line, rect), word, ch});
    }
    return out;
}

inline void write_band_dump(std::ostream& os, const std::vector<LineSegment>& lines) {
    for (const auto& l : lines) os << "band " << l.band.top << ' ' << l.band.bottom << '\n';
}

inline void write_glyph_dump(std::ostream& os, const std::vector<GlyphBox>& glyphs) {
    for (const auto& g : glyphs)
        os << "glyph " << g.rect.x << ' ' << g.rect.y << ' ' << g.rect.w << ' ' << g.rect.h << ' ' << g.word_index << ' '
           << g.char_index << '\n';
}

}  // namespace cardocr
