#pragma once

// Text region extraction: block partition, information/background block
// labelling, 8-connected region assembly and text/non-text classification.

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

#include "cardocr/image.hpp"

namespace cardocr {

enum class BlockLabel : std::uint8_t { background, information };
enum class RegionKind : std::uint8_t { text, non_text };

inline const char* to_string(RegionKind k) { return k == RegionKind::text ? "TR" : "NR"; }

struct RegionConfig {
    int block_h = 16;
    int block_w = 16;
    int variation_threshold = 40;  // max - min within a block
    int min_area_blocks = 4;
    double ar_min = 1.2;
    double ar_max = 40.0;
    double dens_min = 0.03;
    double dens_max = 0.6;
    double cov_min = 0.5;
};

struct BlockCoord {
    int row = 0;
    int col = 0;
    friend bool operator==(const BlockCoord&, const BlockCoord&) = default;
};

/// Disjoint cover of an image by block_h x block_w tiles; edge tiles are truncated.
struct BlockGrid {
    int block_h = 0;
    int block_w = 0;
    int rows = 0;
    int cols = 0;
    int image_w = 0;
    int image_h = 0;
    std::vector<BlockLabel> labels;

    BlockLabel& at(int r, int c) { return labels[static_cast<std::size_t>(r) * cols + c]; }
    BlockLabel at(int r, int c) const { return labels[static_cast<std::size_t>(r) * cols + c]; }

    Rect block_rect(int r, int c) const {
        const int x = c * block_w, y = r * block_h;
        return {x, y, std::min(block_w, image_w - x), std::min(block_h, image_h - y)};
    }
};

struct RegionFeatures {
    int width = 0;
    int height = 0;
    double aspect_ratio = 0;
    double info_pixel_density = 0;
    int area = 0;  // member block count
    double coverage_ratio = 0;
};

struct Region {
    std::vector<BlockCoord> blocks;  // row-major order
    Rect bbox;
    RegionKind kind = RegionKind::non_text;
    RegionFeatures features;
};

struct TextRegion {
    Region region;
    GrayImage crop;
};

inline BlockGrid partition_blocks(int image_w, int image_h, int block_h, int block_w) {
    if (block_h < 4 || block_w < 4) throw Error("partition_blocks: block dimensions must be >= 4");
    if (block_h > image_h || block_w > image_w) throw Error("partition_blocks: block larger than image");
    BlockGrid g;
    g.block_h = block_h;
    g.block_w = block_w;
    g.image_w = image_w;
    g.image_h = image_h;
    g.rows = (image_h + block_h - 1) / block_h;
    g.cols = (image_w + block_w - 1) / block_w;
    g.labels.assign(static_cast<std::size_t>(g.rows) * g.cols, BlockLabel::background);
    return g;
}

inline BlockGrid partition_blocks(const GrayImage& img, int block_h, int block_w) {
    return partition_blocks(img.width(), img.height(), block_h, block_w);
}

/// IB iff (max - min) >= variation_threshold over the window.
inline BlockLabel classify_block(const GrayImage& img, const Rect& window, int variation_threshold) {
    std::uint8_t lo = 255, hi = 0;
    for (int y = window.y; y < window.bottom(); ++y) {
        auto r = img.row(y).subspan(static_cast<std::size_t>(window.x), static_cast<std::size_t>(window.w));
        auto [mn, mx] = std::ranges::minmax_element(r);
        lo = std::min(lo, *mn);
        hi = std::max(hi, *mx);
    }
    return hi - lo >= variation_threshold ? BlockLabel::information : BlockLabel::background;
}

inline void classify_blocks(const GrayImage& img, BlockGrid& grid, int variation_threshold) {
    for (int r = 0; r < grid.rows; ++r)
        for (int c = 0; c < grid.cols; ++c) grid.at(r, c) = classify_block(img, grid.block_rect(r, c), variation_threshold);
}

/// Maximal 8-connected components of information blocks, in order of their first
/// block in row-major scan. Kind and features are left for classification.
inline std::vector<Region> assemble_regions(const BlockGrid& grid) {
    std::vector<int> owner(grid.labels.size(), -1);
    std::vector<Region> regions;
    std::vector<BlockCoord> stack;
    for (int r = 0; r < grid.rows; ++r) {
        for (int c = 0; c < grid.cols; ++c) {
            const std::size_t idx = static_cast<std::size_t>(r) * grid.cols + c;
            if (grid.labels[idx] != BlockLabel::information || owner[idx] >= 0) continue;
            const int id = static_cast<int>(regions.size());
            Region reg;
            owner[idx] = id;
            stack.push_back({r, c});
            while (!stack.empty()) {
                const BlockCoord b = stack.back();
                stack.pop_back();
                reg.blocks.push_back(b);
                reg.bbox = unite(reg.bbox, grid.block_rect(b.row, b.col));
                for (int dr = -1; dr <= 1; ++dr) {
                    for (int dc = -1; dc <= 1; ++dc) {
                        const int nr = b.row + dr, nc = b.col + dc;
                        if (nr < 0 || nc < 0 || nr >= grid.rows || nc >= grid.cols) continue;
                        const std::size_t n = static_cast<std::size_t>(nr) * grid.cols + nc;
                        if (grid.labels[n] == BlockLabel::information && owner[n] < 0) {
                            owner[n] = id;
                            stack.push_back({nr, nc});
                        }
                    }
                }
            }
            std::ranges::sort(reg.blocks, [](const BlockCoord& a, const BlockCoord& b) {
                return a.row != b.row ? a.row < b.row : a.col < b.col;
            });
            regions.push_back(std::move(reg));
        }
    }
    return regions;
}

/// Dark pixels are those below the midpoint of the region's own extremes.
inline RegionFeatures compute_features(const GrayImage& img, const BlockGrid& grid, const Region& region) {
    RegionFeatures f;
    f.width = region.bbox.w;
    f.height = region.bbox.h;
    f.aspect_ratio = region.bbox.h > 0 ? static_cast<double>(region.bbox.w) / region.bbox.h : 0.0;
    f.area = static_cast<int>(region.blocks.size());

    std::uint8_t lo = 255, hi = 0;
    long long pixels = 0;
    for (const BlockCoord& b : region.blocks) {
        const Rect r = grid.block_rect(b.row, b.col);
        pixels += r.area();
        for (int y = r.y; y < r.bottom(); ++y)
            for (int x = r.x; x < r.right(); ++x) {
                lo = std::min(lo, img(x, y));
                hi = std::max(hi, img(x, y));
            }
    }
    // Integer form of v < (lo + hi) / 2.
    long long dark = 0;
    for (const BlockCoord& b : region.blocks) {
        const Rect r = grid.block_rect(b.row, b.col);
        for (int y = r.y; y < r.bottom(); ++y)
            for (int x = r.x; x < r.right(); ++x) dark += 2 * img(x, y) < lo + hi;
    }
    f.info_pixel_density = pixels > 0 ? static_cast<double>(dark) / pixels : 0.0;
    f.coverage_ratio = region.bbox.area() > 0 ? static_cast<double>(pixels) / region.bbox.area() : 0.0;
    return f;
}

inline RegionKind classify_region(const RegionFeatures& f, const RegionConfig& cfg) {
    const bool text = f.area >= cfg.min_area_blocks && f.aspect_ratio >= cfg.ar_min && f.aspect_ratio <= cfg.ar_max &&
                      f.info_pixel_density >= cfg.dens_min && f.info_pixel_density <= cfg.dens_max &&
                      f.coverage_ratio >= cfg.cov_min;
    return text ? RegionKind::text : RegionKind::non_text;
}

/// All regions (text and non-text) with features and kinds, ordered by bbox origin.
inline std::vector<Region> find_regions(const GrayImage& img, const RegionConfig& cfg) {
    BlockGrid grid = partition_blocks(img, cfg.block_h, cfg.block_w);
    classify_blocks(img, grid, cfg.variation_threshold);
    std::vector<Region> regions = assemble_regions(grid);
    for (Region& r : regions) {
        r.features = compute_features(img, grid, r);
        r.kind = classify_region(r.features, cfg);
    }
    std::ranges::stable_sort(regions, [](const Region& a, const Region& b) {
        return a.bbox.y != b.bbox.y ? a.bbox.y < b.bbox.y : a.bbox.x < b.bbox.x;
    });
    return regions;
}

inline std::vector<TextRegion> extract_text_regions(const GrayImage& img, const RegionConfig& cfg) {
    std::vector<TextRegion> out;
    if (img.width() < cfg.block_w || img.height() < cfg.block_h) return out;
    for (Region& r : find_regions(img, cfg)) {
        if (r.kind != RegionKind::text) continue;
        GrayImage c = crop(img, r.bbox);
        out.push_back({std::move(r), std::move(c)});
    }
    return out;
}

/// One line: "x y w h TR|NR area aspect density coverage".
inline std::string format_region_line(const Rect& bbox, RegionKind kind, const RegionFeatures& f) {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%d %d %d %d %s %d %.4f %.4f %.4f", bbox.x, bbox.y, bbox.w, bbox.h, to_string(kind),
                  f.area, f.aspect_ratio, f.info_pixel_density, f.coverage_ratio);
    return buf;
}

inline void write_region_dump(std::ostream& os, const std::vector<Region>& regions) {
    for (const Region& r : regions) os << format_region_line(r.bbox, r.kind, r.features) << '\n';
}

}  // namespace cardocr
