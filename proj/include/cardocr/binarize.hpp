#pragma once

// Bernsen-style midpoint thresholding followed by a single 8-neighbour
// majority promotion pass.

#include <algorithm>
#include <deque>
#include <span>
#include <vector>

#include "cardocr/image.hpp"

namespace cardocr {

struct BinarizeConfig {
    enum class Window { region_global, local };

    Window window = Window::region_global;
    int local_size = 31;  // odd, >= 3; used in local mode
    bool neighbor_promotion = true;

    void validate() const {
        if (window == Window::local && (local_size < 3 || local_size % 2 == 0))
            throw Error("binarize: local window must be odd and >= 3");
    }
};

namespace detail {

// Running min and max over [i - r, i + r] clipped to the sequence.
template <class T>
void sliding_extrema(std::span<const T> in, std::span<T> lo, std::span<T> hi, int r) {
    const int n = static_cast<int>(in.size());
    std::deque<int> qmin, qmax;
    int next = 0;
    for (int i = 0; i < n; ++i) {
        const int reach = std::min(n - 1, i + r);
        for (; next <= reach; ++next) {
            while (!qmin.empty() && in[qmin.back()] >= in[next]) qmin.pop_back();
            qmin.push_back(next);
            while (!qmax.empty() && in[qmax.back()] <= in[next]) qmax.pop_back();
            qmax.push_back(next);
        }
        while (qmin.front() < i - r) qmin.pop_front();
        while (qmax.front() < i - r) qmax.pop_front();
        lo[i] = in[qmin.front()];
        hi[i] = in[qmax.front()];
    }
}

}  // namespace detail

/// Square-window local minimum and maximum images (window side = 2r + 1).
inline std::pair<GrayImage, GrayImage> local_extrema(const GrayImage& img, int r) {
    const int w = img.width(), h = img.height();
    GrayImage rmin(w, h), rmax(w, h);
    for (int y = 0; y < h; ++y) detail::sliding_extrema<std::uint8_t>(img.row(y), rmin.row(y), rmax.row(y), r);

    GrayImage lo(w, h), hi(w, h);
    std::vector<std::uint8_t> col_in(static_cast<std::size_t>(h)), col_lo(col_in.size()), col_hi(col_in.size()), scratch(col_in.size());
    for (int x = 0; x < w; ++x) {
        for (int y = 0; y < h; ++y) col_in[y] = rmin(x, y);
        detail::sliding_extrema<std::uint8_t>(col_in, col_lo, scratch, r);
        for (int y = 0; y < h; ++y) col_in[y] = rmax(x, y);
        detail::sliding_extrema<std::uint8_t>(col_in, scratch, col_hi, r);
        for (int y = 0; y < h; ++y) {
            lo(x, y) = col_lo[y];
            hi(x, y) = col_hi[y];
        }
    }
    return {std::move(lo), std::move(hi)};
}

/// Pass 1: foreground iff v < (G_min + G_max) / 2.
inline BinaryImage threshold_midpoint(const GrayImage& region, const BinarizeConfig& cfg) {
    cfg.validate();
    BinaryImage out(region.width(), region.height(), Ink::background);
    if (region.empty()) return out;
    if (cfg.window == BinarizeConfig::Window::region_global) {
        auto [mn, mx] = std::ranges::minmax_element(region.pixels());
        const int sum = *mn + *mx;
        std::ranges::transform(region.pixels(), out.pixels().begin(),
                               [sum](std::uint8_t v) { return 2 * v < sum ? Ink::foreground : Ink::background; });
        return out;
    }
    const auto [lo, hi] = local_extrema(region, cfg.local_size / 2);
    for (std::size_t i = 0; i < region.size(); ++i)
        out.pixels()[i] = 2 * region.pixels()[i] < lo.pixels()[i] + hi.pixels()[i] ? Ink::foreground : Ink::background;
    return out;
}

/// Pass 2: a background pixel with more than 4 foreground 8-neighbours (read
/// from the unmodified input labels) becomes foreground. Border pixels count
/// only neighbours that exist.
inline BinaryImage promote_neighbors(const BinaryImage& pass1) {
    BinaryImage out = pass1;
    const int w = pass1.width(), h = pass1.height();
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            if (pass1(x, y) == Ink::foreground) continue;
            int n = 0;
            for (int dy = -1; dy <= 1; ++dy)
                for (int dx = -1; dx <= 1; ++dx)
                    if ((dx || dy) && pass1.contains(x + dx, y + dy) && pass1(x + dx, y + dy) == Ink::foreground) ++n;
            if (n > 4) out(x, y) = Ink::foreground;
        }
    }
    return out;
}

/// A constant region (G_min == G_max) comes back all background.
inline BinaryImage binarize_region(const GrayImage& region, const BinarizeConfig& cfg = {}) {
    BinaryImage b = threshold_midpoint(region, cfg);
    return cfg.neighbor_promotion ? promote_neighbors(b) : b;
}

inline double foreground_ratio(const BinaryImage& b) {
    if (b.empty()) return 0.0;
    return static_cast<double>(count_if_equal(b, Ink::foreground)) / static_cast<double>(b.size());
}

}  // namespace cardocr
