#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace cardocr {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct Rgb {
    std::uint8_t r = 0;
    std::uint8_t g = 0;
    std::uint8_t b = 0;

    friend bool operator==(const Rgb&, const Rgb&) = default;
};

/// Label of a binarized pixel.
enum class Ink : std::uint8_t { background = 0, foreground = 1 };

/// Axis-aligned rectangle. x is the column offset, y the row offset, origin top-left.
struct Rect {
    int x = 0;
    int y = 0;
    int w = 0;
    int h = 0;

    int right() const { return x + w; }   // exclusive
    int bottom() const { return y + h; }  // exclusive
    long long area() const { return static_cast<long long>(w) * h; }
    bool empty() const { return w <= 0 || h <= 0; }

    friend bool operator==(const Rect&, const Rect&) = default;
};

inline Rect intersect(const Rect& a, const Rect& b) {
    const int x0 = std::max(a.x, b.x);
    const int y0 = std::max(a.y, b.y);
    const int x1 = std::min(a.right(), b.right());
    const int y1 = std::min(a.bottom(), b.bottom());
    if (x1 <= x0 || y1 <= y0) return {x0, y0, 0, 0};
    return {x0, y0, x1 - x0, y1 - y0};
}

/// Smallest rectangle containing both (empty operands are ignored).
inline Rect unite(const Rect& a, const Rect& b) {
    if (a.empty()) return b;
    if (b.empty()) return a;
    const int x0 = std::min(a.x, b.x);
    const int y0 = std::min(a.y, b.y);
    const int x1 = std::max(a.right(), b.right());
    const int y1 = std::max(a.bottom(), b.bottom());
    return {x0, y0, x1 - x0, y1 - y0};
}

/// Row-major raster. Invariant: pixels().size() == width() * height().
template <class Pixel>
class Image {
public:
    using value_type = Pixel;

    Image() = default;

    Image(int width, int height, Pixel fill = Pixel{})
        : width_(width), height_(height) {
        if (width < 0 || height < 0) throw Error("image: negative dimensions");
        pixels_.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
    }

    Image(int width, int height, std::vector<Pixel> pixels)
        : width_(width), height_(height), pixels_(std::move(pixels)) {
        if (width < 0 || height < 0 ||
            pixels_.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height))
            throw Error("image: pixel count does not match dimensions");
    }

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return pixels_.size(); }
    bool empty() const { return pixels_.empty(); }
    Rect bounds() const { return {0, 0, width_, height_}; }

    bool contains(int x, int y) const { return x >= 0 && y >= 0 && x < width_ && y < height_; }

    Pixel& operator()(int x, int y) { return pixels_[index(x, y)]; }
    const Pixel& operator()(int x, int y) const { return pixels_[index(x, y)]; }

    std::span<Pixel> row(int y) {
        return {pixels_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)};
    }
    std::span<const Pixel> row(int y) const {
        return {pixels_.data() + static_cast<std::size_t>(y) * width_, static_cast<std::size_t>(width_)};
    }

    std::span<Pixel> pixels() { return pixels_; }
    std::span<const Pixel> pixels() const { return pixels_; }

    friend bool operator==(const Image&, const Image&) = default;

private:
    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) + static_cast<std::size_t>(x);
    }

    int width_ = 0;
    int height_ = 0;
    std::vector<Pixel> pixels_;
};

using GrayImage = Image<std::uint8_t>;
using ColorImage = Image<Rgb>;
using BinaryImage = Image<Ink>;

/// Luma of one pixel: round-half-up of 0.299 r + 0.587 g + 0.114 b.
/// Evaluated in integer thousandths so (v, v, v) maps to v exactly.
constexpr std::uint8_t luma(Rgb p) {
    const int scaled = 299 * p.r + 587 * p.g + 114 * p.b;  // <= 255000
    return static_cast<std::uint8_t>(std::min((scaled + 500) / 1000, 255));
}

inline GrayImage to_grayscale(const ColorImage& img) {
    GrayImage out(img.width(), img.height());
    std::ranges::transform(img.pixels(), out.pixels().begin(), luma);
    return out;
}

inline std::uint8_t ink_to_gray(Ink v) { return v == Ink::foreground ? 0 : 255; }

/// Renders a binary image with foreground = 0, background = 255.
inline GrayImage to_gray(const BinaryImage& img) {
    GrayImage out(img.width(), img.height());
    std::ranges::transform(img.pixels(), out.pixels().begin(), ink_to_gray);
    return out;
}

template <class Pixel>
Image<Pixel> crop(const Image<Pixel>& img, const Rect& r) {
    if (r.empty() || r.x < 0 || r.y < 0 || r.right() > img.width() || r.bottom() > img.height())
        throw Error("crop: rectangle out of bounds");
    Image<Pixel> out(r.w, r.h);
    for (int j = 0; j < r.h; ++j) {
        auto src = img.row(r.y + j).subspan(static_cast<std::size_t>(r.x), static_cast<std::size_t>(r.w));
        std::ranges::copy(src, out.row(j).begin());
    }
    return out;
}

template <class Pixel>
std::size_t count_if_equal(const Image<Pixel>& img, Pixel v) {
    return static_cast<std::size_t>(std::ranges::count(img.pixels(), v));
}

/// Tight bounding box of foreground pixels; empty Rect when there are none.
inline Rect foreground_bounds(const BinaryImage& img) {
    int x0 = img.width(), y0 = img.height(), x1 = -1, y1 = -1;
    for (int y = 0; y < img.height(); ++y) {
        auto r = img.row(y);
        for (int x = 0; x < img.width(); ++x) {
            if (r[x] == Ink::foreground) {
                x0 = std::min(x0, x);
                x1 = std::max(x1, x);
                y0 = std::min(y0, y);
                y1 = std::max(y1, y);
            }
        }
    }
    if (x1 < 0) return {};
    return {x0, y0, x1 - x0 + 1, y1 - y0 + 1};
}

}  // namespace cardocr
