#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>

#include "cardocr/image.hpp"

namespace cardocr {

inline constexpr double max_rotation_degrees = 45.0;

struct RotationFrame {
    int width = 0;
    int height = 0;
    int offset_x = 0;  // (width - source width) / 2
    int offset_y = 0;
};

/// Canvas that contains a w x h image rotated by `degrees`. The growth in each
/// axis is kept even so the source centre lands on the canvas centre exactly.
inline RotationFrame rotation_frame(int w, int h, double degrees) {
    const double rad = degrees * std::numbers::pi / 180.0;
    const double c = std::abs(std::cos(rad));
    const double s = std::abs(std::sin(rad));
    auto fit = [](double need, int base) {
        int n = static_cast<int>(std::ceil(need - 1e-9));
        if (n < base) n = base;
        if ((n - base) % 2 != 0) ++n;
        return n;
    };
    RotationFrame f;
    f.width = fit(w * c + h * s, w);
    f.height = fit(w * s + h * c, h);
    f.offset_x = (f.width - w) / 2;
    f.offset_y = (f.height - h) / 2;
    return f;
}

/// Maps a source-image point to its position on the rotated canvas.
/// Positive angles turn content counter-clockwise as displayed (y grows downward).
struct PointF {
    double x = 0;
    double y = 0;
};

inline PointF rotate_point(PointF p, int src_w, int src_h, double degrees) {
    const RotationFrame f = rotation_frame(src_w, src_h, degrees);
    const double rad = degrees * std::numbers::pi / 180.0;
    const double c = std::cos(rad), s = std::sin(rad);
    const double cx = (src_w - 1) / 2.0, cy = (src_h - 1) / 2.0;
    const double dx = p.x - cx, dy = p.y - cy;
    return {c * dx + s * dy + cx + f.offset_x, -s * dx + c * dy + cy + f.offset_y};
}

/// Rotates counter-clockwise by `degrees` (|degrees| <= 45) on an enlarged canvas.
/// Inverse mapping with bilinear interpolation; samples outside the source read `fill`.
inline GrayImage rotate(const GrayImage& img, double degrees, std::uint8_t fill) {
    if (!(std::abs(degrees) <= max_rotation_degrees)) throw Error("rotate: angle outside [-45, 45] degrees");
    if (img.empty()) return img;
    if (degrees == 0.0) return img;

    const int w = img.width(), h = img.height();
    const RotationFrame f = rotation_frame(w, h, degrees);
    const double rad = degrees * std::numbers::pi / 180.0;
    const double c = std::cos(rad), s = std::sin(rad);
    const double cx = (w - 1) / 2.0, cy = (h - 1) / 2.0;

    auto at = [&](int x, int y) -> double {
        return (x >= 0 && y >= 0 && x < w && y < h) ? img(x, y) : fill;
    };

    GrayImage out(f.width, f.height, fill);
    for (int oy = 0; oy < f.height; ++oy) {
        const double dy = oy - f.offset_y - cy;
        auto dst = out.row(oy);
        for (int ox = 0; ox < f.width; ++ox) {
            const double dx = ox - f.offset_x - cx;
            const double sx = c * dx - s * dy + cx;
            const double sy = s * dx + c * dy + cy;
            if (sx <= -1.0 || sy <= -1.0 || sx >= w || sy >= h) continue;
            const double fx = std::floor(sx), fy = std::floor(sy);
            const int x0 = static_cast<int>(fx), y0 = static_cast<int>(fy);
            const double ax = sx - fx, ay = sy - fy;
            const double top = at(x0, y0) * (1 - ax) + at(x0 + 1, y0) * ax;
            const double bot = at(x0, y0 + 1) * (1 - ax) + at(x0 + 1, y0 + 1) * ax;
            const double v = top * (1 - ay) + bot * ay;
            dst[ox] = static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L));
        }
    }
    return out;
}

}  // namespace cardocr
