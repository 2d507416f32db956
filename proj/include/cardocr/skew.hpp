#pragma once

// Per-region skew estimation from the bottom profile and upright rotation.

#include <cmath>
#include <cstdio>
#include <numbers>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "cardocr/geometry.hpp"
#include "cardocr/image.hpp"

namespace cardocr {

class SkewError : public Error {
public:
    enum class Kind { no_text, empty_profile, degenerate_profile };

    SkewError(Kind kind, const std::string& what) : Error("skew: " + what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

struct ProfileEntry {
    int col = 0;
    int h = 0;  // rows from the bottom edge up to the first dark pixel
    friend bool operator==(const ProfileEntry&, const ProfileEntry&) = default;
};

/// Bottom profile of a region. Columns without any dark pixel are absent.
struct Profile {
    int width = 0;
    std::vector<ProfileEntry> entries;  // ascending column order
};

struct ProfileStats {
    double mu = 0;
    double tau = 0;  // mean absolute deviation from mu
};

struct SkewEstimate {
    double angle = 0;  // degrees, positive when the baseline rises left to right
    ProfileEntry h1, h2, h3;
};

/// Dark pixel rule shared by profiling: v < (min + max) / 2 over the region.
inline Profile bottom_profile(const GrayImage& region) {
    if (region.empty()) throw SkewError(SkewError::Kind::no_text, "empty region");
    auto [mn, mx] = std::ranges::minmax_element(region.pixels());
    const int sum = *mn + *mx;
    Profile p;
    p.width = region.width();
    for (int x = 0; x < region.width(); ++x) {
        for (int d = 0; d < region.height(); ++d) {
            if (2 * region(x, region.height() - 1 - d) < sum) {
                p.entries.push_back({x, d});
                break;
            }
        }
    }
    if (p.entries.empty()) throw SkewError(SkewError::Kind::no_text, "region has no dark pixel");
    return p;
}

inline ProfileStats profile_stats(const Profile& p) {
    if (p.entries.empty()) throw SkewError(SkewError::Kind::empty_profile, "empty profile");
    const double n = static_cast<double>(p.entries.size());
    double sum = 0;
    for (const auto& e : p.entries) sum += e.h;
    ProfileStats s;
    s.mu = sum / n;
    double dev = 0;
    for (const auto& e : p.entries) dev += std::abs(s.mu - e.h);
    s.tau = dev / n;
    return s;
}

/// Keeps entries with mu - tau <= h <= mu + tau.
inline Profile filter_profile(const Profile& p, const ProfileStats& s) {
    constexpr double eps = 1e-9;
    Profile out;
    out.width = p.width;
    for (const auto& e : p.entries)
        if (e.h >= s.mu - s.tau - eps && e.h <= s.mu + s.tau + eps) out.entries.push_back(e);
    if (out.entries.size() < 3) throw SkewError(SkewError::Kind::degenerate_profile, "fewer than 3 retained entries");
    return out;
}

inline double pair_angle(const ProfileEntry& a, const ProfileEntry& b) {
    return std::atan(static_cast<double>(b.h - a.h) / (b.col - a.col)) * 180.0 / std::numbers::pi;
}

/// Mean of the three pairwise angles among leftmost, rightmost and the entry
/// nearest the column midpoint of those two.
inline SkewEstimate estimate_skew(const Profile& filtered) {
    const auto& e = filtered.entries;
    if (e.size() < 3) throw SkewError(SkewError::Kind::degenerate_profile, "fewer than 3 entries");
    SkewEstimate est;
    est.h1 = e.front();
    est.h2 = e.back();
    const double mid = (est.h1.col + est.h2.col) / 2.0;
    est.h3 = e.front();
    double best = std::abs(e.front().col - mid);
    for (const auto& x : e) {
        const double d = std::abs(x.col - mid);
        if (d < best) {
            best = d;
            est.h3 = x;
        }
    }
    if (est.h1.col == est.h2.col || est.h1.col == est.h3.col || est.h2.col == est.h3.col)
        throw SkewError(SkewError::Kind::degenerate_profile, "anchor columns not distinct");
    est.angle = (pair_angle(est.h1, est.h3) + pair_angle(est.h3, est.h2) + pair_angle(est.h1, est.h2)) / 3.0;
    return est;
}

struct SkewConfig {
    double max_angle = 20.0;  // estimates beyond this pass the region through
};

struct SkewTrace {
    Profile profile;
    Profile retained;
    ProfileStats stats;
    SkewEstimate estimate;
};

struct DeskewResult {
    GrayImage image;
    double angle = 0;              // applied correction is rotation by -angle
    std::optional<SkewTrace> trace;  // absent when estimation failed
    std::string note;              // why the region was passed through, if it was
};

/// Mean intensity of the non-dark pixels; used as the rotation fill.
inline std::uint8_t background_level(const GrayImage& region) {
    auto [mn, mx] = std::ranges::minmax_element(region.pixels());
    const int sum = *mn + *mx;
    long long acc = 0, n = 0;
    for (std::uint8_t v : region.pixels())
        if (2 * v >= sum) {
            acc += v;
            ++n;
        }
    return n > 0 ? static_cast<std::uint8_t>((acc + n / 2) / n) : *mx;
}

inline DeskewResult deskew(const GrayImage& region, const SkewConfig& cfg = {}) {
    DeskewResult r;
    SkewTrace t;
    try {
        t.profile = bottom_profile(region);
        t.stats = profile_stats(t.profile);
        t.retained = filter_profile(t.profile, t.stats);
        t.estimate = estimate_skew(t.retained);
    } catch (const SkewError& e) {
        r.image = region;
        r.note = e.what();
        return r;
    }
    r.trace = t;
    if (!(std::abs(t.estimate.angle) <= cfg.max_angle)) {
        r.image = region;
        r.note = "skew: estimate outside supported range";
        return r;
    }
    r.angle = t.estimate.angle;
    r.image = r.angle == 0.0 ? region : rotate(region, -r.angle, background_level(region));
    return r;
}

/// "col h retained" rows followed by a "mu tau angle" trailer.
inline void write_profile_dump(std::ostream& os, const SkewTrace& t, double applied_angle) {
    std::size_t k = 0;
    for (const auto& e : t.profile.entries) {
        while (k < t.retained.entries.size() && t.retained.entries[k].col < e.col) ++k;
        const bool kept = k < t.retained.entries.size() && t.retained.entries[k].col == e.col;
        os << e.col << ' ' << e.h << ' ' << (kept ? 1 : 0) << '\n';
    }
    char buf[96];
    std::snprintf(buf, sizeof buf, "%.4f %.4f %.4f", t.stats.mu, t.stats.tau, applied_angle);
    os << buf << '\n';
}

}  // namespace cardocr
