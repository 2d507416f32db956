#pragma once

// Synthetic business-card generator with exact ground truth.

#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cardocr/font.hpp"
#include "cardocr/geometry.hpp"
#include "cardocr/image.hpp"
#include "cardocr/pnm.hpp"
#include "cardocr/recognition.hpp"
#include "cardocr/regions.hpp"

namespace cardocr {

class SynthError : public Error {
public:
    explicit SynthError(const std::string& what) : Error("synth: " + what) {}
};

/// mt19937_64 raw words; uniforms take the top 53 bits; normals use the
/// Box-Muller cosine branch. Independent of the standard library's
/// distribution implementations so suites reproduce across toolchains.
class Rng {
public:
    static constexpr std::string_view algorithm = "mt19937_64/u53/box-muller-cos";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Integer in [lo, hi] (modulo reduction).
    int uniform_int(int lo, int hi) {
        const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(next() % span);
    }

    bool chance(double p) { return uniform() < p; }

    double normal(double sigma) {
        const double u1 = 1.0 - uniform();  // (0, 1]
        const double u2 = uniform();
        return sigma * std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }

    template <class T>
    const T& pick(const std::vector<T>& v) {
        return v[static_cast<std::size_t>(uniform_int(0, static_cast<int>(v.size()) - 1))];
    }

private:
    std::mt19937_64 engine_;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Seed for item k of a suite generated with `seed`.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t k) { return splitmix64(seed ^ splitmix64(k + 1)); }

struct TextBand {
    std::string text;  // '\n' separates lines
    int x = 0;
    int y = 0;
    int scale = 4;
};

struct Decoy {
    enum class Shape { rect, ellipse, texture };
    Shape shape = Shape::rect;
    Rect box;
    Rgb color{40, 90, 160};
};

struct CardSpec {
    int width = 0;
    int height = 0;
    std::vector<TextBand> bands;
    std::vector<Decoy> decoys;
    double skew = 0;           // degrees, |skew| <= 20
    double salt_pepper = 0;    // probability per pixel
    double gaussian_sigma = 0; // gray levels
    Rgb background{236, 233, 226};
    Rgb foreground{28, 28, 34};
    std::uint64_t noise_seed = 1;
};

struct TruthLine {
    std::string text;        // words separated by single spaces
    Rect box;                // ink bounds (before skew)
    std::vector<Rect> glyphs;  // ink bounds per glyph (before skew)
};

struct TruthRegion {
    Rect rect;  // ink bounds after skew (bounding box of the rotated band)
    RegionKind kind = RegionKind::text;
    double skew = 0;
    std::vector<TruthLine> lines;  // empty for non-text regions
};

struct GroundTruth {
    std::vector<TruthRegion> regions;
    BinaryImage mask;  // text ink after skew
    double skew = 0;

    /// Transcript in the same layout as transcribe(): lines joined by newline,
    /// regions by a blank line.
    std::string transcript() const {
        std::string out;
        bool first_region = true;
        for (const auto& r : regions) {
            if (r.kind != RegionKind::text) continue;
            if (!first_region) out += "\n\n";
            first_region = false;
            for (std::size_t i = 0; i < r.lines.size(); ++i) {
                if (i > 0) out += '\n';
                out += r.lines[i].text;
            }
        }
        return out;
    }
};

struct Card {
    ColorImage image;
    GroundTruth truth;
};

namespace detail {

inline std::string normalize_spaces(std::string_view line) {
    std::string out;
    for (char c : line) {
        if (c == ' ') {
            if (!out.empty() && out.back() != ' ') out += ' ';
        } else {
            out += c;
        }
    }
    while (!out.empty() && out.back() == ' ') out.pop_back();
    return out;
}

inline bool inside_ellipse(int x, int y, const Rect& b) {
    const double rx = b.w / 2.0, ry = b.h / 2.0;
    const double dx = (x + 0.5 - b.x - rx) / rx, dy = (y + 0.5 - b.y - ry) / ry;
    return dx * dx + dy * dy <= 1.0;
}

inline ColorImage rotate_color(const ColorImage& img, double degrees, Rgb fill) {
    GrayImage ch[3] = {GrayImage(img.width(), img.height()), GrayImage(img.width(), img.height()),
                       GrayImage(img.width(), img.height())};
    for (std::size_t i = 0; i < img.size(); ++i) {
        ch[0].pixels()[i] = img.pixels()[i].r;
        ch[1].pixels()[i] = img.pixels()[i].g;
        ch[2].pixels()[i] = img.pixels()[i].b;
    }
    const GrayImage r = rotate(ch[0], degrees, fill.r);
    const GrayImage g = rotate(ch[1], degrees, fill.g);
    const GrayImage b = rotate(ch[2], degrees, fill.b);
    ColorImage out(r.width(), r.height());
    for (std::size_t i = 0; i < out.size(); ++i) out.pixels()[i] = {r.pixels()[i], g.pixels()[i], b.pixels()[i]};
    return out;
}

inline Rect rotated_bounds(const Rect& r, int w, int h, double degrees) {
    const PointF corners[4] = {{r.x - 0.5, r.y - 0.5},
                               {r.right() - 0.5, r.y - 0.5},
                               {r.x - 0.5, r.bottom() - 0.5},
                               {r.right() - 0.5, r.bottom() - 0.5}};
    double x0 = 1e18, y0 = 1e18, x1 = -1e18, y1 = -1e18;
    for (const auto& c : corners) {
        const PointF p = rotate_point(c, w, h, degrees);
        x0 = std::min(x0, p.x);
        y0 = std::min(y0, p.y);
        x1 = std::max(x1, p.x);
        y1 = std::max(y1, p.y);
    }
    const int ix0 = static_cast<int>(std::floor(x0 + 0.5)), iy0 = static_cast<int>(std::floor(y0 + 0.5));
    const int ix1 = static_cast<int>(std::ceil(x1 + 0.5)), iy1 = static_cast<int>(std::ceil(y1 + 0.5));
    return {ix0, iy0, ix1 - ix0, iy1 - iy0};
}

inline std::uint8_t clamp_u8(double v) { return static_cast<std::uint8_t>(std::clamp(std::lround(v), 0L, 255L)); }

}  // namespace detail

/// Composes decoys then text, rotates by the skew (content turns
/// counter-clockwise for positive skew), then applies noise. Ground truth is
/// taken before noise.
inline Card render_card(const CardSpec& spec) {
    if (spec.width <= 0 || spec.height <= 0) throw SynthError("canvas must be non-empty");
    if (!(std::abs(spec.skew) <= 20.0)) throw SynthError("skew outside [-20, 20]");
    if (spec.salt_pepper < 0 || spec.salt_pepper > 1) throw SynthError("salt-and-pepper probability outside [0, 1]");
    if (spec.gaussian_sigma < 0) throw SynthError("negative noise sigma");

    ColorImage img(spec.width, spec.height, spec.background);
    GrayImage coverage(spec.width, spec.height, 0);  // 255 where text ink
    Card card;
    card.truth.skew = spec.skew;

    Rng texture_rng(splitmix64(spec.noise_seed ^ 0x5EEDULL));
    for (const Decoy& d : spec.decoys) {
        const Rect clip = intersect(d.box, img.bounds());
        if (clip.empty() || !(clip == d.box)) throw SynthError("decoy exceeds canvas");
        for (int y = d.box.y; y < d.box.bottom(); ++y)
            for (int x = d.box.x; x < d.box.right(); ++x) {
                switch (d.shape) {
                    case Decoy::Shape::rect: img(x, y) = d.color; break;
                    case Decoy::Shape::ellipse:
                        if (detail::inside_ellipse(x, y, d.box)) img(x, y) = d.color;
                        break;
                    case Decoy::Shape::texture: {
                        const double k = texture_rng.uniform(0.15, 1.0);
                        img(x, y) = {detail::clamp_u8(d.color.r * k + 255 * (1 - k) * 0.3),
                                     detail::clamp_u8(d.color.g * k + 255 * (1 - k) * 0.3),
                                     detail::clamp_u8(d.color.b * k + 255 * (1 - k) * 0.3)};
                        break;
                    }
                }
            }
        card.truth.regions.push_back({d.box, RegionKind::non_text, spec.skew, {}});
    }

    for (const TextBand& band : spec.bands) {
        const RenderedText rt = render_text(band.text, band.scale);
        const Rect where{band.x, band.y, rt.ink.width(), rt.ink.height()};
        if (band.x < 0 || band.y < 0 || where.right() > spec.width || where.bottom() > spec.height)
            throw SynthError("text exceeds canvas: \"" + band.text + "\"");
        for (int y = 0; y < rt.ink.height(); ++y)
            for (int x = 0; x < rt.ink.width(); ++x)
                if (rt.ink(x, y) == Ink::foreground) {
                    img(band.x + x, band.y + y) = spec.foreground;
                    coverage(band.x + x, band.y + y) = 255;
                }
        TruthRegion tr;
        tr.kind = RegionKind::text;
        tr.skew = spec.skew;
        std::istringstream lines(band.text);
        std::string line_text;
        for (std::size_t li = 0; li < rt.line_boxes.size(); ++li) {
            std::getline(lines, line_text);
            TruthLine tl;
            tl.text = detail::normalize_spaces(line_text);
            tl.box = {rt.line_boxes[li].x + band.x, rt.line_boxes[li].y + band.y, rt.line_boxes[li].w, rt.line_boxes[li].h};
            for (const PlacedGlyph& g : rt.glyphs)
                if (g.line == static_cast<int>(li)) tl.glyphs.push_back({g.box.x + band.x, g.box.y + band.y, g.box.w, g.box.h});
            tr.rect = unite(tr.rect, tl.box);
            tr.lines.push_back(std::move(tl));
        }
        card.truth.regions.push_back(std::move(tr));
    }

    if (spec.skew != 0.0) {
        const int w0 = spec.width, h0 = spec.height;
        img = detail::rotate_color(img, spec.skew, spec.background);
        coverage = rotate(coverage, spec.skew, 0);
        for (auto& r : card.truth.regions) r.rect = intersect(detail::rotated_bounds(r.rect, w0, h0, spec.skew), img.bounds());
    }

    card.truth.mask = BinaryImage(coverage.width(), coverage.height());
    std::ranges::transform(coverage.pixels(), card.truth.mask.pixels().begin(),
                           [](std::uint8_t v) { return v >= 128 ? Ink::foreground : Ink::background; });
    if (spec.skew != 0.0) {
        for (auto& r : card.truth.regions) {
            if (r.kind != RegionKind::text) continue;
            const Rect tight = foreground_bounds(crop(card.truth.mask, r.rect));
            if (!tight.empty()) r.rect = {r.rect.x + tight.x, r.rect.y + tight.y, tight.w, tight.h};
        }
    }

    if (spec.gaussian_sigma > 0 || spec.salt_pepper > 0) {
        Rng rng(spec.noise_seed);
        for (Rgb& p : img.pixels()) {
            if (spec.salt_pepper > 0 && rng.chance(spec.salt_pepper)) {
                const std::uint8_t v = rng.chance(0.5) ? 255 : 0;
                p = {v, v, v};
                continue;
            }
            if (spec.gaussian_sigma > 0) {
                const double n = rng.normal(spec.gaussian_sigma);
                p = {detail::clamp_u8(p.r + n), detail::clamp_u8(p.g + n), detail::clamp_u8(p.b + n)};
            }
        }
    }
    card.image = std::move(img);
    return card;
}

// ---------------------------------------------------------------------------
// Random card content

namespace detail {

inline std::string random_word(Rng& rng, int min_syll, int max_syll, bool capital) {
    static const std::vector<std::string> syllables = {
        "ra", "jan", "ta", "mi", "sen", "gu", "pta", "ban", "er", "jee", "das", "ko", "lka", "de", "vi", "an",
        "su", "bha", "dip", "ni", "ta", "pa", "ul", "mo", "hon", "ay", "far", "uk", "bas", "ma", "kar", "ri",
        "on", "sh", "ve", "lo", "tri", "qu", "zy", "wex", "fo", "gle", "ix", "yo", "bri", "ck"};
    std::string w;
    const int n = rng.uniform_int(min_syll, max_syll);
    for (int i = 0; i < n; ++i) w += rng.pick(syllables);
    if (capital && !w.empty()) w[0] = static_cast<char>(w[0] - 'a' + 'A');
    return w;
}

inline std::string random_digits(Rng& rng, int n) {
    std::string s;
    for (int i = 0; i < n; ++i) s += static_cast<char>('0' + rng.uniform_int(0, 9));
    return s;
}

inline std::string random_line(Rng& rng) {
    static const std::vector<std::string> titles = {"Senior Engineer", "Managing Director", "Research Fellow",
                                                    "Sales Manager", "Chief Architect", "Project Lead",
                                                    "Professor", "Consultant"};
    static const std::vector<std::string> domains = {"com", "org", "net", "ac.in", "co.in", "edu"};
    switch (rng.uniform_int(0, 6)) {
        case 0: return random_word(rng, 2, 3, true) + " " + random_word(rng, 2, 3, true);
        case 1: return rng.pick(titles);
        case 2: return "Ph: +" + random_digits(rng, 2) + " " + random_digits(rng, 5) + " " + random_digits(rng, 5);
        case 3:
            return random_word(rng, 1, 2, false) + "." + random_word(rng, 1, 2, false) + "@" +
                   random_word(rng, 2, 2, false) + "." + rng.pick(domains);
        case 4: return "www." + random_word(rng, 2, 3, false) + "." + rng.pick(domains);
        case 5:
            return random_digits(rng, 2) + "/" + random_digits(rng, 1) + ", " + random_word(rng, 2, 2, true) + " Road";
        default:
            return random_word(rng, 2, 3, true) + " (" + random_word(rng, 1, 2, true) + ") & " +
                   random_word(rng, 2, 2, true) + " - " + random_digits(rng, 6);
    }
}

}  // namespace detail

struct SuiteRanges {
    int width = 2048;
    int height = 1536;
    int bands_min = 4;
    int bands_max = 8;
    int lines_min = 1;
    int lines_max = 1;
    int scale_min = 4;
    int scale_max = 5;
    int decoys_min = 1;
    int decoys_max = 2;
    double skew_min = 0;
    double skew_max = 0;
    double sigma_min = 0;
    double sigma_max = 4;
    double salt_pepper = 0;
    int min_line_chars = 8;
};

/// Random card layout: text bands stacked down the left, decoys in free space,
/// every pair of items separated by at least `clearance` pixels.
inline CardSpec random_card_spec(Rng& rng, const SuiteRanges& r) {
    constexpr int margin = 48;
    constexpr int clearance = 40;
    CardSpec spec;
    spec.width = r.width;
    spec.height = r.height;
    spec.skew = r.skew_min == r.skew_max ? r.skew_min : rng.uniform(r.skew_min, r.skew_max);
    spec.gaussian_sigma = r.sigma_min == r.sigma_max ? r.sigma_min : rng.uniform(r.sigma_min, r.sigma_max);
    spec.salt_pepper = r.salt_pepper;
    spec.background = {static_cast<std::uint8_t>(rng.uniform_int(215, 250)),
                       static_cast<std::uint8_t>(rng.uniform_int(215, 250)),
                       static_cast<std::uint8_t>(rng.uniform_int(205, 245))};
    const auto ink = static_cast<std::uint8_t>(rng.uniform_int(10, 60));
    spec.foreground = {ink, ink, static_cast<std::uint8_t>(ink + rng.uniform_int(0, 40))};
    spec.noise_seed = rng.next();

    std::vector<Rect> occupied;
    auto clear_of = [&](const Rect& c) {
        const Rect grown{c.x - clearance, c.y - clearance, c.w + 2 * clearance, c.h + 2 * clearance};
        return std::ranges::none_of(occupied, [&](const Rect& o) { return !intersect(grown, o).empty(); });
    };

    int y = margin + rng.uniform_int(0, 40);
    const int bands = rng.uniform_int(r.bands_min, r.bands_max);
    for (int b = 0; b < bands; ++b) {
        const int scale = rng.uniform_int(r.scale_min, r.scale_max);
        const int nlines = rng.uniform_int(r.lines_min, r.lines_max);
        const int x = margin + rng.uniform_int(0, 120);
        std::string text;
        for (int attempt = 0; attempt < 20; ++attempt) {
            text.clear();
            bool ok = true;
            for (int l = 0; l < nlines; ++l) {
                std::string line = detail::random_line(rng);
                while (static_cast<int>(line.size()) < r.min_line_chars) line += " " + detail::random_word(rng, 2, 3, true);
                if (x + text_width(line, scale) > r.width - margin) ok = false;
                text += (l ? "\n" : "") + line;
            }
            if (ok) break;
            text.clear();
        }
        if (text.empty()) continue;
        const RenderedText probe = render_text(text, scale);
        if (y + probe.ink.height() > r.height - margin) break;
        spec.bands.push_back({text, x, y, scale});
        occupied.push_back({x, y, probe.ink.width(), probe.ink.height()});
        y += probe.ink.height() + clearance + rng.uniform_int(8, 80);
    }

    const int decoys = rng.uniform_int(r.decoys_min, r.decoys_max);
    for (int d = 0; d < decoys; ++d) {
        for (int attempt = 0; attempt < 200; ++attempt) {
            const int side = rng.uniform_int(std::min(120, r.width / 4), std::max(std::min(120, r.width / 4), std::min(320, r.height / 3)));
            const double aspect = rng.uniform(0.7, 1.1);
            const int w = static_cast<int>(side * aspect), h = side;
            if (w + 2 * margin >= r.width || h + 2 * margin >= r.height) break;
            const Rect box{rng.uniform_int(margin, r.width - margin - w), rng.uniform_int(margin, r.height - margin - h), w, h};
            if (!clear_of(box)) continue;
            Decoy dec;
            dec.shape = static_cast<Decoy::Shape>(rng.uniform_int(0, 2));
            dec.box = box;
            dec.color = {static_cast<std::uint8_t>(rng.uniform_int(20, 160)), static_cast<std::uint8_t>(rng.uniform_int(20, 160)),
                         static_cast<std::uint8_t>(rng.uniform_int(20, 160))};
            spec.decoys.push_back(dec);
            occupied.push_back(box);
            break;
        }
    }
    return spec;
}

// ---------------------------------------------------------------------------
// Suite files

inline void write_truth_regions(std::ostream& os, const GroundTruth& gt) {
    for (const auto& r : gt.regions) {
        RegionFeatures f;
        f.width = r.rect.w;
        f.height = r.rect.h;
        f.aspect_ratio = r.rect.h > 0 ? static_cast<double>(r.rect.w) / r.rect.h : 0.0;
        if (!r.rect.empty() && !gt.mask.empty()) {
            const BinaryImage m = crop(gt.mask, r.rect);
            f.info_pixel_density = static_cast<double>(count_if_equal(m, Ink::foreground)) / static_cast<double>(m.size());
        }
        f.coverage_ratio = 1.0;
        os << format_region_line(r.rect, r.kind, f) << '\n';
    }
}

struct RegionRecord {
    Rect rect;
    RegionKind kind = RegionKind::text;
};

/// Reads the "x y w h TR|NR ..." region dump format (trailing fields ignored).
inline std::vector<RegionRecord> read_region_records(std::istream& is) {
    std::vector<RegionRecord> out;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::istringstream ls(line);
        RegionRecord r;
        std::string kind;
        if (!(ls >> r.rect.x >> r.rect.y >> r.rect.w >> r.rect.h >> kind) || (kind != "TR" && kind != "NR"))
            throw Error("region file: malformed line: " + line);
        r.kind = kind == "TR" ? RegionKind::text : RegionKind::non_text;
        out.push_back(r);
    }
    return out;
}

inline std::vector<RegionRecord> read_region_file(const std::filesystem::path& path) {
    std::ifstream f(path);
    if (!f) throw Error("cannot open " + path.string());
    return read_region_records(f);
}

inline std::string card_stem(int k) { return "card_" + std::to_string(k); }

inline void write_card_files(const std::filesystem::path& dir, int k, const Card& card) {
    const std::string stem = card_stem(k);
    save_pnm_file(dir / (stem + ".ppm"), card.image);
    save_pnm_file(dir / (stem + ".mask.pgm"), card.truth.mask);
    {
        std::ofstream f(dir / (stem + ".regions.txt"), std::ios::binary);
        write_truth_regions(f, card.truth);
    }
    std::ofstream t(dir / (stem + ".truth.txt"), std::ios::binary);
    t << card.truth.transcript() << '\n';
}

/// Writes card_<k>.{ppm,mask.pgm,regions.txt,truth.txt} for k in [0, count)
/// plus manifest.txt. Same seed and ranges give byte-identical output.
inline void generate_suite(const std::filesystem::path& dir, std::uint64_t seed, int count, const SuiteRanges& r = {}) {
    if (count < 1) throw SynthError("count must be >= 1");
    std::filesystem::create_directories(dir);
    for (int k = 0; k < count; ++k) {
        Rng rng(derive_seed(seed, static_cast<std::uint64_t>(k)));
        write_card_files(dir, k, render_card(random_card_spec(rng, r)));
    }
    std::ofstream m(dir / "manifest.txt", std::ios::binary);
    m << "generator=" << Rng::algorithm << "\n"
      << "seed=" << seed << "\n"
      << "count=" << count << "\n"
      << "width=" << r.width << "\nheight=" << r.height << "\n"
      << "bands=" << r.bands_min << ".." << r.bands_max << "\n"
      << "lines=" << r.lines_min << ".." << r.lines_max << "\n"
      << "scale=" << r.scale_min << ".." << r.scale_max << "\n"
      << "decoys=" << r.decoys_min << ".." << r.decoys_max << "\n"
      << "skew=" << r.skew_min << ".." << r.skew_max << "\n"
      << "sigma=" << r.sigma_min << ".." << r.sigma_max << "\n"
      << "salt_pepper=" << r.salt_pepper << "\n";
}

// ---------------------------------------------------------------------------
// Glyph samples for template building and recognition tests

struct GlyphPerturbation {
    int base_scale = 5;
    double scale_jitter = 0.2;  // relative, uniform in [-j, +j]
    double max_rotation = 2.0;  // degrees, uniform in [-r, +r]
    double salt_pepper = 0.0;   // flip probability inside the glyph box
};

/// One glyph rendered at a jittered size, rotated, re-thresholded and cropped to
/// its ink box, then with pixels flipped at the salt-and-pepper rate.
inline BinaryImage perturbed_glyph(char c, Rng& rng, const GlyphPerturbation& p) {
    const GlyphBitmap& g = font_glyph(c);
    const double factor = p.base_scale * (1.0 + rng.uniform(-p.scale_jitter, p.scale_jitter));
    const int pad = 4;
    const int w = std::max(1, static_cast<int>(std::lround(g.bits.width() * factor)));
    const int h = std::max(1, static_cast<int>(std::lround(g.bits.height() * factor)));
    GrayImage canvas(w + 2 * pad, h + 2 * pad, 255);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) {
            const int sx = std::min(g.bits.width() - 1, static_cast<int>((x + 0.5) * g.bits.width() / w));
            const int sy = std::min(g.bits.height() - 1, static_cast<int>((y + 0.5) * g.bits.height() / h));
            if (g.bits(sx, sy) == Ink::foreground) canvas(pad + x, pad + y) = 0;
        }
    const double angle = p.max_rotation > 0 ? rng.uniform(-p.max_rotation, p.max_rotation) : 0.0;
    const GrayImage turned = rotate(canvas, angle, 255);
    BinaryImage bin(turned.width(), turned.height());
    std::ranges::transform(turned.pixels(), bin.pixels().begin(),
                           [](std::uint8_t v) { return v < 128 ? Ink::foreground : Ink::background; });
    Rect box = foreground_bounds(bin);
    if (box.empty()) box = bin.bounds();
    BinaryImage out = crop(bin, box);
    if (p.salt_pepper > 0) {
        for (Ink& v : out.pixels())
            if (rng.chance(p.salt_pepper)) v = v == Ink::foreground ? Ink::background : Ink::foreground;
        if (foreground_bounds(out).empty()) out(0, 0) = Ink::foreground;
    }
    return out;
}

inline constexpr std::uint64_t bundled_store_seed = 2010;
inline constexpr int bundled_samples_per_class = 20;

/// Training samples for every class: mild perturbations across a range of sizes.
inline std::vector<LabeledGlyph> font_training_samples(std::uint64_t seed, int per_class) {
    std::vector<LabeledGlyph> out;
    for (std::size_t ci = 0; ci < alphabet.size(); ++ci) {
        Rng rng(derive_seed(seed, ci));
        for (int k = 0; k < per_class; ++k) {
            GlyphPerturbation p;
            p.base_scale = 3 + k % 4;
            p.scale_jitter = 0.1;
            p.max_rotation = 1.5;
            out.push_back({alphabet[ci], perturbed_glyph(alphabet[ci], rng, p),
                           "font:" + std::string(1, alphabet[ci]) + ":" + std::to_string(k)});
        }
    }
    return out;
}

/// The store shipped with the tools: 10 templates per class selected from the
/// bundled font's training samples.
inline std::vector<Template> bundled_store() {
    return build_store(font_training_samples(bundled_store_seed, bundled_samples_per_class));
}

}  // namespace cardocr
