#pragma once

// Configuration and the end-to-end pipeline: extraction -> skew -> binarize ->
// segment -> recognize -> transcribe.

#include <array>
#include <chrono>
#include <cstdlib>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "cardocr/binarize.hpp"
#include "cardocr/heap_probe.hpp"
#include "cardocr/image.hpp"
#include "cardocr/recognition.hpp"
#include "cardocr/regions.hpp"
#include "cardocr/segmentation.hpp"
#include "cardocr/skew.hpp"

namespace cardocr {

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error("config: " + what) {}
};

struct PipelineConfig {
    RegionConfig regions;
    SkewConfig skew;
    BinarizeConfig binarize;
    SegmentationConfig segmentation;
    ClassScheme scheme;
    std::string templates;  // empty selects the bundled store
};

namespace detail {

struct ConfigKey {
    const char* name;
    const char* help;
    std::function<std::string(const PipelineConfig&)> get;
    std::function<void(PipelineConfig&, const std::string&)> set;
};

inline long parse_long(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const long x = std::strtol(v.c_str(), &end, 10);
    if (v.empty() || *end != '\0') throw ConfigError(key + ": expected an integer, got '" + v + "'");
    return x;
}

inline double parse_double(const std::string& key, const std::string& v) {
    char* end = nullptr;
    const double x = std::strtod(v.c_str(), &end);
    if (v.empty() || *end != '\0') throw ConfigError(key + ": expected a number, got '" + v + "'");
    return x;
}

inline std::string show(double v) {
    std::ostringstream os;
    os << v;
    return os.str();
}

inline void require(bool ok, const std::string& key, const char* rule) {
    if (!ok) throw ConfigError(key + ": must be " + rule);
}

inline const std::vector<ConfigKey>& config_keys() {
    static const std::vector<ConfigKey> keys = [] {
        std::vector<ConfigKey> k;
        auto int_key = [&k](const char* name, const char* help, auto getter, long lo, long hi, const char* rule) {
            k.push_back({name, help, [getter](const PipelineConfig& c) { return std::to_string(getter(const_cast<PipelineConfig&>(c))); },
                         [getter, lo, hi, rule, name](PipelineConfig& c, const std::string& v) {
                             const long x = parse_long(name, v);
                             require(x >= lo && x <= hi, name, rule);
                             getter(c) = static_cast<int>(x);
                         }});
        };
        auto real_key = [&k](const char* name, const char* help, auto getter, double lo, double hi, const char* rule) {
            k.push_back({name, help, [getter](const PipelineConfig& c) { return show(getter(const_cast<PipelineConfig&>(c))); },
                         [getter, lo, hi, rule, name](PipelineConfig& c, const std::string& v) {
                             const double x = parse_double(name, v);
                             require(x >= lo && x <= hi, name, rule);
                             getter(c) = x;
                         }});
        };
        int_key("block_h", "block height in pixels", [](PipelineConfig& c) -> int& { return c.regions.block_h; }, 4, 4096, ">= 4");
        int_key("block_w", "block width in pixels", [](PipelineConfig& c) -> int& { return c.regions.block_w; }, 4, 4096, ">= 4");
        int_key("variation_threshold", "max - min intensity for an information block",
                [](PipelineConfig& c) -> int& { return c.regions.variation_threshold; }, 0, 255, "in [0, 255]");
        int_key("min_area_blocks", "minimum text region size in blocks",
                [](PipelineConfig& c) -> int& { return c.regions.min_area_blocks; }, 1, 1 << 30, ">= 1");
        real_key("ar_min", "minimum text region aspect ratio", [](PipelineConfig& c) -> double& { return c.regions.ar_min; }, 1e-9, 1e9, "> 0");
        real_key("ar_max", "maximum text region aspect ratio", [](PipelineConfig& c) -> double& { return c.regions.ar_max; }, 1e-9, 1e9, "> 0");
        real_key("dens_min", "minimum information pixel density", [](PipelineConfig& c) -> double& { return c.regions.dens_min; }, 0, 1, "in [0, 1]");
        real_key("dens_max", "maximum information pixel density", [](PipelineConfig& c) -> double& { return c.regions.dens_max; }, 0, 1, "in [0, 1]");
        real_key("cov_min", "minimum block coverage of the bounding box", [](PipelineConfig& c) -> double& { return c.regions.cov_min; }, 0, 1, "in [0, 1]");
        real_key("skew_max_angle", "estimates beyond +/- this many degrees pass through",
                 [](PipelineConfig& c) -> double& { return c.skew.max_angle; }, 1e-9, 45, "in (0, 45]");
        k.push_back({"binarize_mode", "global | local",
                     [](const PipelineConfig& c) {
                         return std::string(c.binarize.window == BinarizeConfig::Window::local ? "local" : "global");
                     },
                     [](PipelineConfig& c, const std::string& v) {
                         if (v == "global") c.binarize.window = BinarizeConfig::Window::region_global;
                         else if (v == "local") c.binarize.window = BinarizeConfig::Window::local;
                         else throw ConfigError("binarize_mode: must be global or local");
                     }});
        int_key("binarize_window", "local window side (odd)", [](PipelineConfig& c) -> int& { return c.binarize.local_size; }, 3,
                4095, "odd and >= 3");
        k.push_back({"neighbor_promotion", "true | false",
                     [](const PipelineConfig& c) { return std::string(c.binarize.neighbor_promotion ? "true" : "false"); },
                     [](PipelineConfig& c, const std::string& v) {
                         if (v == "true") c.binarize.neighbor_promotion = true;
                         else if (v == "false") c.binarize.neighbor_promotion = false;
                         else throw ConfigError("neighbor_promotion: must be true or false");
                     }});
        int_key("line_threshold", "row count at or below which a row separates lines",
                [](PipelineConfig& c) -> int& { return c.segmentation.line_threshold; }, 0, 1 << 30, ">= 0");
        real_key("r_min", "minimum band height relative to the median", [](PipelineConfig& c) -> double& { return c.segmentation.r_min; }, 0, 1,
                 "in [0, 1]");
        real_key("word_gap_factor", "word break at this multiple of the median gap",
                 [](PipelineConfig& c) -> double& { return c.segmentation.word_gap_factor; }, 1, 1e9, ">= 1");
        k.push_back({"scheme", "merged | full",
                     [](const PipelineConfig& c) { return std::string(c.scheme.mode == SchemeMode::merged ? "merged" : "full"); },
                     [](PipelineConfig& c, const std::string& v) {
                         if (v == "merged") c.scheme.mode = SchemeMode::merged;
                         else if (v == "full") c.scheme.mode = SchemeMode::full;
                         else throw ConfigError("scheme: must be merged or full");
                     }});
        k.push_back({"templates", "template store directory (empty = bundled store)",
                     [](const PipelineConfig& c) { return c.templates; },
                     [](PipelineConfig& c, const std::string& v) { c.templates = v; }});
        return k;
    }();
    return keys;
}

inline std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

}  // namespace detail

/// Cross-field checks.
inline void validate(const PipelineConfig& c) {
    if (c.regions.ar_max < c.regions.ar_min) throw ConfigError("ar_max must be >= ar_min");
    if (c.regions.dens_max < c.regions.dens_min) throw ConfigError("dens_max must be >= dens_min");
    if (c.binarize.local_size % 2 == 0) throw ConfigError("binarize_window: must be odd and >= 3");
}

inline void set_config_value(PipelineConfig& cfg, const std::string& key, const std::string& value) {
    for (const auto& k : detail::config_keys())
        if (key == k.name) return k.set(cfg, value);
    throw ConfigError("unknown key '" + key + "'");
}

/// Flat "key = value" text; '#' starts a comment line. Unknown keys are rejected.
inline PipelineConfig parse_config(const std::string& text, PipelineConfig cfg = {}) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const std::string t = detail::trim(line);
        if (t.empty() || t[0] == '#') continue;
        const auto eq = t.find('=');
        if (eq == std::string::npos) throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        set_config_value(cfg, detail::trim(t.substr(0, eq)), detail::trim(t.substr(eq + 1)));
    }
    validate(cfg);
    return cfg;
}

/// The full schema as a config file holding the defaults.
inline std::string config_reference(const PipelineConfig& cfg = {}) {
    std::string out;
    for (const auto& k : detail::config_keys()) {
        out += std::string("# ") + k.help + "\n";
        out += std::string(k.name) + " = " + k.get(cfg) + "\n";
    }
    return out;
}

// ---------------------------------------------------------------------------

inline constexpr std::array<const char*, 5> stage_names{"extraction", "skew", "binarize", "segment", "recognize"};

struct StageTiming {
    double ms = 0;
    long long peak_bytes = 0;
};

struct StageTimings {
    std::array<StageTiming, 5> stages{};
    bool memory_measured = false;

    double total_ms() const {
        double t = 0;
        for (const auto& s : stages) t += s.ms;
        return t;
    }
    long long peak_bytes() const {
        long long p = 0;
        for (const auto& s : stages) p = std::max(p, s.peak_bytes);
        return p;
    }
};

struct LineOutcome {
    LineBand band;
    std::vector<GlyphBox> glyphs;
};

struct RegionOutcome {
    Region region;
    double skew_angle = 0;
    std::optional<SkewTrace> skew_trace;
    std::string note;  // pass-through or segmentation notes
    BinaryImage binary;  // kept only with keep_artifacts
    std::vector<LineOutcome> lines;
    RecognizedRegion recognized;
};

struct PipelineOutput {
    std::vector<Region> regions;  // all regions, text and non-text
    std::vector<RegionOutcome> text;
    std::string transcript;
};

namespace detail {

class StageClock {
public:
    StageClock(StageTimings* t, long long baseline) : t_(t), baseline_(baseline) {}

    template <class F>
    auto run(int stage, F&& f) {
        if (!t_) return f();
        heap::reset_peak();
        const auto start = std::chrono::steady_clock::now();
        struct Finish {
            StageClock& self;
            int stage;
            std::chrono::steady_clock::time_point start;
            ~Finish() {
                auto& s = self.t_->stages[static_cast<std::size_t>(stage)];
                s.ms += std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count();
                s.peak_bytes = std::max(s.peak_bytes, heap::peak() - self.baseline_);
            }
        } finish{*this, stage, start};
        return f();
    }

private:
    StageTimings* t_;
    long long baseline_;
};

}  // namespace detail

struct RunOptions {
    bool keep_artifacts = false;
    StageTimings* timings = nullptr;
};

inline PipelineOutput run_pipeline(const GrayImage& gray, const PipelineConfig& cfg, const std::vector<Template>& store,
                                   const RunOptions& opt = {}, long long heap_baseline = -1) {
    if (heap_baseline < 0) heap_baseline = heap::live();
    if (opt.timings) opt.timings->memory_measured = heap::installed.load();
    detail::StageClock clock(opt.timings, heap_baseline);
    PipelineOutput out;

    out.regions = clock.run(0, [&] {
        if (gray.width() < cfg.regions.block_w || gray.height() < cfg.regions.block_h) return std::vector<Region>{};
        return find_regions(gray, cfg.regions);
    });

    std::vector<RecognizedRegion> transcript_regions;
    for (const Region& region : out.regions) {
        if (region.kind != RegionKind::text) continue;
        RegionOutcome ro;
        ro.region = region;

        GrayImage upright = clock.run(1, [&] {
            DeskewResult d = deskew(crop(gray, region.bbox), cfg.skew);
            ro.skew_angle = d.angle;
            ro.skew_trace = std::move(d.trace);
            ro.note = d.note;
            return std::move(d.image);
        });

        BinaryImage binary = clock.run(2, [&] { return binarize_region(upright, cfg.binarize); });
        upright = GrayImage();

        std::vector<LineSegment> lines;
        clock.run(3, [&] {
            try {
                lines = segment_lines(binary, cfg.segmentation);
            } catch (const SegmentationError& e) {
                ro.note += (ro.note.empty() ? "" : "; ") + std::string(e.what());
            }
            for (const LineSegment& l : lines) {
                LineOutcome lo{l.band, {}};
                try {
                    lo.glyphs = segment_characters(l.image, cfg.segmentation);
                } catch (const SegmentationError&) {
                }
                ro.lines.push_back(std::move(lo));
            }
        });
        lines.clear();

        clock.run(4, [&] {
            for (LineOutcome& lo : ro.lines) {
                if (lo.glyphs.empty()) continue;
                RecognizedLine rl;
                for (const GlyphBox& g : lo.glyphs) rl.push_back({classify(normalize_glyph(g.pixels), store, cfg.scheme).label, g.word_index});
                ro.recognized.push_back(std::move(rl));
            }
        });

        if (opt.keep_artifacts) {
            ro.binary = std::move(binary);
        } else {
            for (LineOutcome& lo : ro.lines)
                for (GlyphBox& g : lo.glyphs) g.pixels = BinaryImage();
        }
        if (!ro.recognized.empty()) transcript_regions.push_back(ro.recognized);
        out.text.push_back(std::move(ro));
    }
    out.transcript = transcribe(transcript_regions);
    return out;
}

inline PipelineOutput run_pipeline(const ColorImage& color, const PipelineConfig& cfg, const std::vector<Template>& store,
                                   const RunOptions& opt = {}) {
    const long long baseline = heap::live();
    std::optional<GrayImage> gray;
    detail::StageClock clock(opt.timings, baseline);
    clock.run(0, [&] { gray = to_grayscale(color); });
    return run_pipeline(*gray, cfg, store, opt, baseline);
}

/// Runs the full pipeline `runs` times; stage times are averaged, peaks are the
/// maximum over runs. Peak bytes are working memory above the live heap at entry.
inline StageTimings time_pipeline(const ColorImage& image, const PipelineConfig& cfg, const std::vector<Template>& store,
                                  int runs = 1, PipelineOutput* last = nullptr) {
    if (runs < 1) runs = 1;
    StageTimings acc;
    for (int i = 0; i < runs; ++i) {
        StageTimings t;
        PipelineOutput out = run_pipeline(image, cfg, store, {false, &t});
        for (std::size_t s = 0; s < acc.stages.size(); ++s) {
            acc.stages[s].ms += t.stages[s].ms / runs;
            acc.stages[s].peak_bytes = std::max(acc.stages[s].peak_bytes, t.stages[s].peak_bytes);
        }
        acc.memory_measured = t.memory_measured;
        if (last && i == runs - 1) *last = std::move(out);
    }
    return acc;
}

}  // namespace cardocr
