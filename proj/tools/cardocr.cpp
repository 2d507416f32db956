// cardocr: business-card OCR pipeline, synthetic suites, template stores,
// evaluation and benchmarking.
//
// Exit codes: 0 ok, 1 usage, 2 input, 3 template store, 4 no text, 5 config.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "cardocr.hpp"
#include "cardocr/heap_probe_install.hpp"

namespace fs = std::filesystem;
using namespace cardocr;

namespace {

enum Exit { ok = 0, usage = 1, input = 2, store = 3, no_text = 4, config = 5 };

struct Failure {
    int code;
    std::string message;
};

struct PipelineFlags {
    std::string config_path;
    std::string templates;
    std::string scheme;
};

void add_pipeline_flags(CLI::App* cmd, PipelineFlags& f) {
    cmd->add_option("--config", f.config_path, "key = value config file");
    cmd->add_option("--templates", f.templates, "template store directory (default: bundled store)");
    cmd->add_option("--scheme", f.scheme, "class scheme")->check(CLI::IsMember({"merged", "full"}));
}

std::string read_text(const fs::path& p, int code) {
    std::ifstream f(p, std::ios::binary);
    if (!f) throw Failure{code, "cannot read " + p.string()};
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

PipelineConfig resolve_config(const PipelineFlags& f) {
    try {
        PipelineConfig cfg = f.config_path.empty() ? PipelineConfig{} : parse_config(read_text(f.config_path, config));
        if (!f.templates.empty()) cfg.templates = f.templates;
        if (!f.scheme.empty()) set_config_value(cfg, "scheme", f.scheme);
        return cfg;
    } catch (const ConfigError& e) {
        throw Failure{config, e.what()};
    }
}

std::vector<Template> resolve_store(const PipelineConfig& cfg) {
    if (cfg.templates.empty()) return bundled_store();
    try {
        return load_store(cfg.templates);
    } catch (const Error& e) {
        throw Failure{store, e.what()};
    }
}

ColorImage load_input(const fs::path& p) {
    try {
        AnyImage any = load_pnm_file(p);
        if (auto* c = std::get_if<ColorImage>(&any)) return std::move(*c);
        const GrayImage& g = std::get<GrayImage>(any);
        ColorImage c(g.width(), g.height());
        std::ranges::transform(g.pixels(), c.pixels().begin(), [](std::uint8_t v) { return Rgb{v, v, v}; });
        return c;
    } catch (const Error& e) {
        throw Failure{input, e.what()};
    }
}

void write_string(const fs::path& p, const std::string& s) {
    std::ofstream f(p, std::ios::binary);
    f << s;
    if (!f) throw Failure{input, "cannot write " + p.string()};
}

void dump_stages(const fs::path& dir, const PipelineOutput& out) {
    fs::create_directories(dir);
    std::ostringstream regions;
    write_region_dump(regions, out.regions);
    write_string(dir / "regions.txt", regions.str());
    for (std::size_t k = 0; k < out.text.size(); ++k) {
        const RegionOutcome& ro = out.text[k];
        const std::string stem = "region_" + std::to_string(k);
        if (ro.skew_trace) {
            std::ostringstream os;
            write_profile_dump(os, *ro.skew_trace, ro.skew_angle);
            write_string(dir / (stem + ".profile.txt"), os.str());
        }
        save_pnm_file(dir / (stem + ".binary.pgm"), ro.binary);
        std::ostringstream bands;
        for (const LineOutcome& l : ro.lines) bands << "band " << l.band.top << ' ' << l.band.bottom << '\n';
        write_string(dir / (stem + ".bands.txt"), bands.str());
        for (std::size_t j = 0; j < ro.lines.size(); ++j) {
            std::ostringstream gs;
            write_glyph_dump(gs, ro.lines[j].glyphs);
            write_string(dir / (stem + "_line_" + std::to_string(j) + ".glyphs.txt"), gs.str());
        }
    }
}

int cmd_run(const std::string& image, const PipelineFlags& flags, const std::string& dump_dir) {
    const PipelineConfig cfg = resolve_config(flags);
    const ColorImage img = load_input(image);
    const auto templates = resolve_store(cfg);
    const PipelineOutput out = run_pipeline(img, cfg, templates, {!dump_dir.empty(), nullptr});
    if (!dump_dir.empty()) dump_stages(dump_dir, out);
    if (out.transcript.empty()) {
        std::cerr << "no text found\n";
        return no_text;
    }
    std::cout << out.transcript << '\n';
    return ok;
}

int cmd_synth(const std::string& dir, std::uint64_t seed, int count, const SuiteRanges& ranges) {
    if (count < 1) throw Failure{usage, "--count must be >= 1"};
    generate_suite(dir, seed, count, ranges);
    std::cout << "wrote " << count << " cards to " << dir << '\n';
    return ok;
}

int cmd_store_build(const std::string& dir, std::uint64_t seed, int samples) {
    const auto templates = build_store(font_training_samples(seed, samples));
    save_store(dir, templates);
    std::cout << "wrote " << templates.size() << " templates to " << dir << '\n';
    return ok;
}

std::vector<std::string> text_lines(const std::string& s) {
    std::vector<std::string> out;
    std::istringstream in(s);
    std::string line;
    while (std::getline(in, line)) {
        std::erase(line, ' ');
        if (!line.empty()) out.push_back(line);
    }
    return out;
}

// Lines are paired in reading order and characters by position within a line,
// ignoring spaces. Truth characters without a counterpart count as errors.
void align_transcripts(const std::string& predicted, const std::string& truth, std::string& pred_out, std::string& truth_out) {
    const auto p = text_lines(predicted), t = text_lines(truth);
    for (std::size_t i = 0; i < t.size(); ++i) {
        std::string line = i < p.size() ? p[i] : std::string();
        line.resize(t[i].size(), '\0');
        pred_out += line;
        truth_out += t[i];
    }
}

int cmd_eval(const std::string& suite, const std::string& pred_dir, const PipelineFlags& flags) {
    std::vector<int> cards;
    for (int k = 0; fs::exists(fs::path(suite) / (card_stem(k) + ".regions.txt")); ++k) cards.push_back(k);
    if (cards.empty()) throw Failure{input, "no cards found in " + suite};

    EvalCounts counts;
    std::vector<std::pair<std::string, std::string>> report;
    auto read_regions = [](const fs::path& p) {
        try {
            return read_region_file(p);
        } catch (const Error& e) {
            throw Failure{input, e.what()};
        }
    };

    if (!pred_dir.empty()) {
        for (int k : cards)
            counts += region_eval(read_regions(fs::path(pred_dir) / (card_stem(k) + ".regions.txt")),
                                  read_regions(fs::path(suite) / (card_stem(k) + ".regions.txt")));
    } else {
        PipelineConfig cfg = resolve_config(flags);
        const ClassScheme scheme = cfg.scheme;
        cfg.scheme.mode = SchemeMode::full;
        const auto templates = resolve_store(cfg);
        std::string pred_all, truth_all;
        for (int k : cards) {
            const fs::path stem = fs::path(suite) / card_stem(k);
            const PipelineOutput out = run_pipeline(load_input(stem.string() + ".ppm"), cfg, templates);
            std::vector<RegionRecord> pred;
            for (const Region& r : out.regions) pred.push_back({r.bbox, r.kind});
            counts += region_eval(pred, read_regions(stem.string() + ".regions.txt"));
            align_transcripts(out.transcript, read_text(stem.string() + ".truth.txt", input), pred_all, truth_all);
        }
        const Metrics m = f_measure(counts);
        report = {{"recall", format_percent(m.recall)},
                  {"precision", format_percent(m.precision)},
                  {"f_measure", format_percent(m.f_measure)},
                  {"accuracy", format_percent(char_accuracy(pred_all, truth_all, scheme))},
                  {"accuracy_full", format_percent(char_accuracy(pred_all, truth_all, ClassScheme{SchemeMode::full}))},
                  {"accuracy_merged", format_percent(char_accuracy(pred_all, truth_all, ClassScheme{SchemeMode::merged}))},
                  {"cards", std::to_string(cards.size())}};
        std::cout << format_report(report);
        return ok;
    }
    const Metrics m = f_measure(counts);
    report = {{"recall", format_percent(m.recall)},
              {"precision", format_percent(m.precision)},
              {"f_measure", format_percent(m.f_measure)},
              {"cards", std::to_string(cards.size())}};
    std::cout << format_report(report);
    return ok;
}

int cmd_bench(const std::string& image, const PipelineFlags& flags, int runs, std::uint64_t seed) {
    const PipelineConfig cfg = resolve_config(flags);
    const auto templates = resolve_store(cfg);
    ColorImage img;
    if (image.empty()) {
        Rng rng(seed);
        img = render_card(random_card_spec(rng, SuiteRanges{})).image;
    } else {
        img = load_input(image);
    }
    const StageTimings t = time_pipeline(img, cfg, templates, runs);
    const long long input_bytes = static_cast<long long>(img.size()) * 3;
    std::vector<std::pair<std::string, std::string>> report;
    char buf[32];
    for (std::size_t s = 0; s < stage_names.size(); ++s) {
        std::snprintf(buf, sizeof buf, "%.3f", t.stages[s].ms);
        report.emplace_back(std::string(stage_names[s]) + "_ms", buf);
    }
    std::snprintf(buf, sizeof buf, "%.3f", t.total_ms());
    report.emplace_back("total_ms", buf);
    for (std::size_t s = 0; s < stage_names.size(); ++s)
        report.emplace_back(std::string(stage_names[s]) + "_peak_bytes", std::to_string(t.stages[s].peak_bytes));
    report.emplace_back("peak_bytes", std::to_string(t.peak_bytes()));
    report.emplace_back("input_bytes", std::to_string(input_bytes));
    std::snprintf(buf, sizeof buf, "%.3f", static_cast<double>(t.peak_bytes()) / static_cast<double>(input_bytes));
    report.emplace_back("peak_ratio", buf);
    report.emplace_back("width", std::to_string(img.width()));
    report.emplace_back("height", std::to_string(img.height()));
    report.emplace_back("runs", std::to_string(runs));
    std::cout << format_report(report);
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"cardocr - business card text recognition"};
    app.require_subcommand(1);

    PipelineFlags flags;
    std::string image, dir, pred, dump;
    std::uint64_t seed = 1;
    int count = 100, runs = 1, samples = bundled_samples_per_class;
    SuiteRanges ranges;

    auto* run = app.add_subcommand("run", "recognize the text on a card image (PPM/PGM)");
    run->add_option("image", image, "input image")->required();
    add_pipeline_flags(run, flags);
    run->add_option("--dump-stages", dump, "write per-stage artifacts to this directory");

    auto* synth = app.add_subcommand("synth", "generate a synthetic card suite");
    synth->add_option("dir", dir, "output directory")->required();
    synth->add_option("--seed", seed, "suite seed");
    synth->add_option("--count", count, "number of cards");
    synth->add_option("--skew-min", ranges.skew_min, "minimum card skew in degrees")->check(CLI::Range(-20.0, 20.0));
    synth->add_option("--skew-max", ranges.skew_max, "maximum card skew in degrees")->check(CLI::Range(-20.0, 20.0));
    synth->add_option("--sigma-min", ranges.sigma_min, "minimum Gaussian noise sigma")->check(CLI::NonNegativeNumber);
    synth->add_option("--sigma-max", ranges.sigma_max, "maximum Gaussian noise sigma")->check(CLI::NonNegativeNumber);
    synth->add_option("--salt-pepper", ranges.salt_pepper, "salt-and-pepper probability")->check(CLI::Range(0.0, 1.0));

    auto* sb = app.add_subcommand("store-build", "build a template store from the bundled font");
    sb->add_option("dir", dir, "output directory")->required();
    sb->add_option("--seed", seed, "sample seed")->default_val(bundled_store_seed);
    sb->add_option("--samples", samples, "perturbed samples per class (>= 10)")->check(CLI::Range(templates_per_class, 1000));

    auto* ev = app.add_subcommand("eval", "score predictions or a pipeline run against a suite");
    ev->add_option("suite", dir, "suite directory")->required();
    ev->add_option("--pred", pred, "directory of card_<k>.regions.txt predictions");
    add_pipeline_flags(ev, flags);

    auto* bench = app.add_subcommand("bench", "per-stage timing and peak working memory");
    bench->add_option("image", image, "input image (default: a synthetic 2048x1536 card)");
    bench->add_option("--runs", runs, "runs to average")->check(CLI::PositiveNumber);
    bench->add_option("--seed", seed, "seed of the synthetic card");
    add_pipeline_flags(bench, flags);

    app.add_subcommand("config", "print the configuration reference with defaults");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }

    try {
        if (run->parsed()) return cmd_run(image, flags, dump);
        if (synth->parsed()) {
            if (ranges.skew_max < ranges.skew_min || ranges.sigma_max < ranges.sigma_min)
                throw Failure{usage, "range minimum exceeds maximum"};
            return cmd_synth(dir, seed, count, ranges);
        }
        if (sb->parsed()) return cmd_store_build(dir, seed, samples);
        if (ev->parsed()) return cmd_eval(dir, pred, flags);
        if (bench->parsed()) return cmd_bench(image, flags, runs, seed);
        std::cout << config_reference();
        return ok;
    } catch (const Failure& f) {
        std::cerr << "cardocr: " << f.message << '\n';
        return f.code;
    } catch (const MetricError& e) {
        std::cerr << "cardocr: " << e.what() << '\n';
        return input;
    } catch (const std::exception& e) {
        std::cerr << "cardocr: " << e.what() << '\n';
        return input;
    }
}
