#pragma once

// On-disk template store: "<class 2-digit>_<sample>.pgm" files (foreground = 0)
// plus "manifest.txt" with one "index<TAB>char" line per class.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <regex>
#include <string>
#include <tuple>
#include <vector>

#include "cardocr/pnm.hpp"
#include "cardocr/recognition.hpp"

namespace cardocr {

class StoreError : public Error {
public:
    explicit StoreError(const std::string& what) : Error("template store: " + what) {}
};

inline std::string template_file_name(int class_idx, int sample_idx) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%02d_%d.pgm", class_idx, sample_idx);
    return buf;
}

inline void save_store(const std::filesystem::path& dir, const std::vector<Template>& store) {
    std::filesystem::create_directories(dir);
    std::map<int, int> next_sample;
    for (const Template& t : store) {
        const auto idx = class_index(t.label);
        if (!idx) throw StoreError(std::string("label outside the alphabet: ") + t.label);
        save_pnm_file(dir / template_file_name(*idx, next_sample[*idx]++), t.pattern.to_image());
    }
    std::ofstream m(dir / "manifest.txt", std::ios::binary);
    for (std::size_t i = 0; i < alphabet.size(); ++i) m << i << '\t' << alphabet[i] << '\n';
    if (!m) throw StoreError("cannot write manifest");
}

/// Validates the manifest against the alphabet, every template's size and class,
/// and that each manifest class has at least one template.
inline std::vector<Template> load_store(const std::filesystem::path& dir) {
    std::ifstream m(dir / "manifest.txt", std::ios::binary);
    if (!m) throw StoreError("missing manifest.txt in " + dir.string());
    std::map<int, char> manifest;
    std::string line;
    while (std::getline(m, line)) {
        if (line.empty()) continue;
        const auto tab = line.find('\t');
        if (tab == std::string::npos || tab + 2 != line.size()) throw StoreError("bad manifest line: " + line);
        int idx = -1;
        try {
            idx = std::stoi(line.substr(0, tab));
        } catch (const std::exception&) {
            throw StoreError("bad manifest index: " + line);
        }
        const char ch = line[tab + 1];
        if (idx < 0 || idx >= static_cast<int>(alphabet.size()) || alphabet[static_cast<std::size_t>(idx)] != ch)
            throw StoreError("manifest entry does not match the alphabet: " + line);
        if (!manifest.emplace(idx, ch).second) throw StoreError("duplicate manifest entry: " + line);
    }
    if (manifest.size() != alphabet.size()) throw StoreError("manifest is incomplete");

    static const std::regex name_re(R"((\d{2})_(\d+)\.pgm)");
    std::vector<std::tuple<int, int, std::filesystem::path>> files;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        std::smatch sm;
        const std::string name = entry.path().filename().string();
        if (!std::regex_match(name, sm, name_re)) continue;
        files.emplace_back(std::stoi(sm[1]), std::stoi(sm[2]), entry.path());
    }
    std::ranges::sort(files);

    std::vector<Template> store;
    for (const auto& [cls, sample, path] : files) {
        const auto it = manifest.find(cls);
        if (it == manifest.end()) throw StoreError("template of unknown class: " + path.filename().string());
        GrayImage g;
        try {
            auto any = load_pnm_file(path);
            if (!std::holds_alternative<GrayImage>(any)) throw StoreError("template is not PGM: " + path.string());
            g = std::get<GrayImage>(std::move(any));
        } catch (const PnmError& e) {
            throw StoreError(path.filename().string() + ": " + e.what());
        }
        if (g.width() != pattern_side || g.height() != pattern_side)
            throw StoreError("template is not 48x48: " + path.filename().string());
        BinaryImage b(pattern_side, pattern_side);
        std::ranges::transform(g.pixels(), b.pixels().begin(),
                               [](std::uint8_t v) { return v < 128 ? Ink::foreground : Ink::background; });
        store.push_back({pattern_from_image(b), it->second, path.filename().string()});
    }
    for (const auto& [idx, ch] : manifest) {
        if (std::ranges::none_of(store, [ch = ch](const Template& t) { return t.label == ch; }))
            throw StoreError(std::string("no template for class '") + ch + "'");
    }
    return store;
}

}  // namespace cardocr
