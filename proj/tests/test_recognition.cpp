#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "cardocr/synth.hpp"
#include "cardocr/template_store.hpp"

using namespace cardocr;
namespace fs = std::filesystem;

namespace {

Pattern random_pattern(std::mt19937& rng, unsigned per_mille = 500) {
    Pattern p;
    for (int y = 0; y < pattern_side; ++y)
        for (int x = 0; x < pattern_side; ++x) p.set(x, y, rng() % 1000 < per_mille);
    return p;
}

int cellwise_difference(const Pattern& a, const Pattern& b) {
    int d = 0;
    for (int y = 0; y < pattern_side; ++y)
        for (int x = 0; x < pattern_side; ++x) d += std::abs(int(a.at(x, y)) - int(b.at(x, y)));
    return d;
}

LabeledGlyph sample(char label, const BinaryImage& img, const std::string& id = "") { return {label, img, id}; }

BinaryImage bar(int w, int h, int ink_cols) {
    BinaryImage b(w, h, Ink::background);
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < ink_cols; ++x) b(x, y) = Ink::foreground;
    b(w - 1, h - 1) = Ink::foreground;  // keeps the tight box at w x h
    return b;
}

struct TempDir {
    fs::path path;
    TempDir() {
        static int n = 0;
        path = fs::temp_directory_path() / ("cardocr_rec_" + std::to_string(::getpid()) + "_" + std::to_string(n++));
        fs::remove_all(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

const std::vector<Template>& store() {
    static const std::vector<Template> s = bundled_store();
    return s;
}

}  // namespace

TEST(Normalize, TightFullSizeGlyphIsUnchanged) {
    std::mt19937 rng(31);
    Pattern p = random_pattern(rng);
    for (int i = 0; i < pattern_side; ++i) p.set(i, 0), p.set(0, i), p.set(i, pattern_side - 1), p.set(pattern_side - 1, i);
    EXPECT_EQ(normalize_glyph(p.to_image()), p);
}

TEST(Normalize, SolidBlockStaysSolid) {
    BinaryImage img(14, 26, Ink::background);
    for (int y = 3; y < 23; ++y)
        for (int x = 2; x < 12; ++x) img(x, y) = Ink::foreground;
    EXPECT_EQ(normalize_glyph(img).ink(), static_cast<std::size_t>(pattern_cells));
}

TEST(Normalize, CheckerboardBecomesQuadrants) {
    BinaryImage img(2, 2, Ink::background);
    img(0, 0) = img(1, 1) = Ink::foreground;
    const Pattern p = normalize_glyph(img);
    for (int y = 0; y < pattern_side; ++y)
        for (int x = 0; x < pattern_side; ++x) ASSERT_EQ(p.at(x, y), (x < 24) == (y < 24)) << x << "," << y;
}

TEST(Normalize, MatchesNearestNeighbourOracle) {
    std::mt19937 rng(32);
    for (int t = 0; t < 50; ++t) {
        const int w = 1 + static_cast<int>(rng() % 70), h = 1 + static_cast<int>(rng() % 70);
        BinaryImage img(w, h, Ink::background);
        for (auto& v : img.pixels()) v = rng() % 2 ? Ink::foreground : Ink::background;
        img(0, 0) = img(w - 1, h - 1) = Ink::foreground;
        const Pattern p = normalize_glyph(img);
        for (int y = 0; y < pattern_side; ++y)
            for (int x = 0; x < pattern_side; ++x) {
                const int sx = static_cast<int>(std::floor((x + 0.5) * w / pattern_side));
                const int sy = static_cast<int>(std::floor((y + 0.5) * h / pattern_side));
                ASSERT_EQ(p.at(x, y), img(sx, sy) == Ink::foreground);
            }
    }
}

TEST(Normalize, BlankGlyphIsAnError) { EXPECT_THROW(normalize_glyph(BinaryImage(5, 5)), RecognitionError); }

TEST(Dissimilarity, Examples) {
    std::mt19937 rng(33);
    const Pattern p = random_pattern(rng);
    EXPECT_EQ(dissimilarity(p, p), 0);
    EXPECT_EQ(dissimilarity(p, p.complement()), pattern_cells);
    EXPECT_EQ(pattern_cells, 2304);
    Pattern q = p;
    for (int k = 0; k < 7; ++k) q.set(k * 5, k * 6, !p.at(k * 5, k * 6));
    EXPECT_EQ(dissimilarity(p, q), 7);
}

TEST(Dissimilarity, MatchesCellwiseSumAndIsAMetric) {
    std::mt19937 rng(34);
    for (int t = 0; t < 200; ++t) {
        const Pattern a = random_pattern(rng, rng() % 1000), b = random_pattern(rng, rng() % 1000),
                      c = random_pattern(rng, rng() % 1000);
        ASSERT_EQ(dissimilarity(a, b), cellwise_difference(a, b));
        ASSERT_EQ(dissimilarity(a, b), dissimilarity(b, a));
        ASSERT_LE(dissimilarity(a, c), dissimilarity(a, b) + dissimilarity(b, c));
        ASSERT_EQ(dissimilarity(a, b) == 0, a == b);
        ASSERT_GE(dissimilarity(a, b), 0);
        ASSERT_LE(dissimilarity(a, b), pattern_cells);
    }
}

TEST(Scheme, MergeTableAndCounts) {
    const ClassScheme merged{SchemeMode::merged}, full{SchemeMode::full};
    EXPECT_EQ(full.class_count(), 73);
    EXPECT_EQ(merged.class_count(), 63);
    for (auto [from, to] : {std::pair{'c', 'C'}, {'0', 'O'}, {'o', 'O'}, {'s', 'S'}, {'u', 'U'}, {'v', 'V'}, {'w', 'W'},
                            {'z', 'Z'}, {'l', 'I'}, {'1', 'I'}, {'I', 'I'}, {'a', 'a'}, {'@', '@'}})
        EXPECT_EQ(merged.map(from), to) << from;
    for (char c : alphabet) {
        EXPECT_EQ(merged.map(merged.map(c)), merged.map(c));
        EXPECT_EQ(full.map(c), c);
    }
}

TEST(Classify, StoredTemplatesMatchThemselves) {
    for (const ClassScheme scheme : {ClassScheme{SchemeMode::full}, ClassScheme{SchemeMode::merged}}) {
        std::string mislabeled;
        for (const Template& t : store()) {
            const Classification c = classify(t.pattern, store(), scheme);
            ASSERT_EQ(c.score, 0);
            if (c.label != scheme.map(t.label)) mislabeled += t.label;
        }
        EXPECT_EQ(mislabeled, "") << "templates won by another class";
    }
}

TEST(Classify, PeriodAndHyphenStayApart) {
    // Stretching to 48x48 erases aspect ratio, so a square period would match
    // the hyphen exactly; the rounded dot keeps its four corner notches.
    const int d = dissimilarity(normalize_glyph(font_glyph('.').bits), normalize_glyph(font_glyph('-').bits));
    EXPECT_EQ(d, 4 * 12 * 12);
}

TEST(Classify, SmallLMapsToCapitalI) {
    const auto it = std::ranges::find_if(store(), [](const Template& t) { return t.label == 'l'; });
    ASSERT_NE(it, store().end());
    EXPECT_EQ(classify(it->pattern, store(), {SchemeMode::merged}).label, 'I');
}

TEST(Classify, MatchesExhaustiveOracleOnSmallStores) {
    std::mt19937 rng(35);
    for (int t = 0; t < 200; ++t) {
        std::vector<Template> small;
        for (int k = 0; k < 5; ++k) small.push_back({random_pattern(rng), alphabet[rng() % alphabet.size()], ""});
        if (t % 4 == 0) small[3].pattern = small[1].pattern;  // exact tie
        const Pattern probe = random_pattern(rng);
        int best = pattern_cells + 1;
        std::size_t win = 0;
        for (std::size_t i = 0; i < small.size(); ++i)
            if (cellwise_difference(probe, small[i].pattern) < best) best = cellwise_difference(probe, small[i].pattern), win = i;
        const Classification c = classify(probe, small, {SchemeMode::full});
        ASSERT_EQ(c.score, best);
        ASSERT_EQ(c.template_index, win);
        ASSERT_EQ(c.label, small[win].label);
    }
}

TEST(Classify, TemplateOrderDoesNotChangeWinningScore) {
    std::mt19937 rng(36);
    std::vector<Template> small;
    for (int k = 0; k < 12; ++k) small.push_back({random_pattern(rng), alphabet[static_cast<std::size_t>(k)], ""});
    for (int t = 0; t < 50; ++t) {
        const Pattern probe = random_pattern(rng);
        const int score = classify(probe, small, {}).score;
        auto shuffled = small;
        std::shuffle(shuffled.begin(), shuffled.end(), rng);
        ASSERT_EQ(classify(probe, shuffled, {}).score, score);
    }
}

TEST(Classify, EmptyStoreIsAnError) { EXPECT_THROW(classify(Pattern{}, {}, {}), RecognitionError); }

TEST(BuildStore, KeepsExactlyTenOfTen) {
    std::vector<LabeledGlyph> s;
    for (int k = 0; k < 10; ++k) s.push_back(sample('A', bar(20, 20, 2 + k), "a" + std::to_string(k)));
    const auto built = build_store(s);
    ASSERT_EQ(built.size(), 10u);
    for (int k = 0; k < 10; ++k) EXPECT_EQ(built[k].source_id, "a" + std::to_string(k));
}

TEST(BuildStore, IdenticalSamplesKeepTen) {
    std::vector<LabeledGlyph> s(12, sample('B', bar(10, 30, 4)));
    const auto built = build_store(s);
    ASSERT_EQ(built.size(), 10u);
    for (const auto& t : built) EXPECT_EQ(t.label, 'B');
}

TEST(BuildStore, DropsTheOutliers) {
    std::vector<LabeledGlyph> s;
    for (int k = 0; k < 10; ++k) s.push_back(sample('x', bar(24, 24, 12), "typical"));
    s.insert(s.begin() + 3, sample('x', bar(24, 24, 1), "thin"));
    s.push_back(sample('x', bar(24, 24, 23), "wide"));
    for (const auto& t : build_store(s)) EXPECT_EQ(t.source_id, "typical");
}

TEST(BuildStore, FullAlphabetGives730) {
    EXPECT_EQ(store().size(), 730u);
    for (std::size_t i = 0; i < store().size(); ++i) EXPECT_EQ(store()[i].label, alphabet[i / 10]);
}

TEST(BuildStore, TooFewSamplesIsAnError) {
    std::vector<LabeledGlyph> s(9, sample('C', bar(8, 8, 3)));
    EXPECT_THROW(build_store(s), RecognitionError);
    EXPECT_THROW(build_store({sample('%', bar(8, 8, 3))}, 1), RecognitionError);
}

TEST(Transcribe, Examples) {
    EXPECT_EQ(transcribe({{{{'A', 0}}}}), "A");
    const RecognizedLine line{{'J', 0}, {'U', 0}, {'2', 1}, {'O', 1}, {'I', 1}, {'O', 1}};
    EXPECT_EQ(transcribe({{line}}), "JU 2OIO");
    const RecognizedLine ju{{'J', 0}, {'U', 0}, {'2', 1}, {'0', 1}, {'1', 1}, {'0', 1}};
    EXPECT_EQ(transcribe({{ju}}), "JU 2010");
    EXPECT_EQ(transcribe({{{{'a', 0}}, {{'b', 0}}}}), "a\nb");
    EXPECT_EQ(transcribe({{{{'a', 0}}}, {{{'b', 0}}}}), "a\n\nb");
    EXPECT_EQ(transcribe({}), "");
}

TEST(Store, SaveLoadRoundTrip) {
    TempDir dir;
    save_store(dir.path, store());
    EXPECT_TRUE(fs::exists(dir.path / "manifest.txt"));
    EXPECT_TRUE(fs::exists(dir.path / "72_9.pgm"));
    const auto loaded = load_store(dir.path);
    ASSERT_EQ(loaded.size(), store().size());
    for (std::size_t i = 0; i < loaded.size(); ++i) {
        EXPECT_EQ(loaded[i].pattern, store()[i].pattern);
        EXPECT_EQ(loaded[i].label, store()[i].label);
    }
}

TEST(Store, LoadRejectsBadStores) {
    TempDir dir;
    EXPECT_THROW(load_store(dir.path), StoreError);  // missing

    save_store(dir.path, store());
    fs::remove(dir.path / "05_0.pgm");
    EXPECT_NO_THROW(load_store(dir.path));
    for (int k = 1; k < 10; ++k) fs::remove(dir.path / template_file_name(5, k));
    EXPECT_THROW(load_store(dir.path), StoreError);  // class with no template

    save_store(dir.path, store());
    save_pnm_file(dir.path / "07_3.pgm", GrayImage(47, 48, 0));
    EXPECT_THROW(load_store(dir.path), StoreError);  // wrong size

    save_store(dir.path, store());
    {
        std::ofstream m(dir.path / "manifest.txt", std::ios::app);
        m << "80\t%\n";
    }
    EXPECT_THROW(load_store(dir.path), StoreError);  // manifest outside the alphabet

    save_store(dir.path, store());
    {
        std::ofstream m(dir.path / "manifest.txt", std::ios::trunc);
        m << "0\t#\n";
    }
    EXPECT_THROW(load_store(dir.path), StoreError);  // incomplete manifest
}
