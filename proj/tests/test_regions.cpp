#include <gtest/gtest.h>

#include <random>
#include <set>
#include <sstream>

#include "cardocr/regions.hpp"
#include "cardocr/synth.hpp"

using namespace cardocr;

namespace {

// Reference connected-component labelling: repeated relaxation of the minimum
// label over 8-neighbourhoods until nothing changes.
std::vector<int> relaxation_labels(const BlockGrid& g) {
    std::vector<int> lab(g.labels.size(), -1);
    for (std::size_t i = 0; i < lab.size(); ++i)
        if (g.labels[i] == BlockLabel::information) lab[i] = static_cast<int>(i);
    bool changed = true;
    while (changed) {
        changed = false;
        for (int r = 0; r < g.rows; ++r)
            for (int c = 0; c < g.cols; ++c) {
                const std::size_t i = static_cast<std::size_t>(r) * g.cols + c;
                if (lab[i] < 0) continue;
                for (int dr = -1; dr <= 1; ++dr)
                    for (int dc = -1; dc <= 1; ++dc) {
                        const int nr = r + dr, nc = c + dc;
                        if (nr < 0 || nc < 0 || nr >= g.rows || nc >= g.cols) continue;
                        const std::size_t j = static_cast<std::size_t>(nr) * g.cols + nc;
                        if (lab[j] >= 0 && lab[j] < lab[i]) {
                            lab[i] = lab[j];
                            changed = true;
                        }
                    }
            }
    }
    return lab;
}

RegionFeatures features(double aspect, double density, double coverage, int area) {
    RegionFeatures f;
    f.aspect_ratio = aspect;
    f.info_pixel_density = density;
    f.coverage_ratio = coverage;
    f.area = area;
    return f;
}

}  // namespace

TEST(Partition, ExactTiling) {
    const BlockGrid g = partition_blocks(32, 32, 16, 16);
    EXPECT_EQ(g.rows, 2);
    EXPECT_EQ(g.cols, 2);
}

TEST(Partition, EdgeBlocksAreTruncated) {
    const BlockGrid g = partition_blocks(33, 32, 16, 16);
    EXPECT_EQ(g.rows, 2);
    EXPECT_EQ(g.cols, 3);
    EXPECT_EQ(g.block_rect(0, 2).w, 1);
}

TEST(Partition, BlocksCoverEveryPixelOnce) {
    for (int w = 4; w <= 40; w += 3)
        for (int h = 4; h <= 40; h += 5)
            for (int bh : {4, 5, 7})
                for (int bw : {4, 6}) {
                    if (bh > h || bw > w) continue;
                    const BlockGrid g = partition_blocks(w, h, bh, bw);
                    std::vector<int> hits(static_cast<std::size_t>(w * h), 0);
                    long long total = 0;
                    for (int r = 0; r < g.rows; ++r)
                        for (int c = 0; c < g.cols; ++c) {
                            const Rect b = g.block_rect(r, c);
                            total += b.area();
                            for (int y = b.y; y < b.bottom(); ++y)
                                for (int x = b.x; x < b.right(); ++x) ++hits[static_cast<std::size_t>(y * w + x)];
                        }
                    EXPECT_EQ(total, static_cast<long long>(w) * h);
                    EXPECT_TRUE(std::ranges::all_of(hits, [](int n) { return n == 1; }));
                }
}

TEST(Partition, RejectsBadBlockSizes) {
    EXPECT_THROW(partition_blocks(32, 32, 3, 16), Error);
    EXPECT_THROW(partition_blocks(10, 10, 16, 16), Error);
}

TEST(BlockLabel, ConstantIsBackground) {
    const GrayImage img(16, 16, 128);
    EXPECT_EQ(classify_block(img, img.bounds(), 40), BlockLabel::background);
}

TEST(BlockLabel, FullRangeIsInformationForAnyThreshold) {
    GrayImage img(16, 16, 128);
    img(0, 0) = 0;
    img(5, 5) = 255;
    for (int t = 0; t <= 255; ++t) EXPECT_EQ(classify_block(img, img.bounds(), t), BlockLabel::information);
}

TEST(BlockLabel, SmallVariationIsBackground) {
    GrayImage img(16, 16, 120);
    img(1, 1) = 100;
    img(2, 2) = 135;
    EXPECT_EQ(classify_block(img, img.bounds(), 40), BlockLabel::background);
}

TEST(BlockLabel, RaisingThresholdNeverCreatesInformation) {
    std::mt19937 rng(9);
    for (int trial = 0; trial < 300; ++trial) {
        GrayImage img(8, 8);
        const int base = static_cast<int>(rng() % 200), spread = static_cast<int>(rng() % 56);
        for (auto& v : img.pixels()) v = static_cast<std::uint8_t>(base + static_cast<int>(rng() % (spread + 1)));
        BlockLabel prev = BlockLabel::information;
        for (int t = 0; t <= 255; t += 5) {
            const BlockLabel now = classify_block(img, img.bounds(), t);
            if (prev == BlockLabel::background) {
                ASSERT_EQ(now, BlockLabel::background);
            }
            prev = now;
        }
    }
}

TEST(Assemble, AllBackgroundGivesNothing) {
    BlockGrid g = partition_blocks(64, 64, 16, 16);
    EXPECT_TRUE(assemble_regions(g).empty());
}

TEST(Assemble, SingleBlock) {
    BlockGrid g = partition_blocks(64, 64, 16, 16);
    g.at(1, 2) = BlockLabel::information;
    const auto regions = assemble_regions(g);
    ASSERT_EQ(regions.size(), 1u);
    EXPECT_EQ(regions[0].blocks.size(), 1u);
    EXPECT_EQ(regions[0].bbox, (Rect{32, 16, 16, 16}));
}

TEST(Assemble, DiagonalNeighboursJoin) {
    BlockGrid g = partition_blocks(64, 64, 16, 16);
    g.at(0, 0) = BlockLabel::information;
    g.at(1, 1) = BlockLabel::information;
    EXPECT_EQ(assemble_regions(g).size(), 1u);
}

TEST(Assemble, MatchesRelaxationOracleOnRandomGrids) {
    std::mt19937 rng(21);
    for (int trial = 0; trial < 400; ++trial) {
        const int rows = 1 + static_cast<int>(rng() % 9), cols = 1 + static_cast<int>(rng() % 9);
        BlockGrid g = partition_blocks(cols * 4, rows * 4, 4, 4);
        const double p = 0.2 + 0.5 * (rng() % 100) / 100.0;
        for (auto& l : g.labels) l = (rng() % 1000) < p * 1000 ? BlockLabel::information : BlockLabel::background;

        const std::vector<int> oracle = relaxation_labels(g);
        const auto regions = assemble_regions(g);
        std::set<int> oracle_ids;
        for (int v : oracle)
            if (v >= 0) oracle_ids.insert(v);
        ASSERT_EQ(regions.size(), oracle_ids.size());

        std::vector<int> seen(g.labels.size(), 0);
        for (const Region& reg : regions) {
            const int id = oracle[static_cast<std::size_t>(reg.blocks[0].row) * cols + reg.blocks[0].col];
            std::size_t expected_size = 0;
            for (int v : oracle) expected_size += v == id;
            ASSERT_EQ(reg.blocks.size(), expected_size);
            for (const BlockCoord& b : reg.blocks) {
                const std::size_t i = static_cast<std::size_t>(b.row) * cols + b.col;
                ASSERT_EQ(oracle[i], id);
                ASSERT_EQ(++seen[i], 1) << "block in two regions";
            }
        }
    }
}

TEST(Assemble, InteriorRegionAreaIsBlockMultiple) {
    BlockGrid g = partition_blocks(100, 100, 16, 16);
    g.at(1, 1) = g.at(1, 2) = g.at(2, 3) = BlockLabel::information;
    const auto regions = assemble_regions(g);
    ASSERT_EQ(regions.size(), 1u);
    long long pixels = 0;
    for (const auto& b : regions[0].blocks) pixels += g.block_rect(b.row, b.col).area();
    EXPECT_EQ(pixels % (16 * 16), 0);
}

TEST(ClassifyRegion, TooSmallIsNonText) {
    EXPECT_EQ(classify_region(features(6.0, 0.15, 1.0, 1), RegionConfig{}), RegionKind::non_text);
}

TEST(ClassifyRegion, ElongatedSparseIsText) {
    EXPECT_EQ(classify_region(features(6.0, 0.15, 0.9, 12), RegionConfig{}), RegionKind::text);
}

TEST(ClassifyRegion, SquareDenseIsNonText) {
    EXPECT_EQ(classify_region(features(1.0, 0.85, 1.0, 30), RegionConfig{}), RegionKind::non_text);
}

TEST(ClassifyRegion, EachRuleCanVeto) {
    const RegionConfig cfg;
    EXPECT_EQ(classify_region(features(1.1, 0.2, 0.9, 10), cfg), RegionKind::non_text);
    EXPECT_EQ(classify_region(features(41, 0.2, 0.9, 10), cfg), RegionKind::non_text);
    EXPECT_EQ(classify_region(features(5, 0.02, 0.9, 10), cfg), RegionKind::non_text);
    EXPECT_EQ(classify_region(features(5, 0.61, 0.9, 10), cfg), RegionKind::non_text);
    EXPECT_EQ(classify_region(features(5, 0.2, 0.49, 10), cfg), RegionKind::non_text);
    EXPECT_EQ(classify_region(features(5, 0.2, 0.5, 4), cfg), RegionKind::text);
}

TEST(Features, DensityCountsPixelsBelowMidpoint) {
    GrayImage img(64, 16, 200);
    for (int x = 0; x < 16; ++x) img(x, 0) = 0;  // 16 dark pixels
    BlockGrid g = partition_blocks(img, 16, 16);
    classify_blocks(img, g, 40);
    for (int c = 0; c < 4; ++c) g.at(0, c) = BlockLabel::information;
    const auto regions = assemble_regions(g);
    ASSERT_EQ(regions.size(), 1u);
    const RegionFeatures f = compute_features(img, g, regions[0]);
    EXPECT_DOUBLE_EQ(f.info_pixel_density, 16.0 / (64 * 16));
    EXPECT_DOUBLE_EQ(f.aspect_ratio, 4.0);
    EXPECT_DOUBLE_EQ(f.coverage_ratio, 1.0);
    EXPECT_EQ(f.area, 4);
}

TEST(Extract, BlankImageHasNoRegions) {
    EXPECT_TRUE(extract_text_regions(GrayImage(200, 100, 230), RegionConfig{}).empty());
    EXPECT_TRUE(extract_text_regions(GrayImage(8, 8, 230), RegionConfig{}).empty());
}

TEST(Extract, TwoBandsAndALogo) {
    CardSpec spec;
    spec.width = 800;
    spec.height = 500;
    spec.bands = {{"Business Card 2010", 40, 40, 4}, {"ocr@mail.example.net", 40, 200, 4}};
    const Card plain = render_card(spec);
    const auto regions = extract_text_regions(to_grayscale(plain.image), RegionConfig{});
    ASSERT_EQ(regions.size(), 2u);
    for (std::size_t i = 0; i < 2; ++i) {
        const Rect truth = plain.truth.regions[i].rect;
        const Rect got = regions[i].region.bbox;
        EXPECT_LE(std::abs(got.x - truth.x), 16);
        EXPECT_LE(std::abs(got.y - truth.y), 16);
        EXPECT_LE(std::abs(got.right() - truth.right()), 16);
        EXPECT_LE(std::abs(got.bottom() - truth.bottom()), 16);
        EXPECT_EQ(regions[i].crop.width(), got.w);
    }

    spec.decoys.push_back({Decoy::Shape::rect, {566, 300, 160, 160}, {30, 60, 140}});
    const Card logo = render_card(spec);
    const auto all = find_regions(to_grayscale(logo.image), RegionConfig{});
    int text = 0;
    bool square_found = false;
    for (const Region& r : all) {
        if (r.kind == RegionKind::text) ++text;
        if (!intersect(r.bbox, Rect{566, 300, 160, 160}).empty()) {
            square_found = true;
            EXPECT_EQ(r.kind, RegionKind::non_text);
        }
    }
    EXPECT_EQ(text, 2);
    EXPECT_TRUE(square_found);
}

TEST(Extract, RegionsAreOrderedAndDisjoint) {
    Rng rng(77);
    const Card card = render_card(random_card_spec(rng, SuiteRanges{}));
    const auto regions = find_regions(to_grayscale(card.image), RegionConfig{});
    std::set<std::pair<int, int>> used;
    for (std::size_t i = 0; i < regions.size(); ++i) {
        if (i > 0) {
            const Rect a = regions[i - 1].bbox, b = regions[i].bbox;
            EXPECT_TRUE(a.y < b.y || (a.y == b.y && a.x <= b.x));
        }
        for (const auto& b : regions[i].blocks) EXPECT_TRUE(used.insert({b.row, b.col}).second);
    }
}

TEST(Extract, IsDeterministic) {
    Rng rng(78);
    const GrayImage img = to_grayscale(render_card(random_card_spec(rng, SuiteRanges{})).image);
    std::ostringstream a, b;
    write_region_dump(a, find_regions(img, RegionConfig{}));
    write_region_dump(b, find_regions(img, RegionConfig{}));
    EXPECT_EQ(a.str(), b.str());
}

TEST(RegionDump, FixedFieldOrder) {
    RegionFeatures f = features(2.5, 0.125, 0.75, 12);
    EXPECT_EQ(format_region_line({16, 32, 80, 32}, RegionKind::text, f), "16 32 80 32 TR 12 2.5000 0.1250 0.7500");
    EXPECT_EQ(format_region_line({0, 0, 16, 16}, RegionKind::non_text, f), "0 0 16 16 NR 12 2.5000 0.1250 0.7500");
}
