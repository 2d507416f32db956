#pragma once

// Recall / precision / F-measure scoring at region, pixel and character level.

#include <algorithm>
#include <cstdio>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cardocr/image.hpp"
#include "cardocr/recognition.hpp"
#include "cardocr/synth.hpp"

namespace cardocr {

class MetricError : public Error {
public:
    enum class Kind { no_truth_positives, no_predicted_positives, length_mismatch, dimension_mismatch };

    MetricError(Kind kind, const std::string& what) : Error("metrics: " + what), kind_(kind) {}
    Kind kind() const { return kind_; }

private:
    Kind kind_;
};

struct EvalCounts {
    long long tp = 0;
    long long fp = 0;
    long long tn = 0;
    long long fn = 0;

    long long total() const { return tp + fp + tn + fn; }

    EvalCounts& operator+=(const EvalCounts& o) {
        tp += o.tp;
        fp += o.fp;
        tn += o.tn;
        fn += o.fn;
        return *this;
    }
    friend bool operator==(const EvalCounts&, const EvalCounts&) = default;
};

/// Percentages.
struct Metrics {
    double recall = 0;
    double precision = 0;
    double f_measure = 0;
};

/// Harmonic mean of recall and precision (both in percent).
inline double harmonic_f(double recall, double precision) {
    if (recall + precision <= 0) return 0.0;
    return 2.0 * recall * precision / (recall + precision);
}

inline Metrics f_measure(const EvalCounts& c) {
    if (c.tp + c.fn == 0) throw MetricError(MetricError::Kind::no_truth_positives, "recall undefined (tp + fn = 0)");
    if (c.tp + c.fp == 0) throw MetricError(MetricError::Kind::no_predicted_positives, "precision undefined (tp + fp = 0)");
    Metrics m;
    m.recall = 100.0 * static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
    m.precision = 100.0 * static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
    m.f_measure = harmonic_f(m.recall, m.precision);
    return m;
}

inline double overlap_over_union(const Rect& a, const Rect& b) {
    const long long inter = intersect(a, b).area();
    const long long uni = a.area() + b.area() - inter;
    return uni > 0 ? static_cast<double>(inter) / static_cast<double>(uni) : 0.0;
}

inline constexpr double region_match_threshold = 0.5;

/// Predicted TRs are matched one-to-one to truth TRs, greedily by descending
/// overlap-over-union (>= 0.5). Unmatched predictions are FP, unmatched truths
/// FN. A truth NR that no predicted TR overlaps at >= 0.5 counts as TN.
inline EvalCounts region_eval(const std::vector<RegionRecord>& predicted, const std::vector<RegionRecord>& truth) {
    struct Pair {
        double iou;
        std::size_t p, t;
    };
    std::vector<Pair> pairs;
    for (std::size_t p = 0; p < predicted.size(); ++p) {
        if (predicted[p].kind != RegionKind::text) continue;
        for (std::size_t t = 0; t < truth.size(); ++t) {
            if (truth[t].kind != RegionKind::text) continue;
            const double iou = overlap_over_union(predicted[p].rect, truth[t].rect);
            if (iou >= region_match_threshold) pairs.push_back({iou, p, t});
        }
    }
    std::ranges::stable_sort(pairs, [](const Pair& a, const Pair& b) { return a.iou > b.iou; });
    std::vector<bool> p_used(predicted.size(), false), t_used(truth.size(), false);
    EvalCounts c;
    for (const Pair& pr : pairs) {
        if (p_used[pr.p] || t_used[pr.t]) continue;
        p_used[pr.p] = t_used[pr.t] = true;
        ++c.tp;
    }
    for (std::size_t p = 0; p < predicted.size(); ++p)
        if (predicted[p].kind == RegionKind::text && !p_used[p]) ++c.fp;
    for (std::size_t t = 0; t < truth.size(); ++t) {
        if (truth[t].kind == RegionKind::text) {
            if (!t_used[t]) ++c.fn;
            continue;
        }
        const bool claimed = std::ranges::any_of(predicted, [&](const RegionRecord& p) {
            return p.kind == RegionKind::text && overlap_over_union(p.rect, truth[t].rect) >= region_match_threshold;
        });
        if (!claimed) ++c.tn;
    }
    return c;
}

/// Per-pixel confusion with foreground as the positive class.
inline EvalCounts pixel_eval(const BinaryImage& predicted, const BinaryImage& truth) {
    if (predicted.width() != truth.width() || predicted.height() != truth.height())
        throw MetricError(MetricError::Kind::dimension_mismatch, "pixel_eval: image dimensions differ");
    EvalCounts c;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const bool p = predicted.pixels()[i] == Ink::foreground;
        const bool t = truth.pixels()[i] == Ink::foreground;
        if (p && t) ++c.tp;
        else if (p) ++c.fp;
        else if (t) ++c.fn;
        else ++c.tn;
    }
    return c;
}

/// Percentage of aligned positions whose scheme-mapped labels agree.
inline double char_accuracy(std::string_view predicted, std::string_view truth, const ClassScheme& scheme) {
    if (predicted.size() != truth.size())
        throw MetricError(MetricError::Kind::length_mismatch, "char_accuracy: sequences differ in length");
    if (truth.empty()) return 100.0;
    std::size_t ok = 0;
    for (std::size_t i = 0; i < truth.size(); ++i) ok += scheme.map(predicted[i]) == scheme.map(truth[i]);
    return 100.0 * static_cast<double>(ok) / static_cast<double>(truth.size());
}

inline std::string format_percent(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

/// "key=value" lines in the given order.
inline std::string format_report(const std::vector<std::pair<std::string, std::string>>& entries) {
    std::string out;
    for (const auto& [k, v] : entries) out += k + "=" + v + "\n";
    return out;
}

}  // namespace cardocr
