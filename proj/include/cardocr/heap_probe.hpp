#pragma once

// Live/peak heap byte counters. The counters only move when a translation unit
// of the program includes "cardocr/heap_probe_install.hpp", which replaces the
// global allocation functions.

#include <atomic>
#include <cstddef>

namespace cardocr::heap {

inline std::atomic<long long> live_bytes{0};
inline std::atomic<long long> peak_bytes{0};
inline std::atomic<bool> installed{false};

inline void note_alloc(std::size_t n) {
    const long long now = live_bytes.fetch_add(static_cast<long long>(n), std::memory_order_relaxed) + static_cast<long long>(n);
    long long prev = peak_bytes.load(std::memory_order_relaxed);
    while (now > prev && !peak_bytes.compare_exchange_weak(prev, now, std::memory_order_relaxed)) {
    }
}

inline void note_free(std::size_t n) { live_bytes.fetch_sub(static_cast<long long>(n), std::memory_order_relaxed); }

inline long long live() { return live_bytes.load(std::memory_order_relaxed); }

/// Restarts peak tracking from the current live size.
inline void reset_peak() { peak_bytes.store(live(), std::memory_order_relaxed); }
inline long long peak() { return peak_bytes.load(std::memory_order_relaxed); }

}  // namespace cardocr::heap
