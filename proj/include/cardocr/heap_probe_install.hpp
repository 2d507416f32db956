#pragma once

// Include from exactly one translation unit of an executable to turn on heap
// accounting (see heap_probe.hpp). Replaces the unaligned global operator
// new/delete family; each block carries a 16-byte size header.

#include <cstdlib>
#include <new>

#include "cardocr/heap_probe.hpp"

namespace cardocr::heap::detail {

inline constexpr std::size_t header = 16;

inline void* allocate(std::size_t n) {
    void* raw = std::malloc(n + header);
    if (!raw) throw std::bad_alloc();
    *static_cast<std::size_t*>(raw) = n;
    note_alloc(n);
    installed.store(true, std::memory_order_relaxed);
    return static_cast<char*>(raw) + header;
}

inline void release(void* p) noexcept {
    if (!p) return;
    void* raw = static_cast<char*>(p) - header;
    note_free(*static_cast<std::size_t*>(raw));
    std::free(raw);
}

}  // namespace cardocr::heap::detail

void* operator new(std::size_t n) { return cardocr::heap::detail::allocate(n); }
void* operator new[](std::size_t n) { return cardocr::heap::detail::allocate(n); }
void* operator new(std::size_t n, const std::nothrow_t&) noexcept {
    try {
        return cardocr::heap::detail::allocate(n);
    } catch (...) {
        return nullptr;
    }
}
void* operator new[](std::size_t n, const std::nothrow_t&) noexcept {
    try {
        return cardocr::heap::detail::allocate(n);
    } catch (...) {
        return nullptr;
    }
}
void operator delete(void* p) noexcept { cardocr::heap::detail::release(p); }
void operator delete[](void* p) noexcept { cardocr::heap::detail::release(p); }
void operator delete(void* p, std::size_t) noexcept { cardocr::heap::detail::release(p); }
void operator delete[](void* p, std::size_t) noexcept { cardocr::heap::detail::release(p); }
void operator delete(void* p, const std::nothrow_t&) noexcept { cardocr::heap::detail::release(p); }
void operator delete[](void* p, const std::nothrow_t&) noexcept { cardocr::heap::detail::release(p); }
