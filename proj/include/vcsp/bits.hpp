#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>

// Word-level helpers for the fixed-capacity bitsets used by constraints and live domains.
namespace vcsp::bits {

using Word = std::uint64_t;
inline constexpr std::size_t word_bits = 64;

constexpr std::size_t words_for(std::size_t n) { return (n + word_bits - 1) / word_bits; }

inline bool test(std::span<const Word> w, std::size_t i) {
    return (w[i / word_bits] >> (i % word_bits)) & 1u;
}
inline void set(std::span<Word> w, std::size_t i) { w[i / word_bits] |= Word{1} << (i % word_bits); }
inline void reset(std::span<Word> w, std::size_t i) { w[i / word_bits] &= ~(Word{1} << (i % word_bits)); }

inline bool intersects(std::span<const Word> a, std::span<const Word> b) {
    for (std::size_t k = 0; k < a.size(); ++k)
        if (a[k] & b[k]) return true;
    return false;
}

inline std::size_t count_and(std::span<const Word> a, std::span<const Word> b) {
    std::size_t n = 0;
    for (std::size_t k = 0; k < a.size(); ++k) n += static_cast<std::size_t>(std::popcount(a[k] & b[k]));
    return n;
}

/// Calls f(index) for every set bit, ascending.
template <typename F>
void for_each(std::span<const Word> w, F&& f) {
    for (std::size_t k = 0; k < w.size(); ++k) {
        Word x = w[k];
        while (x) {
            const auto bit = static_cast<std::size_t>(std::countr_zero(x));
            f(k * word_bits + bit);
            x &= x - 1;
        }
    }
}

}  // namespace vcsp::bits
