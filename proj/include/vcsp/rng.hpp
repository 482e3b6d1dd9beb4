#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <utility>

namespace vcsp {

/// Seeded random source shared by the generators and the randomized heuristics.
///
/// The raw stream is std::mt19937_64, whose output sequence is fixed by the C++
/// standard. Bounded integers use rejection sampling on the raw 64-bit words and
/// shuffles are Fisher-Yates from the back, so the derived sequences are
/// reproducible in any language that implements MT19937-64. Standard library
/// distributions are avoided because their algorithms are implementation-defined.
class Rng {
public:
    static constexpr std::string_view algorithm = "mt19937_64-rejection-v1";

    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound) {
        // Accepted words [threshold, 2^64) span a whole multiple of bound.
        const std::uint64_t threshold = (0 - bound) % bound;
        std::uint64_t x = engine_();
        while (x < threshold) x = engine_();
        return x % bound;
    }

    /// Uniform double in [0, 1) with 53 random bits.
    double unit() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    template <typename T>
    void shuffle(std::span<T> items) {
        for (std::size_t i = items.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(items[i - 1], items[j]);
        }
    }

    /// Seed for an independent sub-stream, via one SplitMix64 step over seed and stream id.
    static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
        std::uint64_t z = seed + 0x9E3779B97F4A7C15ull * (stream + 1);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace vcsp
