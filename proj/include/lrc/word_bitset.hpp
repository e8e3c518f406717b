// Word-blocked bit array with popcount accounting.
#pragma once

#include <bit>
#include <cassert>
#include <cstdint>
#include <vector>

namespace lrc {

struct WordBitset {
    int nbits = 0;
    std::vector<std::uint64_t> words;

    WordBitset() = default;
    explicit WordBitset(int bits) : nbits(bits), words((bits + 63) / 64, 0) {}

    void set(int i) { words[i >> 6] |= std::uint64_t{1} << (i & 63); }
    bool test(int i) const { return (words[i >> 6] >> (i & 63)) & 1u; }

    int count() const {
        int s = 0;
        for (std::uint64_t w : words) s += std::popcount(w);
        return s;
    }

    void or_with(const WordBitset& o) {
        assert(nbits == o.nbits);
        for (size_t i = 0; i < words.size(); ++i) words[i] |= o.words[i];
    }

    // popcount(this & ~mask): how many bits this set adds on top of mask.
    int count_and_not(const WordBitset& mask) const {
        assert(nbits == mask.nbits);
        int s = 0;
        for (size_t i = 0; i < words.size(); ++i) s += std::popcount(words[i] & ~mask.words[i]);
        return s;
    }

    template <typename F>
    void for_each_set(F&& f) const {
        for (size_t wi = 0; wi < words.size(); ++wi) {
            std::uint64_t w = words[wi];
            while (w) {
                f(static_cast<int>(wi * 64) + std::countr_zero(w));
                w &= w - 1;
            }
        }
    }

    bool operator==(const WordBitset&) const = default;
};

}  // namespace lrc
