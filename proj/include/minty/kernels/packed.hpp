#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "minty/data_model.hpp"

namespace minty::kernels {

/// Fixed-length bitset over sample rows.
class BitVector {
public:
    BitVector() = default;
    explicit BitVector(std::size_t bits) : bits_(bits), words_((bits + 63) / 64, 0) {}

    std::size_t size() const noexcept { return bits_; }
    std::span<const std::uint64_t> words() const noexcept { return words_; }

    void set(std::size_t i) noexcept { words_[i >> 6] |= std::uint64_t{1} << (i & 63); }
    bool test(std::size_t i) const noexcept { return (words_[i >> 6] >> (i & 63)) & 1U; }

    BitVector& operator|=(const BitVector& o) noexcept {
        for (std::size_t w = 0; w < words_.size(); ++w) words_[w] |= o.words_[w];
        return *this;
    }

    std::size_t count() const noexcept {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    /// |this & ~other|
    std::size_t count_and_not(const BitVector& other) const noexcept {
        std::size_t c = 0;
        for (std::size_t w = 0; w < words_.size(); ++w)
            c += static_cast<std::size_t>(std::popcount(words_[w] & ~other.words_[w]));
        return c;
    }

    /// Sum of values[i] over set bits, accumulated in increasing i.
    double masked_sum(std::span<const double> values) const noexcept {
        double s = 0.0;
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t word = words_[w];
            while (word != 0) {
                const int b = std::countr_zero(word);
                s += values[(w << 6) + static_cast<std::size_t>(b)];
                word &= word - 1;
            }
        }
        return s;
    }

    bool operator==(const BitVector&) const = default;

private:
    std::size_t bits_ = 0;
    std::vector<std::uint64_t> words_;
};

/// Column-wise packed literals: per literal j the rows where it is observed
/// and true, and the rows where it is missing.
class PackedLiterals {
public:
    explicit PackedLiterals(const BinaryDataset& ds);

    std::size_t n() const noexcept { return n_; }
    std::size_t d() const noexcept { return observed_true_.size(); }
    const BitVector& observed_true(std::size_t j) const noexcept { return observed_true_[j]; }
    const BitVector& missing(std::size_t j) const noexcept { return missing_[j]; }

private:
    std::size_t n_;
    std::vector<BitVector> observed_true_;
    std::vector<BitVector> missing_;
};

/// Row sets of a disjunction: any literal observed-true, any literal missing.
/// Activation is any_true; reliance is any_missing & ~any_true.
struct RuleBits {
    BitVector any_true;
    BitVector any_missing;

    explicit RuleBits(std::size_t n) : any_true(n), any_missing(n) {}
    RuleBits(const PackedLiterals& lits, const Rule& rule);

    void add(const PackedLiterals& lits, std::uint32_t j) {
        any_true |= lits.observed_true(j);
        any_missing |= lits.missing(j);
    }
    std::size_t reliance_count() const noexcept { return any_missing.count_and_not(any_true); }
};

} // namespace minty::kernels
