#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "minty/data_model.hpp"

namespace minty {

/// Replacement-pair benchmark: base features 0..c-1 and their replacements
/// c..2c-1, where feature c+i equals feature i with probability 1 - delta.
struct PairSpec {
    std::size_t n = 5000;
    std::size_t c = 30;
    double delta = 0.1;
    std::vector<double> beta;  // length 2c; empty = default_pair_beta(2c, seed)
    double sigma = 1.0;
    double base_p = 0.5;
    std::uint64_t seed = 0;

    std::size_t d() const noexcept { return 2 * c; }
    void validate() const;
};

/// |N(0, 1)| draws, fixed per seed.
std::vector<double> default_pair_beta(std::size_t d, std::uint64_t seed);

struct CompleteData {
    BitMatrix x;
    std::vector<double> y;
    std::vector<std::string> names;
};

/// y = beta . x + N(0, sigma^2)
CompleteData gen_replacement_pairs(const PairSpec& spec);

/// Per pair one categorical draw: base missing (q), replacement missing (q) or
/// both observed (1 - 2q). Never both missing. Requires q <= 0.5.
BitMatrix gen_pair_mask(const BitMatrix& x_complete, double q, std::uint64_t seed);

inline constexpr std::size_t toy_columns = 15;

/// Complete toy data: 15 Bernoulli(0.5) columns, column 4 copies column 0 with
/// probability 0.9, y = 1 + 2 max(x0, x4) + N(0, 1). Names "Variable 1".."Variable 15".
CompleteData gen_toy_complete(std::size_t n, std::uint64_t seed);

/// gen_toy_complete under an MCAR(p_miss) mask.
BinaryDataset gen_toy(std::size_t n, double p_miss, std::uint64_t seed);

/// Named generator configurations.
struct Preset {
    std::string name;
    std::string generator;  // "pairs" or "toy"
    std::size_t n;
    std::size_t columns;    // total literal count
};

/// "sec4": pairs, n = 5000, c = 30. "appendix": toy, n = 7000, d = 15.
Preset preset(const std::string& name);

} // namespace minty
