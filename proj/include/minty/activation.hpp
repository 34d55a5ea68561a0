#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "minty/data_model.hpp"
#include "minty/exec.hpp"

namespace minty {

/// Three-valued disjunction: True if some literal is observed and true, False
/// if every literal is observed and false, NA otherwise. The intercept is True.
/// `xbar_row` and `mask_row` are indexed by literal.
TriValue eval_rule_trivalued(const Rule& rule, std::span<const std::uint8_t> xbar_row,
                             std::span<const std::uint8_t> mask_row);

/// a: zero-imputed activations; rho: 1 where the activation is NA.
struct ActivationResult {
    BitMatrix a;    // n x K
    BitMatrix rho;  // n x K

    /// Mean of rho over rows, per rule.
    std::vector<double> reliance_rates() const;
};

/// Throws DimensionError if a rule refers to a literal >= d.
void check_rules(std::span<const Rule> rules, std::size_t d);

/// Bit-packed kernel; rules are evaluated in parallel under Exec::parallel.
ActivationResult activation_matrix(const BinaryDataset& ds, std::span<const Rule> rules,
                                   Exec exec = Exec::parallel);

/// Row-by-row reference through eval_rule_trivalued.
ActivationResult activation_matrix_reference(const BinaryDataset& ds, std::span<const Rule> rules);

} // namespace minty
