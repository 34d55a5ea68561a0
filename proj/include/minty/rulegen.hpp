#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "minty/data_model.hpp"
#include "minty/exec.hpp"
#include "minty/kernels/packed.hpp"

namespace minty {

/// Which residual-alignment problem attained the optimum.
enum class Sign { plus, minus };

const char* to_string(Sign s) noexcept;
inline double sign_factor(Sign s) noexcept { return s == Sign::plus ? 1.0 : -1.0; }

struct PricingPenalties {
    double gamma = 0.0;
    double lambda0 = 0.0;
    double lambda1 = 0.0;
};

/// Thrown by exhaustive pricing when the candidate count exceeds the guard.
class SearchSpaceError : public Error {
public:
    explicit SearchSpaceError(std::uint64_t count);
    std::uint64_t candidates;
};

inline constexpr std::uint64_t max_exhaustive_candidates = 10'000'000;

/// Number of nonempty literal subsets of size <= max_size (saturating).
std::uint64_t candidate_count(std::size_t d, std::size_t max_size) noexcept;

struct PricingResult {
    bool found = false;  // false when every candidate was excluded
    Rule rule;
    double objective = 0.0;
    Sign sign = Sign::plus;
    std::vector<std::uint8_t> a;    // winner's activation column
    std::vector<std::uint8_t> rho;  // winner's reliance column
};

/// sign * (1/n) sum_i r_i a_i + (gamma/n) sum_i rho_i + lambda0 + lambda1 |rule|.
/// The penalty terms are never sign-flipped. Throws DomainError on the intercept.
double rule_objective(const Rule& rule, std::span<const double> residual, const BinaryDataset& ds,
                      const PricingPenalties& pen, Sign sign);

/// Pricing over one dataset. Packs the literals once; each call scores
/// candidates against the given residual. Candidates within a beam level (or
/// subtrees of the exhaustive enumeration) are scored in parallel under
/// Exec::parallel; results do not depend on evaluation order.
class Pricer {
public:
    explicit Pricer(const BinaryDataset& ds);

    std::size_t n() const noexcept { return packed_.n(); }
    std::size_t d() const noexcept { return packed_.d(); }

    /// Beam search per sign: start from all single literals, keep the best
    /// `width` by objective at each level, extend each by one literal of
    /// larger index, stop after `depth` literals; the best rule seen at any
    /// size wins. Rules in `exclude` are never returned (but still expanded).
    PricingResult beam(std::span<const double> residual, const PricingPenalties& pen,
                       std::size_t width, std::size_t depth, std::span<const Rule> exclude = {},
                       Exec exec = Exec::parallel) const;

    /// Exact minimum over every nonempty subset of size <= max_size, both
    /// signs. Ties: smaller size, then lexicographic, then + before -.
    PricingResult exhaustive(std::span<const double> residual, const PricingPenalties& pen,
                             std::size_t max_size, std::span<const Rule> exclude = {},
                             Exec exec = Exec::parallel) const;

    /// Objective from packed bits; equals rule_objective exactly.
    double objective(const kernels::RuleBits& bits, std::size_t rule_size,
                     std::span<const double> residual, const PricingPenalties& pen, Sign sign) const;

private:
    PricingResult finish(const Rule& rule, double objective, Sign sign) const;

    const BinaryDataset* ds_;
    kernels::PackedLiterals packed_;
};

PricingResult beam_search_pricing(std::span<const double> residual, const BinaryDataset& ds,
                                  const PricingPenalties& pen, std::size_t width, std::size_t depth,
                                  std::span<const Rule> exclude = {}, Exec exec = Exec::parallel);

PricingResult exhaustive_pricing(std::span<const double> residual, const BinaryDataset& ds,
                                 const PricingPenalties& pen, std::size_t max_size,
                                 std::span<const Rule> exclude = {}, Exec exec = Exec::parallel);

} // namespace minty
