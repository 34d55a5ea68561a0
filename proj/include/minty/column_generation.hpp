#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "minty/data_model.hpp"
#include "minty/exec.hpp"
#include "minty/rulegen.hpp"

namespace minty {

enum class Termination { optimal, k_max, no_candidate };

const char* to_string(Termination t) noexcept;

struct TraceStep {
    Rule rule;
    double delta = 0.0;             // pricing objective of the appended rule (< 0)
    Sign sign = Sign::plus;
    double master_objective = 0.0;  // after the refit that includes `rule`
    std::size_t nonzero = 0;        // nonzero coefficients after that refit, intercept included
};

struct FitTrace {
    double initial_objective = 0.0;  // intercept-only master objective
    std::vector<TraceStep> steps;
    Termination termination = Termination::optimal;
    double final_delta = 0.0;        // pricing objective that stopped the loop (optimal only)
    std::vector<Rule> rules;         // full final rule set, zero coefficients included
    std::vector<double> beta;
    std::vector<double> rho_bar;     // training reliance rate per rule
};

struct FitResult {
    RuleModel model;
    FitTrace trace;
};

/// Column generation: fit the weighted lasso on the current rules, price a
/// new disjunction against the residual, append it while its objective is
/// negative and fewer than k_max rules were added, then refit. Rules with
/// |beta| < 1e-10 are dropped from the returned model but kept in the trace.
FitResult fit_minty(const BinaryDataset& ds, const FitConfig& cfg, Exec exec = Exec::parallel);

inline constexpr double coefficient_drop_threshold = 1e-10;

struct Prediction {
    double yhat = 0.0;
    bool relied = false;  // some rule with nonzero beta evaluated to NA
};

/// NA activations contribute zero.
Prediction predict(const RuleModel& model, std::span<const std::uint8_t> xbar_row,
                   std::span<const std::uint8_t> mask_row);

std::vector<Prediction> predict(const RuleModel& model, const BinaryDataset& ds);

/// Fraction of rows of `ds` on which the model relies on a missing value.
double reliance_rate(const RuleModel& model, const BinaryDataset& ds);

} // namespace minty
