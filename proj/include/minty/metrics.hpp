#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "minty/data_model.hpp"
#include "minty/exec.hpp"

namespace minty {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;

    bool contains(double v) const noexcept { return lo <= v && v <= hi; }
};

struct EvalReport {
    double mse = 0.0;
    std::optional<double> r2;  // nullopt when Var(y_test) = 0
    Interval mse_ci;
    std::optional<Interval> r2_ci;
    double rho_bar = 0.0;
    std::size_t n_test = 0;
};

inline constexpr std::size_t default_bootstrap_reps = 2000;

/// MSE, R^2 = 1 - MSE / Var(y) and 95% percentile-bootstrap intervals over rows.
/// `relied` holds per-row reliance indicators.
EvalReport evaluate_predictions(std::span<const double> yhat, std::span<const double> y,
                                std::span<const std::uint8_t> relied,
                                std::size_t bootstrap_reps = default_bootstrap_reps,
                                std::uint64_t seed = 0, Exec exec = Exec::parallel);

EvalReport evaluate(const RuleModel& model, const BinaryDataset& test,
                    std::size_t bootstrap_reps = default_bootstrap_reps, std::uint64_t seed = 0,
                    Exec exec = Exec::parallel);

/// Fraction of rows with a missing value on some literal with nonzero coefficient.
double reliance_linear(std::span<const double> beta_dense, const BinaryDataset& test);

double mean_squared_error(std::span<const double> yhat, std::span<const double> y);
/// nullopt when y has zero variance.
std::optional<double> r_squared(std::span<const double> yhat, std::span<const double> y);

nlohmann::json to_json(const EvalReport& r);

/// Aligned text table: model, R2 (lo, hi), MSE (lo, hi), rho.
std::string format_report_table(std::span<const std::pair<std::string, EvalReport>> rows);

} // namespace minty
