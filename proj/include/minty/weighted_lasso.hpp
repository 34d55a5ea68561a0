#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "minty/data_model.hpp"

namespace minty {

/// Per-coefficient L1 weights; w[0] (intercept) is zero.
struct PenaltyWeights {
    std::vector<double> w;

    /// w_k = gamma * rho_bar_k + lambda0 + lambda1 * |z_k|, intercept 0.
    static PenaltyWeights for_rules(std::span<const Rule> rules, std::span<const double> rho_bar,
                                    double gamma, double lambda0, double lambda1);
};

/// sign(v) * max(|v| - t, 0)
double soft_threshold(double v, double t) noexcept;

/// (1/n) ||A beta - y||^2 + sum_k w_k |beta_k|
double lasso_objective(const Matrix<double>& A, std::span<const double> y,
                       std::span<const double> w, std::span<const double> beta);

/// Largest KKT residual of the weighted lasso at `beta`:
/// |g_k + w_k sign(beta_k)| for nonzero beta_k, max(|g_k| - w_k, 0) otherwise,
/// where g = (2/n) A^T (A beta - y).
double kkt_violation(const Matrix<double>& A, std::span<const double> y,
                     std::span<const double> w, std::span<const double> beta);

struct LassoResult {
    std::vector<double> beta;
    double objective = 0.0;
    std::size_t sweeps = 0;
    bool converged = false;
};

/// Cyclic coordinate descent (order 0..K-1) with exact soft-threshold updates.
/// Stops once a sweep lowers the objective by at most cd_tol (relative) and
/// the KKT residual is at most cd_tol, or after cd_max_iter sweeps with
/// converged = false. `warm_start` may be shorter than K; missing entries are 0.
LassoResult fit_weighted_lasso(const Matrix<double>& A, std::span<const double> y,
                               const PenaltyWeights& w, const FitConfig& cfg,
                               std::span<const double> warm_start = {});

/// a . beta
double predict_linear(std::span<const double> a_row, std::span<const double> beta);

} // namespace minty
