#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "minty/exec.hpp"
#include "minty/synthdata.hpp"

namespace minty {

/// Risk bounds for the paired-replacement setting, checked by Monte Carlo.
/// The GLRM uses one rule (x_i OR x_{c+i}) per pair with coefficient
/// beta_i + beta_{c+i}; the linear model is the ground-truth beta on
/// zero-imputed inputs.
struct Prop1Report {
    double delta = 0.0;
    double q = 0.0;
    double eta = 0.0;  // min_i of the empirical E[x_i m_i]
    double sigma = 0.0;
    double beta_norm_sq = 0.0;
    double cross_sum = 0.0;  // sum over i and k outside {i, j(i)} of |beta_i beta_k|
    double risk_glrm_mc = 0.0;
    double risk_glrm_se = 0.0;
    double risk_linear_mc = 0.0;
    double risk_linear_se = 0.0;
    double bound_upper = 0.0;  // delta ||beta||^2 + delta^2 cross_sum + sigma^2
    double bound_lower = 0.0;  // eta ||beta||^2 + sigma^2
    double threshold = 0.0;    // (sqrt(a^2 + 4 eta) - a) / 2, a = ||beta||^2 / cross_sum
    double threshold_crossover = 0.0;  // delta at which bound_upper = bound_lower
    double rho_glrm = 0.0;
    double rho_linear = 0.0;
    std::size_t mc_samples = 0;

    /// risk_glrm_mc <= bound_upper + k SE
    bool upper_holds(double k = 3.0) const noexcept;
    /// risk_linear_mc >= bound_lower - k SE
    bool lower_holds(double k = 3.0) const noexcept;
};

double beta_norm_sq(std::span<const double> beta) noexcept;
/// Pair partner of i is (i + c) mod 2c.
double pair_cross_sum(std::span<const double> beta) noexcept;
double prop1_upper_bound(double delta, std::span<const double> beta, double sigma) noexcept;
double prop1_lower_bound(double eta, std::span<const double> beta, double sigma) noexcept;
/// +inf when cross_sum = 0.
double prop1_threshold(double eta, std::span<const double> beta) noexcept;
double prop1_crossover(double eta, std::span<const double> beta) noexcept;

/// Requires beta >= 0 elementwise and q in [0, 0.5]. spec.n is ignored;
/// `mc_samples` fresh draws are used instead.
Prop1Report run_prop1_experiment(const PairSpec& spec, double q, std::size_t mc_samples,
                                 std::uint64_t seed, Exec exec = Exec::parallel);

nlohmann::json to_json(const Prop1Report& r);

} // namespace minty
