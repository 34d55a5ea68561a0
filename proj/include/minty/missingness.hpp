#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "minty/data_model.hpp"

namespace minty {

enum class Mechanism { mcar, mar, mnar };

const char* to_string(Mechanism m) noexcept;
Mechanism mechanism_from_string(const std::string& s);

class CalibrationError : public Error {
public:
    using Error::Error;
};

struct MaskSpec {
    Mechanism mechanism = Mechanism::mcar;
    double q = 0.1;
    std::size_t pivot_count = 1;  // MAR only
    std::uint64_t seed = 0;

    void validate(std::size_t d) const;
};

/// Intercept b with mean_i sigmoid(scores_i + b) = q, found by bisection.
/// Throws CalibrationError if 100 steps do not reach q within 0.005.
double calibrate_intercept(std::span<const double> scores, double q);

/// i.i.d. Bernoulli(q) entries.
BitMatrix mask_mcar(const BitMatrix& x_complete, double q, std::uint64_t seed);

/// The first pivot_count columns are never missing; column j >= pivot_count is
/// missing with probability sigmoid(w_j . x_pivot + b_j), w_j ~ N(0, I) per seed.
BitMatrix mask_mar(const BitMatrix& x_complete, double q, std::size_t pivot_count, std::uint64_t seed);

/// MAR with explicit weights: row j - pivot_count of `weights` holds w_j.
BitMatrix mask_mar_weighted(const BitMatrix& x_complete, double q, std::size_t pivot_count,
                            const Matrix<double>& weights, std::uint64_t seed);

/// Self-masking: entry (i, j) missing with probability sigmoid(w_j x_ij + b_j),
/// w_j ~ N(0, 1) per seed.
BitMatrix mask_mnar(const BitMatrix& x_complete, double q, std::uint64_t seed);

BitMatrix mask_mnar_weighted(const BitMatrix& x_complete, double q, std::span<const double> weights,
                             std::uint64_t seed);

BitMatrix make_mask(const BitMatrix& x_complete, const MaskSpec& spec);

} // namespace minty
