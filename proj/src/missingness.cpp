#include "minty/missingness.hpp"

#include <cmath>
#include <random>

#include "minty/exec.hpp"

namespace minty {

const char* to_string(Mechanism m) noexcept {
    switch (m) {
        case Mechanism::mcar: return "mcar";
        case Mechanism::mar: return "mar";
        case Mechanism::mnar: return "mnar";
    }
    return "?";
}

Mechanism mechanism_from_string(const std::string& s) {
    if (s == "mcar" || s == "MCAR") return Mechanism::mcar;
    if (s == "mar" || s == "MAR") return Mechanism::mar;
    if (s == "mnar" || s == "MNAR") return Mechanism::mnar;
    throw DomainError("unknown missingness mechanism '" + s + "'");
}

namespace {

// Stream tags so weights and mask draws never share a generator.
constexpr std::uint64_t weight_stream = 1;
constexpr std::uint64_t draw_stream = 2;

std::mt19937_64 column_rng(std::uint64_t seed, std::uint64_t stream, std::size_t col) {
    return std::mt19937_64(derive_seed(derive_seed(seed, stream), col));
}

double sigmoid(double z) noexcept { return 1.0 / (1.0 + std::exp(-z)); }

void check_rate(double q) {
    if (!(q >= 0.0 && q < 1.0)) throw DomainError("missingness rate q must lie in [0, 1)");
}

double mean_rate(std::span<const double> scores, double b) {
    double s = 0.0;
    for (double v : scores) s += sigmoid(v + b);
    return s / static_cast<double>(scores.size());
}

/// Draws column j of the mask from per-row scores under intercept b.
void draw_column(BitMatrix& mask, std::size_t j, std::span<const double> scores, double b, std::uint64_t seed) {
    auto rng = column_rng(seed, draw_stream, j);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t i = 0; i < scores.size(); ++i) mask(i, j) = u(rng) < sigmoid(scores[i] + b) ? 1 : 0;
}

} // namespace

void MaskSpec::validate(std::size_t d) const {
    check_rate(q);
    if (mechanism == Mechanism::mar && (pivot_count < 1 || pivot_count >= d))
        throw DomainError("MAR needs 1 <= pivot_count < d");
}

double calibrate_intercept(std::span<const double> scores, double q) {
    if (scores.empty()) throw CalibrationError("cannot calibrate on zero rows");
    if (!(q > 0.0 && q < 1.0)) throw CalibrationError("calibration target must lie in (0, 1)");
    double lo = -1.0;
    double hi = 1.0;
    for (int i = 0; i < 64 && mean_rate(scores, lo) > q; ++i) lo *= 2.0;
    for (int i = 0; i < 64 && mean_rate(scores, hi) < q; ++i) hi *= 2.0;

    double mid = 0.0;
    double rate = 0.0;
    for (int step = 0; step < 100; ++step) {
        mid = lo + (hi - lo) / 2.0;
        rate = mean_rate(scores, mid);
        if (std::abs(rate - q) < 1e-10) break;
        (rate < q ? lo : hi) = mid;
    }
    if (std::abs(rate - q) > 0.005)
        throw CalibrationError("intercept calibration reached rate " + std::to_string(rate) + " for target " +
                               std::to_string(q));
    return mid;
}

BitMatrix mask_mcar(const BitMatrix& x_complete, double q, std::uint64_t seed) {
    check_rate(q);
    BitMatrix mask(x_complete.rows(), x_complete.cols());
    if (q == 0.0) return mask;
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t j = 0; j < x_complete.cols(); ++j) {
        auto rng = column_rng(seed, draw_stream, j);
        for (std::size_t i = 0; i < x_complete.rows(); ++i) mask(i, j) = u(rng) < q ? 1 : 0;
    }
    return mask;
}

BitMatrix mask_mar_weighted(const BitMatrix& x_complete, double q, std::size_t pivot_count,
                            const Matrix<double>& weights, std::uint64_t seed) {
    check_rate(q);
    const std::size_t n = x_complete.rows();
    const std::size_t d = x_complete.cols();
    if (pivot_count < 1 || pivot_count >= d) throw DomainError("MAR needs 1 <= pivot_count < d");
    if (weights.rows() != d - pivot_count || weights.cols() != pivot_count)
        throw DimensionError("MAR weights must be (d - pivot_count) x pivot_count");

    BitMatrix mask(n, d);
    if (q == 0.0) return mask;
    std::vector<double> scores(n);
    for (std::size_t j = pivot_count; j < d; ++j) {
        const auto w = weights.row(j - pivot_count);
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t p = 0; p < pivot_count; ++p) s += w[p] * x_complete(i, p);
            scores[i] = s;
        }
        draw_column(mask, j, scores, calibrate_intercept(scores, q), seed);
    }
    return mask;
}

BitMatrix mask_mar(const BitMatrix& x_complete, double q, std::size_t pivot_count, std::uint64_t seed) {
    const std::size_t d = x_complete.cols();
    if (pivot_count < 1 || pivot_count >= d) throw DomainError("MAR needs 1 <= pivot_count < d");
    Matrix<double> weights(d - pivot_count, pivot_count);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t j = pivot_count; j < d; ++j) {
        auto rng = column_rng(seed, weight_stream, j);
        for (auto& w : weights.row(j - pivot_count)) w = normal(rng);
    }
    return mask_mar_weighted(x_complete, q, pivot_count, weights, seed);
}

BitMatrix mask_mnar_weighted(const BitMatrix& x_complete, double q, std::span<const double> weights,
                             std::uint64_t seed) {
    check_rate(q);
    const std::size_t n = x_complete.rows();
    const std::size_t d = x_complete.cols();
    if (weights.size() != d) throw DimensionError("MNAR needs one weight per column");
    BitMatrix mask(n, d);
    if (q == 0.0) return mask;
    std::vector<double> scores(n);
    for (std::size_t j = 0; j < d; ++j) {
        for (std::size_t i = 0; i < n; ++i) scores[i] = weights[j] * x_complete(i, j);
        draw_column(mask, j, scores, calibrate_intercept(scores, q), seed);
    }
    return mask;
}

BitMatrix mask_mnar(const BitMatrix& x_complete, double q, std::uint64_t seed) {
    std::vector<double> weights(x_complete.cols());
    std::normal_distribution<double> normal(0.0, 1.0);
    for (std::size_t j = 0; j < weights.size(); ++j) {
        auto rng = column_rng(seed, weight_stream, j);
        weights[j] = normal(rng);
    }
    return mask_mnar_weighted(x_complete, q, weights, seed);
}

BitMatrix make_mask(const BitMatrix& x_complete, const MaskSpec& spec) {
    spec.validate(x_complete.cols());
    switch (spec.mechanism) {
        case Mechanism::mcar: return mask_mcar(x_complete, spec.q, spec.seed);
        case Mechanism::mar: return mask_mar(x_complete, spec.q, spec.pivot_count, spec.seed);
        case Mechanism::mnar: return mask_mnar(x_complete, spec.q, spec.seed);
    }
    throw DomainError("unknown mechanism");
}

} // namespace minty
