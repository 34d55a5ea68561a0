#pragma once

// Independent re-implementations used as test oracles. Nothing here calls the
// library's evaluation or pricing code; only plain vectors go in and out.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <optional>
#include <random>
#include <vector>

#include "minty/data_model.hpp"

namespace oracle {

// Tri-state cell: 0, 1, or missing.
enum class Cell { zero, one, na };

enum class Truth { f, t, na };

// Case analysis for a disjunction: true as soon as one literal is observed
// true, false only when every literal is observed false, NA otherwise.
inline Truth disjunction(const std::vector<Cell>& cells) {
    if (cells.empty()) return Truth::t;
    bool any_na = false;
    for (auto c : cells) {
        if (c == Cell::one) return Truth::t;
        if (c == Cell::na) any_na = true;
    }
    return any_na ? Truth::na : Truth::f;
}

inline Cell cell_of(const minty::BinaryDataset& ds, std::size_t i, std::size_t j) {
    if (ds.mask(i, j)) return Cell::na;
    return ds.xbar(i, j) ? Cell::one : Cell::zero;
}

inline Truth truth_of(const minty::BinaryDataset& ds, std::size_t i, const std::vector<std::uint32_t>& lits) {
    std::vector<Cell> cells;
    for (auto j : lits) cells.push_back(cell_of(ds, i, j));
    return disjunction(cells);
}

// sign * mean(r * a) + gamma * mean(rho) + lambda0 + lambda1 * |rule|
inline double pricing_objective(const std::vector<std::uint32_t>& lits, const std::vector<double>& r,
                                const minty::BinaryDataset& ds, double gamma, double lambda0, double lambda1,
                                double sign) {
    const double n = static_cast<double>(ds.n());
    double align = 0.0;
    double na = 0.0;
    for (std::size_t i = 0; i < ds.n(); ++i) {
        const auto t = truth_of(ds, i, lits);
        if (t == Truth::t) align += r[i];
        if (t == Truth::na) na += 1.0;
    }
    return sign * align / n + gamma * na / n + lambda0 + lambda1 * static_cast<double>(lits.size());
}

struct NaiveBest {
    std::vector<std::uint32_t> lits;
    double objective = std::numeric_limits<double>::infinity();
    bool plus = true;
    std::size_t evaluated = 0;  // (rule, sign) pairs scored
};

// Enumerates subsets by bitmask, scores both signs from scratch and applies
// the documented tie-break: objective, then size, then lexicographic, then +.
inline NaiveBest naive_pricing(const std::vector<double>& r, const minty::BinaryDataset& ds, double gamma,
                               double lambda0, double lambda1, std::size_t max_size,
                               const std::vector<std::vector<std::uint32_t>>& exclude = {}) {
    const std::size_t d = ds.d();
    NaiveBest best;
    auto better = [](const std::vector<std::uint32_t>& a, bool ap, double ao, const NaiveBest& b) {
        if (ao != b.objective) return ao < b.objective;
        if (a.size() != b.lits.size()) return a.size() < b.lits.size();
        if (a != b.lits) return a < b.lits;
        return ap && !b.plus;
    };
    for (std::uint64_t m = 1; m < (std::uint64_t{1} << d); ++m) {
        std::vector<std::uint32_t> lits;
        for (std::uint32_t j = 0; j < d; ++j)
            if (m >> j & 1U) lits.push_back(j);
        if (lits.size() > max_size) continue;
        if (std::find(exclude.begin(), exclude.end(), lits) != exclude.end()) continue;
        for (bool plus : {true, false}) {
            ++best.evaluated;
            const double o = pricing_objective(lits, r, ds, gamma, lambda0, lambda1, plus ? 1.0 : -1.0);
            if (better(lits, plus, o, best)) {
                best.lits = lits;
                best.objective = o;
                best.plus = plus;
            }
        }
    }
    return best;
}

// Minimizer of f on lo, lo + step, ..., hi.
inline double grid_argmin(const std::function<double(double)>& f, double lo, double hi, double step) {
    double best_x = lo;
    double best_f = f(lo);
    const auto steps = static_cast<long>(std::llround((hi - lo) / step));
    for (long k = 1; k <= steps; ++k) {
        const double x = lo + static_cast<double>(k) * step;
        const double v = f(x);
        if (v < best_f) {
            best_f = v;
            best_x = x;
        }
    }
    return best_x;
}

// (1/n)||A b - y||^2 + sum w |b|
inline double lasso_objective(const std::vector<std::vector<double>>& A, const std::vector<double>& y,
                              const std::vector<double>& w, const std::vector<double>& b) {
    double loss = 0.0;
    for (std::size_t i = 0; i < A.size(); ++i) {
        double p = 0.0;
        for (std::size_t k = 0; k < b.size(); ++k) p += A[i][k] * b[k];
        loss += (p - y[i]) * (p - y[i]);
    }
    double pen = 0.0;
    for (std::size_t k = 0; k < b.size(); ++k) pen += w[k] * std::abs(b[k]);
    return loss / static_cast<double>(A.size()) + pen;
}

// Least squares through the normal equations, Gaussian elimination with
// partial pivoting. Returns nullopt for a singular system.
inline std::optional<std::vector<double>> least_squares(const std::vector<std::vector<double>>& A,
                                                        const std::vector<double>& y) {
    const std::size_t k = A.front().size();
    std::vector<std::vector<double>> m(k, std::vector<double>(k + 1, 0.0));
    for (std::size_t i = 0; i < A.size(); ++i)
        for (std::size_t a = 0; a < k; ++a) {
            for (std::size_t b = 0; b < k; ++b) m[a][b] += A[i][a] * A[i][b];
            m[a][k] += A[i][a] * y[i];
        }
    for (std::size_t c = 0; c < k; ++c) {
        std::size_t piv = c;
        for (std::size_t r = c + 1; r < k; ++r)
            if (std::abs(m[r][c]) > std::abs(m[piv][c])) piv = r;
        if (std::abs(m[piv][c]) < 1e-12) return std::nullopt;
        std::swap(m[c], m[piv]);
        for (std::size_t r = 0; r < k; ++r) {
            if (r == c) continue;
            const double f = m[r][c] / m[c][c];
            for (std::size_t j = c; j <= k; ++j) m[r][j] -= f * m[c][j];
        }
    }
    std::vector<double> b(k);
    for (std::size_t c = 0; c < k; ++c) b[c] = m[c][k] / m[c][c];
    return b;
}

// Random dataset with Bernoulli(p1) features, MCAR(q) mask and N(0,1) outcome.
inline minty::BinaryDataset random_dataset(std::size_t n, std::size_t d, double q, std::uint64_t seed,
                                           double p1 = 0.5) {
    std::mt19937_64 rng(seed);
    std::bernoulli_distribution one(p1);
    std::bernoulli_distribution miss(q);
    std::normal_distribution<double> z(0.0, 1.0);
    minty::BinaryDataset ds;
    ds.xbar = minty::BitMatrix(n, d);
    ds.mask = minty::BitMatrix(n, d);
    ds.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            const bool m = miss(rng);
            const bool x = one(rng);
            ds.mask(i, j) = m ? 1 : 0;
            ds.xbar(i, j) = (!m && x) ? 1 : 0;
        }
        ds.y[i] = z(rng);
    }
    return ds;
}

inline std::vector<double> random_vector(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> z(0.0, 1.0);
    std::vector<double> v(n);
    for (auto& x : v) x = z(rng);
    return v;
}

} // namespace oracle
