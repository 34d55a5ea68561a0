#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "minty/schema.hpp"

namespace minty {

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Shape mismatch between matrices, rows or vectors.
class DimensionError : public Error {
public:
    using Error::Error;
};

/// A value outside its admissible domain (non-binary entry, negative penalty, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// mask = 1 together with xbar = 1.
class ConsistencyError : public Error {
public:
    ConsistencyError(std::size_t row, std::size_t col);
    std::size_t row;
    std::size_t col;
};

// ---------------------------------------------------------------------------
// Dense row-major matrix

template <class T>
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    T& operator()(std::size_t i, std::size_t j) noexcept { return data_[i * cols_ + j]; }
    const T& operator()(std::size_t i, std::size_t j) const noexcept { return data_[i * cols_ + j]; }

    std::span<T> row(std::size_t i) noexcept { return {data_.data() + i * cols_, cols_}; }
    std::span<const T> row(std::size_t i) const noexcept { return {data_.data() + i * cols_, cols_}; }

    std::span<const T> data() const noexcept { return data_; }
    std::span<T> data() noexcept { return data_; }

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using BitMatrix = Matrix<std::uint8_t>;

/// Builds a BitMatrix from nested rows; throws DimensionError on ragged input.
BitMatrix bit_matrix(const std::vector<std::vector<int>>& rows);

// ---------------------------------------------------------------------------
// Dataset

/// Zero-imputed literal matrix plus missingness mask and outcome.
struct BinaryDataset {
    BitMatrix xbar;  // n x d, xbar = 1[mask = 0] * x
    BitMatrix mask;  // n x d, 1 = missing
    std::vector<double> y;
    std::vector<std::string> literal_names;

    std::size_t n() const noexcept { return xbar.rows(); }
    std::size_t d() const noexcept { return xbar.cols(); }

    bool operator==(const BinaryDataset&) const = default;
};

/// Throws DimensionError, DomainError or ConsistencyError on the first violation.
void validate_dataset(const BinaryDataset& ds);

/// Zero-imputes `x_complete` under `mask`. Names default to "x1".."xd".
BinaryDataset make_dataset(const BitMatrix& x_complete, const BitMatrix& mask,
                           std::vector<double> y, std::vector<std::string> names = {});

/// Rows `idx` of `ds`, in the given order.
BinaryDataset subset_rows(const BinaryDataset& ds, std::span<const std::size_t> idx);

// ---------------------------------------------------------------------------
// Rules

enum class TriValue : std::uint8_t { False, True, NA };

const char* to_string(TriValue v) noexcept;

/// A disjunction over literal indices. The empty rule is the intercept.
class Rule {
public:
    Rule() = default;
    /// Sorts the indices; throws DomainError on duplicates.
    explicit Rule(std::vector<std::uint32_t> literals);
    Rule(std::initializer_list<std::uint32_t> literals)
        : Rule(std::vector<std::uint32_t>(literals)) {}

    static Rule intercept() { return Rule{}; }

    const std::vector<std::uint32_t>& literals() const noexcept { return literals_; }
    bool is_intercept() const noexcept { return literals_.empty(); }
    std::size_t size() const noexcept { return literals_.size(); }
    bool contains(std::uint32_t j) const noexcept;

    /// This rule with literal j appended; requires j > every current literal.
    Rule extended(std::uint32_t j) const;

    bool operator==(const Rule&) const = default;

private:
    std::vector<std::uint32_t> literals_;
};

/// Canonical order: smaller size first, then lexicographic literal order.
bool canonical_less(const Rule& a, const Rule& b) noexcept;

// ---------------------------------------------------------------------------
// Configuration and model

enum class Solver { beam, exact };

const char* to_string(Solver s) noexcept;

struct FitConfig {
    double lambda0 = 0.01;
    double lambda1 = 0.01;
    double gamma = 0.0;
    std::size_t k_max = 10;
    std::size_t beam_width = 0;  // 0 = auto (number of literals)
    std::size_t beam_depth = 7;  // also the size cap of the exact solver
    Solver solver = Solver::beam;
    double cd_tol = 1e-8;
    std::size_t cd_max_iter = 10000;
    std::uint64_t seed = 0;

    /// Throws DomainError when a penalty is negative or a size is zero.
    void validate() const;
    std::size_t resolved_width(std::size_t d) const noexcept { return beam_width == 0 ? d : beam_width; }

    bool operator==(const FitConfig&) const = default;
};

struct FitMeta {
    FitConfig config;
    bool converged = true;  // every master-problem solve converged
    std::string termination;
    std::size_t iterations = 0;
    double objective = 0.0;

    bool operator==(const FitMeta&) const = default;
};

/// rules[0] is always the intercept.
struct RuleModel {
    std::vector<Rule> rules;
    std::vector<double> beta;
    std::vector<std::string> literal_names;
    std::optional<BinarizationSchema> schema;
    FitMeta fit_meta;

    /// Checks len(beta) == len(rules), rules[0] is the intercept and literal
    /// indices fit literal_names (when names are present).
    void validate() const;

    std::size_t size() const noexcept { return rules.size(); }
};

} // namespace minty
