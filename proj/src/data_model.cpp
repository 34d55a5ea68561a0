#include "minty/data_model.hpp"

#include <algorithm>
#include <omp.h>
#include <sstream>

#include "minty/exec.hpp"

namespace minty {

int max_threads() noexcept { return omp_get_max_threads(); }

namespace {

std::string cell(std::size_t i, std::size_t j) {
    std::ostringstream os;
    os << "(" << i << "," << j << ")";
    return os.str();
}

} // namespace

ConsistencyError::ConsistencyError(std::size_t r, std::size_t c)
    : Error("mask = 1 but xbar = 1 at " + cell(r, c)), row(r), col(c) {}

BitMatrix bit_matrix(const std::vector<std::vector<int>>& rows) {
    const std::size_t cols = rows.empty() ? 0 : rows.front().size();
    BitMatrix m(rows.size(), cols);
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].size() != cols)
            throw DimensionError("row " + std::to_string(i) + " has length " +
                                 std::to_string(rows[i].size()) + ", expected " + std::to_string(cols));
        for (std::size_t j = 0; j < cols; ++j) {
            // Out-of-range values survive the narrowing so validation can report them.
            m(i, j) = static_cast<std::uint8_t>(rows[i][j]);
        }
    }
    return m;
}

void validate_dataset(const BinaryDataset& ds) {
    const std::size_t n = ds.xbar.rows();
    const std::size_t d = ds.xbar.cols();
    if (ds.mask.rows() != n || ds.mask.cols() != d) {
        std::ostringstream os;
        os << "mask is " << ds.mask.rows() << "x" << ds.mask.cols() << ", xbar is " << n << "x" << d;
        throw DimensionError(os.str());
    }
    if (ds.y.size() != n)
        throw DimensionError("y has length " + std::to_string(ds.y.size()) + ", expected " + std::to_string(n));
    if (!ds.literal_names.empty() && ds.literal_names.size() != d)
        throw DimensionError("literal_names has " + std::to_string(ds.literal_names.size()) +
                             " entries, expected " + std::to_string(d));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            const auto x = ds.xbar(i, j);
            const auto m = ds.mask(i, j);
            if (x > 1) throw DomainError("xbar" + cell(i, j) + " = " + std::to_string(x) + " is not binary");
            if (m > 1) throw DomainError("mask" + cell(i, j) + " = " + std::to_string(m) + " is not binary");
            if (m == 1 && x == 1) throw ConsistencyError(i, j);
        }
    }
}

BinaryDataset make_dataset(const BitMatrix& x_complete, const BitMatrix& mask, std::vector<double> y,
                           std::vector<std::string> names) {
    if (mask.rows() != x_complete.rows() || mask.cols() != x_complete.cols())
        throw DimensionError("mask shape does not match feature matrix");
    if (y.size() != x_complete.rows()) throw DimensionError("outcome length does not match row count");
    BinaryDataset ds;
    ds.xbar = BitMatrix(x_complete.rows(), x_complete.cols());
    ds.mask = mask;
    for (std::size_t i = 0; i < x_complete.rows(); ++i)
        for (std::size_t j = 0; j < x_complete.cols(); ++j)
            ds.xbar(i, j) = (mask(i, j) == 0 && x_complete(i, j) == 1) ? 1 : 0;
    ds.y = std::move(y);
    if (names.empty()) {
        names.reserve(x_complete.cols());
        for (std::size_t j = 0; j < x_complete.cols(); ++j) names.push_back("x" + std::to_string(j + 1));
    }
    ds.literal_names = std::move(names);
    validate_dataset(ds);
    return ds;
}

BinaryDataset subset_rows(const BinaryDataset& ds, std::span<const std::size_t> idx) {
    BinaryDataset out;
    out.xbar = BitMatrix(idx.size(), ds.d());
    out.mask = BitMatrix(idx.size(), ds.d());
    out.y.reserve(idx.size());
    out.literal_names = ds.literal_names;
    for (std::size_t r = 0; r < idx.size(); ++r) {
        const std::size_t i = idx[r];
        if (i >= ds.n()) throw DimensionError("row index " + std::to_string(i) + " out of range");
        std::ranges::copy(ds.xbar.row(i), out.xbar.row(r).begin());
        std::ranges::copy(ds.mask.row(i), out.mask.row(r).begin());
        out.y.push_back(ds.y[i]);
    }
    return out;
}

const char* to_string(TriValue v) noexcept {
    switch (v) {
        case TriValue::True: return "True";
        case TriValue::False: return "False";
        case TriValue::NA: return "NA";
    }
    return "?";
}

Rule::Rule(std::vector<std::uint32_t> literals) : literals_(std::move(literals)) {
    std::ranges::sort(literals_);
    if (std::ranges::adjacent_find(literals_) != literals_.end())
        throw DomainError("rule has duplicate literal indices");
}

bool Rule::contains(std::uint32_t j) const noexcept { return std::ranges::binary_search(literals_, j); }

Rule Rule::extended(std::uint32_t j) const {
    if (!literals_.empty() && j <= literals_.back())
        throw DomainError("extension literal must exceed the rule's largest index");
    Rule r = *this;
    r.literals_.push_back(j);
    return r;
}

bool canonical_less(const Rule& a, const Rule& b) noexcept {
    if (a.size() != b.size()) return a.size() < b.size();
    return a.literals() < b.literals();
}

const char* to_string(Solver s) noexcept { return s == Solver::beam ? "beam" : "exact"; }

void FitConfig::validate() const {
    if (!(lambda0 >= 0.0)) throw DomainError("lambda0 must be >= 0");
    if (!(lambda1 >= 0.0)) throw DomainError("lambda1 must be >= 0");
    if (!(gamma >= 0.0)) throw DomainError("gamma must be >= 0");
    if (k_max < 1) throw DomainError("k_max must be >= 1");
    if (beam_depth < 1) throw DomainError("beam_depth must be >= 1");
    if (!(cd_tol > 0.0)) throw DomainError("cd_tol must be > 0");
    if (cd_max_iter < 1) throw DomainError("cd_max_iter must be >= 1");
}

void RuleModel::validate() const {
    if (rules.empty() || !rules.front().is_intercept())
        throw DomainError("rules[0] must be the intercept");
    if (beta.size() != rules.size())
        throw DimensionError("beta has " + std::to_string(beta.size()) + " entries for " +
                             std::to_string(rules.size()) + " rules");
    for (std::size_t k = 1; k < rules.size(); ++k) {
        if (rules[k].is_intercept()) throw DomainError("only rules[0] may be the intercept");
        if (!literal_names.empty() && rules[k].literals().back() >= literal_names.size())
            throw DimensionError("rule " + std::to_string(k) + " refers to literal " +
                                 std::to_string(rules[k].literals().back()) + " of " +
                                 std::to_string(literal_names.size()));
    }
}

} // namespace minty
