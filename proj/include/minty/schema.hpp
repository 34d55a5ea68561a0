#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace minty {

enum class ColumnKind { continuous, categorical, binary };

enum class Predicate { le, ge, eq };

/// One literal: a predicate on a single raw column.
struct LiteralSpec {
    std::size_t column = 0;
    Predicate op = Predicate::eq;
    double threshold = 0.0;   // continuous literals
    std::string category;     // categorical literals
    std::string name;

    bool operator==(const LiteralSpec&) const = default;
};

struct ColumnSpec {
    std::string name;
    ColumnKind kind = ColumnKind::continuous;
    std::vector<double> thresholds;       // strictly increasing
    std::vector<std::string> categories;  // sorted, unique

    bool operator==(const ColumnSpec&) const = default;
};

/// Maps raw tabular columns to binary literals. Every literal refers back to
/// exactly one (column, predicate) pair; a missing raw cell makes every literal
/// of its column missing.
struct BinarizationSchema {
    std::vector<ColumnSpec> columns;
    std::vector<LiteralSpec> literals;

    std::vector<std::string> literal_names() const;

    bool operator==(const BinarizationSchema&) const = default;
};

const char* to_string(ColumnKind kind) noexcept;
const char* to_string(Predicate op) noexcept;
ColumnKind column_kind_from_string(const std::string& s);
Predicate predicate_from_string(const std::string& s);

} // namespace minty
