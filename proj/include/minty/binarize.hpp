#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "minty/data_model.hpp"
#include "minty/schema.hpp"

namespace minty {

/// A raw table column. std::nullopt marks a missing cell.
struct RawColumn {
    std::string name;
    std::vector<std::optional<std::string>> cells;
};

struct RawTable {
    std::vector<RawColumn> columns;

    std::size_t rows() const noexcept { return columns.empty() ? 0 : columns.front().cells.size(); }
    /// Index of the column called `name`, or nullopt.
    std::optional<std::size_t> find(const std::string& name) const;
};

class CsvError : public Error {
public:
    using Error::Error;
};

/// True for "", "NA" and "NaN" (case-insensitive).
bool is_missing_token(std::string_view s) noexcept;

/// Locale-independent strict parse of a finite double.
std::optional<double> parse_number(std::string_view s) noexcept;

/// Shortest round-trip decimal rendering of `v`.
std::string format_number(double v);

/// First row is the header. Quoted fields follow RFC 4180.
RawTable read_csv(std::istream& in);
RawTable read_csv_file(const std::filesystem::path& path);
/// Missing cells are written as empty strings.
void write_csv(std::ostream& out, const RawTable& table);

/// Dumps a dataset: one column per literal (0, 1 or empty for missing) and
/// the outcome column last.
RawTable dataset_to_table(const BinaryDataset& ds, const std::string& outcome = "y");

struct SchemaBuild {
    BinarizationSchema schema;
    std::vector<std::string> warnings;
};

/// Quantile thresholds (n_bins - 1 per continuous column) computed on observed
/// values, one-hot literals for categorical columns, one literal per 0/1 column.
/// Columns named in `skip` (e.g. the outcome) are ignored.
SchemaBuild build_schema(const RawTable& table, std::size_t n_bins,
                         const std::set<std::string>& skip = {});

struct EncodedRows {
    BitMatrix xbar;
    BitMatrix mask;
};

/// Evaluates every literal of `schema` on every row of `table`.
EncodedRows encode_features(const RawTable& table, const BinarizationSchema& schema);

struct ApplyResult {
    BinaryDataset data;
    std::size_t dropped_rows = 0;  // rows with a missing outcome
};

ApplyResult apply_schema(const RawTable& table, const BinarizationSchema& schema,
                         const std::string& outcome_column);

} // namespace minty
