#include "minty/binarize.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>

namespace minty {

std::optional<std::size_t> RawTable::find(const std::string& name) const {
    for (std::size_t c = 0; c < columns.size(); ++c)
        if (columns[c].name == name) return c;
    return std::nullopt;
}

bool is_missing_token(std::string_view s) noexcept {
    auto iequals = [](std::string_view a, std::string_view b) {
        return a.size() == b.size() && std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
                   return (x | 0x20) == (y | 0x20);
               });
    };
    return s.empty() || iequals(s, "na") || iequals(s, "nan");
}

std::optional<double> parse_number(std::string_view s) noexcept {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    if (s.empty()) return std::nullopt;
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

std::string format_number(double v) {
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, ptr);
}

// ---------------------------------------------------------------------------
// CSV

namespace {

/// Splits one logical record; returns false at end of input.
bool read_record(std::istream& in, std::vector<std::string>& fields, std::vector<bool>& quoted,
                 std::size_t& line_no) {
    fields.clear();
    quoted.clear();
    if (in.peek() == std::char_traits<char>::eof()) return false;
    std::string field;
    bool in_quotes = false;
    bool was_quoted = false;
    ++line_no;
    for (;;) {
        const int ch = in.get();
        if (ch == std::char_traits<char>::eof()) {
            if (in_quotes) throw CsvError("unterminated quoted field at line " + std::to_string(line_no));
            break;
        }
        const char c = static_cast<char>(ch);
        if (in_quotes) {
            if (c == '"') {
                if (in.peek() == '"') {
                    field.push_back('"');
                    in.get();
                } else {
                    in_quotes = false;
                }
            } else {
                if (c == '\n') ++line_no;
                field.push_back(c);
            }
            continue;
        }
        if (c == '"' && field.empty() && !was_quoted) {
            in_quotes = true;
            was_quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(field));
            quoted.push_back(was_quoted);
            field.clear();
            was_quoted = false;
        } else if (c == '\n') {
            break;
        } else if (c == '\r') {
            if (in.peek() == '\n') in.get();
            break;
        } else {
            field.push_back(c);
        }
    }
    fields.push_back(std::move(field));
    quoted.push_back(was_quoted);
    return true;
}

bool needs_quotes(const std::string& s) {
    return s.find_first_of(",\"\r\n") != std::string::npos;
}

void write_field(std::ostream& out, const std::string& s) {
    if (!needs_quotes(s)) {
        out << s;
        return;
    }
    out << '"';
    for (char c : s) {
        if (c == '"') out << '"';
        out << c;
    }
    out << '"';
}

} // namespace

RawTable read_csv(std::istream& in) {
    RawTable table;
    std::vector<std::string> fields;
    std::vector<bool> quoted;
    std::size_t line_no = 0;
    if (!read_record(in, fields, quoted, line_no)) throw CsvError("empty CSV input (no header)");
    if (!fields.empty() && fields.front().starts_with("\xEF\xBB\xBF")) fields.front().erase(0, 3);
    for (auto& name : fields) table.columns.push_back(RawColumn{std::move(name), {}});

    while (read_record(in, fields, quoted, line_no)) {
        if (fields.size() == 1 && fields.front().empty() && !quoted.front()) continue;  // blank line
        if (fields.size() != table.columns.size())
            throw CsvError("line " + std::to_string(line_no) + " has " + std::to_string(fields.size()) +
                           " fields, header has " + std::to_string(table.columns.size()));
        for (std::size_t c = 0; c < fields.size(); ++c) {
            // A quoted empty string is still a missing cell; quoted "NA" is a literal string.
            const bool missing = quoted[c] ? fields[c].empty() : is_missing_token(fields[c]);
            if (missing)
                table.columns[c].cells.emplace_back(std::nullopt);
            else
                table.columns[c].cells.emplace_back(std::move(fields[c]));
        }
    }
    return table;
}

RawTable read_csv_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw CsvError("cannot open " + path.string());
    return read_csv(in);
}

void write_csv(std::ostream& out, const RawTable& table) {
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c) out << ',';
        write_field(out, table.columns[c].name);
    }
    out << '\n';
    const std::size_t rows = table.rows();
    for (std::size_t i = 0; i < rows; ++i) {
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            if (c) out << ',';
            const auto& cell = table.columns[c].cells[i];
            if (cell) write_field(out, *cell);
        }
        out << '\n';
    }
}

RawTable dataset_to_table(const BinaryDataset& ds, const std::string& outcome) {
    RawTable t;
    for (std::size_t j = 0; j < ds.d(); ++j) {
        RawColumn col;
        col.name = j < ds.literal_names.size() ? ds.literal_names[j] : "x" + std::to_string(j + 1);
        col.cells.reserve(ds.n());
        for (std::size_t i = 0; i < ds.n(); ++i) {
            if (ds.mask(i, j))
                col.cells.emplace_back(std::nullopt);
            else
                col.cells.emplace_back(ds.xbar(i, j) ? "1" : "0");
        }
        t.columns.push_back(std::move(col));
    }
    RawColumn y{outcome, {}};
    y.cells.reserve(ds.n());
    for (double v : ds.y) y.cells.emplace_back(format_number(v));
    t.columns.push_back(std::move(y));
    return t;
}

// ---------------------------------------------------------------------------
// Schema

namespace {

/// Midpoints between each nearest-rank quantile and the next distinct observed
/// value. Duplicates collapse; a quantile at the maximum emits nothing.
std::vector<double> quantile_thresholds(std::vector<double> values, std::size_t n_bins) {
    std::ranges::sort(values);
    const std::size_t n = values.size();
    std::vector<double> out;
    for (std::size_t k = 1; k < n_bins; ++k) {
        // rank = ceil(k/n_bins * n), 1-based, in exact integer arithmetic
        std::size_t rank = (k * n + n_bins - 1) / n_bins;
        rank = std::clamp<std::size_t>(rank, 1, n);
        const double v = values[rank - 1];
        const auto next = std::ranges::upper_bound(values, v);
        if (next == values.end()) continue;
        const double t = v + (*next - v) / 2.0;
        if (out.empty() || t > out.back()) out.push_back(t);
    }
    return out;
}

std::string literal_name(const std::string& col, const char* op, const std::string& value) {
    return col + " " + op + " " + value;
}

} // namespace

SchemaBuild build_schema(const RawTable& table, std::size_t n_bins, const std::set<std::string>& skip) {
    if (n_bins < 2) throw DomainError("n_bins must be >= 2");
    if (table.columns.empty() || table.rows() == 0) throw DomainError("raw table is empty");

    SchemaBuild out;
    auto& schema = out.schema;
    for (const auto& raw : table.columns) {
        if (skip.contains(raw.name)) continue;

        std::vector<std::string> observed;
        for (const auto& c : raw.cells)
            if (c) observed.push_back(*c);
        if (observed.empty()) throw DomainError("column '" + raw.name + "' has no observed values");

        std::vector<double> numbers;
        numbers.reserve(observed.size());
        bool numeric = true;
        for (const auto& s : observed) {
            auto v = parse_number(s);
            if (!v) {
                numeric = false;
                break;
            }
            numbers.push_back(*v);
        }

        ColumnSpec spec;
        spec.name = raw.name;
        const std::size_t col = schema.columns.size();
        if (numeric && std::ranges::all_of(numbers, [](double v) { return v == 0.0 || v == 1.0; })) {
            spec.kind = ColumnKind::binary;
            schema.literals.push_back({col, Predicate::eq, 1.0, "1", raw.name});
        } else if (numeric) {
            spec.kind = ColumnKind::continuous;
            spec.thresholds = quantile_thresholds(std::move(numbers), n_bins);
            if (spec.thresholds.empty())
                out.warnings.push_back("column '" + raw.name + "' is constant; no literals emitted");
            for (double t : spec.thresholds) {
                const auto v = format_number(t);
                schema.literals.push_back({col, Predicate::le, t, {}, literal_name(raw.name, "≤", v)});
                schema.literals.push_back({col, Predicate::ge, t, {}, literal_name(raw.name, "≥", v)});
            }
        } else {
            spec.kind = ColumnKind::categorical;
            std::ranges::sort(observed);
            const auto dup = std::ranges::unique(observed);
            observed.erase(dup.begin(), dup.end());
            spec.categories = observed;
            for (const auto& cat : spec.categories)
                schema.literals.push_back({col, Predicate::eq, 0.0, cat, literal_name(raw.name, "=", cat)});
        }
        schema.columns.push_back(std::move(spec));
    }
    return out;
}

EncodedRows encode_features(const RawTable& table, const BinarizationSchema& schema) {
    const std::size_t n = table.rows();
    const std::size_t d = schema.literals.size();

    std::vector<std::size_t> source(schema.columns.size());
    for (std::size_t c = 0; c < schema.columns.size(); ++c) {
        auto idx = table.find(schema.columns[c].name);
        if (!idx) throw DomainError("column '" + schema.columns[c].name + "' not found in table");
        source[c] = *idx;
    }

    EncodedRows out{BitMatrix(n, d), BitMatrix(n, d)};
    std::vector<double> value(n);
    for (std::size_t j = 0; j < d; ++j) {
        const auto& lit = schema.literals[j];
        const auto& spec = schema.columns[lit.column];
        const auto& cells = table.columns[source[lit.column]].cells;
        for (std::size_t i = 0; i < n; ++i) {
            if (!cells[i]) {
                out.mask(i, j) = 1;
                continue;
            }
            bool holds = false;
            if (spec.kind == ColumnKind::categorical) {
                holds = *cells[i] == lit.category;
            } else {
                const auto v = parse_number(*cells[i]);
                if (!v)
                    throw DomainError("non-numeric value '" + *cells[i] + "' in column '" + spec.name + "'");
                switch (lit.op) {
                    case Predicate::le: holds = *v <= lit.threshold; break;
                    case Predicate::ge: holds = *v >= lit.threshold; break;
                    case Predicate::eq: holds = *v == 1.0; break;
                }
            }
            out.xbar(i, j) = holds ? 1 : 0;
        }
    }
    return out;
}

ApplyResult apply_schema(const RawTable& table, const BinarizationSchema& schema,
                         const std::string& outcome_column) {
    const auto yc = table.find(outcome_column);
    if (!yc) throw DomainError("outcome column '" + outcome_column + "' not found");

    const auto& ycells = table.columns[*yc].cells;
    std::vector<std::size_t> keep;
    std::vector<double> y;
    for (std::size_t i = 0; i < ycells.size(); ++i) {
        if (!ycells[i]) continue;
        const auto v = parse_number(*ycells[i]);
        if (!v)
            throw DomainError("non-numeric outcome '" + *ycells[i] + "' at row " + std::to_string(i + 1));
        keep.push_back(i);
        y.push_back(*v);
    }

    const auto enc = encode_features(table, schema);
    ApplyResult out;
    out.dropped_rows = table.rows() - keep.size();
    auto& ds = out.data;
    ds.xbar = BitMatrix(keep.size(), schema.literals.size());
    ds.mask = BitMatrix(keep.size(), schema.literals.size());
    for (std::size_t r = 0; r < keep.size(); ++r) {
        std::ranges::copy(enc.xbar.row(keep[r]), ds.xbar.row(r).begin());
        std::ranges::copy(enc.mask.row(keep[r]), ds.mask.row(r).begin());
    }
    ds.y = std::move(y);
    ds.literal_names = schema.literal_names();
    return out;
}

} // namespace minty
