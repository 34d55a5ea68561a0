#include "minty/schema.hpp"

#include "minty/data_model.hpp"

namespace minty {

std::vector<std::string> BinarizationSchema::literal_names() const {
    std::vector<std::string> names;
    names.reserve(literals.size());
    for (const auto& lit : literals) names.push_back(lit.name);
    return names;
}

const char* to_string(ColumnKind kind) noexcept {
    switch (kind) {
        case ColumnKind::continuous: return "continuous";
        case ColumnKind::categorical: return "categorical";
        case ColumnKind::binary: return "binary";
    }
    return "?";
}

const char* to_string(Predicate op) noexcept {
    switch (op) {
        case Predicate::le: return "le";
        case Predicate::ge: return "ge";
        case Predicate::eq: return "eq";
    }
    return "?";
}

ColumnKind column_kind_from_string(const std::string& s) {
    if (s == "continuous") return ColumnKind::continuous;
    if (s == "categorical") return ColumnKind::categorical;
    if (s == "binary") return ColumnKind::binary;
    throw DomainError("unknown column kind '" + s + "'");
}

Predicate predicate_from_string(const std::string& s) {
    if (s == "le") return Predicate::le;
    if (s == "ge") return Predicate::ge;
    if (s == "eq") return Predicate::eq;
    throw DomainError("unknown predicate '" + s + "'");
}

} // namespace minty
