#include "minty/activation.hpp"

#include "minty/kernels/packed.hpp"

namespace minty {

TriValue eval_rule_trivalued(const Rule& rule, std::span<const std::uint8_t> xbar_row,
                             std::span<const std::uint8_t> mask_row) {
    if (rule.is_intercept()) return TriValue::True;
    bool any_missing = false;
    for (auto j : rule.literals()) {
        if (mask_row[j]) {
            any_missing = true;
        } else if (xbar_row[j]) {
            return TriValue::True;
        }
    }
    return any_missing ? TriValue::NA : TriValue::False;
}

std::vector<double> ActivationResult::reliance_rates() const {
    std::vector<double> rates(rho.cols(), 0.0);
    if (rho.rows() == 0) return rates;
    for (std::size_t k = 0; k < rho.cols(); ++k) {
        std::size_t c = 0;
        for (std::size_t i = 0; i < rho.rows(); ++i) c += rho(i, k);
        rates[k] = static_cast<double>(c) / static_cast<double>(rho.rows());
    }
    return rates;
}

void check_rules(std::span<const Rule> rules, std::size_t d) {
    for (std::size_t k = 0; k < rules.size(); ++k) {
        if (!rules[k].is_intercept() && rules[k].literals().back() >= d)
            throw DimensionError("rule " + std::to_string(k) + " uses literal " +
                                 std::to_string(rules[k].literals().back()) + " but d = " + std::to_string(d));
    }
}

ActivationResult activation_matrix(const BinaryDataset& ds, std::span<const Rule> rules, Exec exec) {
    check_rules(rules, ds.d());
    const std::size_t n = ds.n();
    const std::size_t K = rules.size();
    ActivationResult out{BitMatrix(n, K), BitMatrix(n, K)};
    const kernels::PackedLiterals packed(ds);

    const auto K_signed = static_cast<std::ptrdiff_t>(K);
#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
    for (std::ptrdiff_t ks = 0; ks < K_signed; ++ks) {
        const auto k = static_cast<std::size_t>(ks);
        if (rules[k].is_intercept()) {
            for (std::size_t i = 0; i < n; ++i) out.a(i, k) = 1;
            continue;
        }
        const kernels::RuleBits bits(packed, rules[k]);
        for (std::size_t i = 0; i < n; ++i) {
            const bool t = bits.any_true.test(i);
            out.a(i, k) = t ? 1 : 0;
            out.rho(i, k) = (!t && bits.any_missing.test(i)) ? 1 : 0;
        }
    }
    return out;
}

ActivationResult activation_matrix_reference(const BinaryDataset& ds, std::span<const Rule> rules) {
    check_rules(rules, ds.d());
    const std::size_t n = ds.n();
    const std::size_t K = rules.size();
    ActivationResult out{BitMatrix(n, K), BitMatrix(n, K)};
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t k = 0; k < K; ++k) {
            const TriValue v = eval_rule_trivalued(rules[k], ds.xbar.row(i), ds.mask.row(i));
            out.a(i, k) = v == TriValue::True ? 1 : 0;
            out.rho(i, k) = v == TriValue::NA ? 1 : 0;
        }
    }
    return out;
}

} // namespace minty
