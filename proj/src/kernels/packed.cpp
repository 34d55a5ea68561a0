#include "minty/kernels/packed.hpp"

namespace minty::kernels {

PackedLiterals::PackedLiterals(const BinaryDataset& ds)
    : n_(ds.n()), observed_true_(ds.d(), BitVector(ds.n())), missing_(ds.d(), BitVector(ds.n())) {
    for (std::size_t i = 0; i < ds.n(); ++i) {
        const auto x = ds.xbar.row(i);
        const auto m = ds.mask.row(i);
        for (std::size_t j = 0; j < ds.d(); ++j) {
            if (m[j])
                missing_[j].set(i);
            else if (x[j])
                observed_true_[j].set(i);
        }
    }
}

RuleBits::RuleBits(const PackedLiterals& lits, const Rule& rule)
    : any_true(lits.n()), any_missing(lits.n()) {
    for (auto j : rule.literals()) add(lits, j);
}

} // namespace minty::kernels
