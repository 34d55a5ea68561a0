#include "minty/rulegen.hpp"

#include <algorithm>
#include <limits>

#include "minty/activation.hpp"

namespace minty {

using kernels::BitVector;
using kernels::RuleBits;

const char* to_string(Sign s) noexcept { return s == Sign::plus ? "+" : "-"; }

SearchSpaceError::SearchSpaceError(std::uint64_t count)
    : Error("exhaustive pricing would evaluate " + std::to_string(count) + " candidates (limit " +
            std::to_string(max_exhaustive_candidates) + ")"),
      candidates(count) {}

std::uint64_t candidate_count(std::size_t d, std::size_t max_size) noexcept {
    constexpr auto cap = std::numeric_limits<std::uint64_t>::max();
    std::uint64_t total = 0;
    std::uint64_t binom = 1;  // C(d, k)
    for (std::size_t k = 1; k <= std::min(d, max_size); ++k) {
        // C(d,k) = C(d,k-1) * (d-k+1) / k, exact at every step
        const std::uint64_t num = d - k + 1;
        if (binom > cap / num) return cap;
        binom = binom * num / k;
        if (total > cap - binom) return cap;
        total += binom;
    }
    return total;
}

namespace {

/// The one place the pricing objective is assembled, so every route agrees bit for bit.
double combine(double align, std::size_t na, std::size_t n, std::size_t size, const PricingPenalties& pen,
               Sign sign) noexcept {
    const double nd = static_cast<double>(n);
    return sign_factor(sign) * align / nd + pen.gamma * static_cast<double>(na) / nd + pen.lambda0 +
           pen.lambda1 * static_cast<double>(size);
}

bool is_excluded(std::span<const Rule> exclude, std::span<const std::uint32_t> lits) {
    return std::ranges::any_of(exclude, [&](const Rule& r) { return std::ranges::equal(r.literals(), lits); });
}

bool lits_canonical_less(std::span<const std::uint32_t> a, std::span<const std::uint32_t> b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return std::ranges::lexicographical_compare(a, b);
}

struct Best {
    bool found = false;
    double objective = std::numeric_limits<double>::infinity();
    std::vector<std::uint32_t> literals;
    Sign sign = Sign::plus;

    bool beaten_by(double obj, std::span<const std::uint32_t> lits, Sign s) const {
        if (!found) return true;
        if (obj != objective) return obj < objective;
        if (!std::ranges::equal(lits, literals)) return lits_canonical_less(lits, literals);
        return s == Sign::plus && sign == Sign::minus;
    }
    void offer(double obj, std::span<const std::uint32_t> lits, Sign s) {
        if (beaten_by(obj, lits, s)) {
            found = true;
            objective = obj;
            literals.assign(lits.begin(), lits.end());
            sign = s;
        }
    }
    void merge(const Best& o) {
        if (o.found) offer(o.objective, o.literals, o.sign);
    }
};

void check_residual(std::span<const double> residual, std::size_t n) {
    if (residual.size() != n)
        throw DimensionError("residual has " + std::to_string(residual.size()) + " entries, expected " +
                             std::to_string(n));
}

} // namespace

double rule_objective(const Rule& rule, std::span<const double> residual, const BinaryDataset& ds,
                      const PricingPenalties& pen, Sign sign) {
    if (rule.is_intercept()) throw DomainError("pricing objective is undefined for the empty rule");
    check_rules(std::span(&rule, 1), ds.d());
    check_residual(residual, ds.n());
    double align = 0.0;
    std::size_t na = 0;
    for (std::size_t i = 0; i < ds.n(); ++i) {
        switch (eval_rule_trivalued(rule, ds.xbar.row(i), ds.mask.row(i))) {
            case TriValue::True: align += residual[i]; break;
            case TriValue::NA: ++na; break;
            case TriValue::False: break;
        }
    }
    return combine(align, na, ds.n(), rule.size(), pen, sign);
}

Pricer::Pricer(const BinaryDataset& ds) : ds_(&ds), packed_(ds) {}

double Pricer::objective(const RuleBits& bits, std::size_t rule_size, std::span<const double> residual,
                         const PricingPenalties& pen, Sign sign) const {
    return combine(bits.any_true.masked_sum(residual), bits.reliance_count(), n(), rule_size, pen, sign);
}

PricingResult Pricer::finish(const Rule& rule, double objective, Sign sign) const {
    PricingResult res;
    res.found = true;
    res.rule = rule;
    res.objective = objective;
    res.sign = sign;
    const RuleBits bits(packed_, rule);
    res.a.resize(n());
    res.rho.resize(n());
    for (std::size_t i = 0; i < n(); ++i) {
        const bool t = bits.any_true.test(i);
        res.a[i] = t ? 1 : 0;
        res.rho[i] = (!t && bits.any_missing.test(i)) ? 1 : 0;
    }
    return res;
}

PricingResult Pricer::beam(std::span<const double> residual, const PricingPenalties& pen, std::size_t width,
                           std::size_t depth, std::span<const Rule> exclude, Exec exec) const {
    if (width < 1) throw DomainError("beam width must be >= 1");
    if (depth < 1) throw DomainError("beam depth must be >= 1");
    check_residual(residual, n());

    struct Entry {
        std::vector<std::uint32_t> literals;
        RuleBits bits;
    };
    struct Candidate {
        std::size_t parent;  // index into the current beam; npos at level 1
        std::uint32_t literal;
        double objective;
        std::vector<std::uint32_t> literals;
    };
    constexpr auto npos = std::numeric_limits<std::size_t>::max();

    Best best;
    for (const Sign sign : {Sign::plus, Sign::minus}) {
        std::vector<Entry> beam_entries;
        std::vector<Candidate> cands;
        cands.reserve(d());
        for (std::uint32_t j = 0; j < d(); ++j) cands.push_back({npos, j, 0.0, {j}});

        for (std::size_t level = 1; level <= depth && !cands.empty(); ++level) {
            const auto count = static_cast<std::ptrdiff_t>(cands.size());
#pragma omp parallel if (exec == Exec::parallel)
            {
                RuleBits scratch(n());
#pragma omp for schedule(dynamic, 16)
                for (std::ptrdiff_t c = 0; c < count; ++c) {
                    auto& cand = cands[static_cast<std::size_t>(c)];
                    if (cand.parent == npos) {
                        scratch = RuleBits(n());
                    } else {
                        scratch = beam_entries[cand.parent].bits;
                    }
                    scratch.add(packed_, cand.literal);
                    cand.objective = objective(scratch, cand.literals.size(), residual, pen, sign);
                }
            }

            for (const auto& cand : cands)
                if (!is_excluded(exclude, cand.literals)) best.offer(cand.objective, cand.literals, sign);
            if (level == depth) break;

            const std::size_t keep = std::min(width, cands.size());
            std::partial_sort(cands.begin(), cands.begin() + static_cast<std::ptrdiff_t>(keep), cands.end(),
                              [](const Candidate& a, const Candidate& b) {
                                  if (a.objective != b.objective) return a.objective < b.objective;
                                  return lits_canonical_less(a.literals, b.literals);
                              });

            std::vector<Entry> next_beam;
            next_beam.reserve(keep);
            for (std::size_t b = 0; b < keep; ++b) {
                const auto& cand = cands[b];
                RuleBits bits = cand.parent == npos ? RuleBits(n()) : beam_entries[cand.parent].bits;
                bits.add(packed_, cand.literal);
                next_beam.push_back({cand.literals, std::move(bits)});
            }
            beam_entries = std::move(next_beam);

            cands.clear();
            for (std::size_t b = 0; b < beam_entries.size(); ++b) {
                const auto& lits = beam_entries[b].literals;
                for (std::uint32_t j = lits.back() + 1; j < d(); ++j) {
                    auto ext = lits;
                    ext.push_back(j);
                    cands.push_back({b, j, 0.0, std::move(ext)});
                }
            }
        }
    }

    if (!best.found) return {};
    return finish(Rule(best.literals), best.objective, best.sign);
}

PricingResult Pricer::exhaustive(std::span<const double> residual, const PricingPenalties& pen,
                                 std::size_t max_size, std::span<const Rule> exclude, Exec exec) const {
    if (max_size < 1) throw DomainError("max_size must be >= 1");
    check_residual(residual, n());
    const std::uint64_t total = candidate_count(d(), max_size);
    if (total > max_exhaustive_candidates) throw SearchSpaceError(total);

    const std::size_t cap = std::min(max_size, d());
    std::vector<Best> per_root(d());
    const auto roots = static_cast<std::ptrdiff_t>(d());

#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
    for (std::ptrdiff_t r = 0; r < roots; ++r) {
        Best local;
        std::vector<RuleBits> levels(cap, RuleBits(n()));
        std::vector<std::uint32_t> lits;
        lits.reserve(cap);

        auto visit = [&](auto&& self, std::uint32_t j) -> void {
            const std::size_t depth = lits.size();
            if (depth == 0)
                levels[0] = RuleBits(n());
            else
                levels[depth] = levels[depth - 1];
            levels[depth].add(packed_, j);
            lits.push_back(j);
            if (!is_excluded(exclude, lits)) {
                const double align = levels[depth].any_true.masked_sum(residual);
                const std::size_t na = levels[depth].reliance_count();
                local.offer(combine(align, na, n(), lits.size(), pen, Sign::plus), lits, Sign::plus);
                local.offer(combine(align, na, n(), lits.size(), pen, Sign::minus), lits, Sign::minus);
            }
            if (lits.size() < cap)
                for (std::uint32_t k = j + 1; k < d(); ++k) self(self, k);
            lits.pop_back();
        };
        visit(visit, static_cast<std::uint32_t>(r));
        per_root[static_cast<std::size_t>(r)] = std::move(local);
    }

    Best best;
    for (const auto& b : per_root) best.merge(b);
    if (!best.found) return {};
    return finish(Rule(best.literals), best.objective, best.sign);
}

PricingResult beam_search_pricing(std::span<const double> residual, const BinaryDataset& ds,
                                  const PricingPenalties& pen, std::size_t width, std::size_t depth,
                                  std::span<const Rule> exclude, Exec exec) {
    return Pricer(ds).beam(residual, pen, width, depth, exclude, exec);
}

PricingResult exhaustive_pricing(std::span<const double> residual, const BinaryDataset& ds,
                                 const PricingPenalties& pen, std::size_t max_size,
                                 std::span<const Rule> exclude, Exec exec) {
    return Pricer(ds).exhaustive(residual, pen, max_size, exclude, exec);
}

} // namespace minty
