#include <doctest.h>

#include "minty/activation.hpp"
#include "oracles.hpp"

using namespace minty;

namespace {

// Row with literal j set from an oracle cell.
void fill(std::vector<std::uint8_t>& x, std::vector<std::uint8_t>& m, const std::vector<oracle::Cell>& cells) {
    x.assign(cells.size(), 0);
    m.assign(cells.size(), 0);
    for (std::size_t j = 0; j < cells.size(); ++j) {
        if (cells[j] == oracle::Cell::one) x[j] = 1;
        if (cells[j] == oracle::Cell::na) m[j] = 1;
    }
}

TriValue to_tri(oracle::Truth t) {
    switch (t) {
        case oracle::Truth::t: return TriValue::True;
        case oracle::Truth::f: return TriValue::False;
        case oracle::Truth::na: return TriValue::NA;
    }
    return TriValue::NA;
}

} // namespace

TEST_CASE("three-valued disjunction examples") {
    const Rule r{0, 1};
    const std::vector<std::uint8_t> x0na{0, 0}, m0na{0, 1};
    CHECK(eval_rule_trivalued(r, x0na, m0na) == TriValue::NA);
    const std::vector<std::uint8_t> x1na{1, 0}, m1na{0, 1};
    CHECK(eval_rule_trivalued(r, x1na, m1na) == TriValue::True);
    const std::vector<std::uint8_t> x00{0, 0}, m00{0, 0};
    CHECK(eval_rule_trivalued(r, x00, m00) == TriValue::False);
    CHECK(eval_rule_trivalued(Rule::intercept(), x0na, m0na) == TriValue::True);
}

TEST_CASE("three-valued disjunction matches the case analysis on every pattern") {
    std::vector<std::uint8_t> x, m;
    std::size_t cases = 0;
    for (int code = 0; code < 81; ++code) {
        std::vector<oracle::Cell> cells(4);
        int c = code;
        for (auto& cell : cells) {
            cell = static_cast<oracle::Cell>(c % 3);
            c /= 3;
        }
        fill(x, m, cells);
        for (std::uint32_t mask = 1; mask < 16; ++mask) {
            std::vector<std::uint32_t> lits;
            std::vector<oracle::Cell> sub;
            for (std::uint32_t j = 0; j < 4; ++j)
                if (mask >> j & 1U) {
                    lits.push_back(j);
                    sub.push_back(cells[j]);
                }
            CHECK(eval_rule_trivalued(Rule(lits), x, m) == to_tri(oracle::disjunction(sub)));
            ++cases;
        }
    }
    CHECK(cases == 81 * 15);
}

TEST_CASE("activation matrix examples") {
    const auto ds = make_dataset(bit_matrix({{0, 0}, {1, 0}}), bit_matrix({{1, 0}, {0, 1}}), {0.0, 0.0});
    const std::vector<Rule> rules{Rule::intercept(), Rule{0, 1}, Rule{0}};
    const auto r = activation_matrix(ds, rules);
    CHECK(r.a(0, 1) == 0);
    CHECK(r.rho(0, 1) == 1);
    CHECK(r.a(1, 1) == 1);
    CHECK(r.rho(1, 1) == 0);
    for (std::size_t i = 0; i < 2; ++i) {
        CHECK(r.a(i, 0) == 1);
        CHECK(r.rho(i, 0) == 0);
    }
    const auto one = make_dataset(bit_matrix({{0}}), bit_matrix({{0}}), {0.0});
    const std::vector<Rule> single{Rule::intercept(), Rule{0}};
    const auto s = activation_matrix(one, single);
    CHECK(s.a(0, 1) == 0);
    CHECK(s.rho(0, 1) == 0);
}

TEST_CASE("activation matrix rejects out-of-range literals") {
    const auto ds = oracle::random_dataset(5, 3, 0.2, 1);
    const std::vector<Rule> rules{Rule::intercept(), Rule{3}};
    CHECK_THROWS_AS(activation_matrix(ds, rules), DimensionError);
    CHECK_THROWS_AS(activation_matrix_reference(ds, rules), DimensionError);
}

TEST_CASE("packed kernel, reference and oracle agree; serial equals parallel") {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto ds = oracle::random_dataset(150 + 37 * seed, 9, 0.25, seed);
        std::vector<Rule> rules{Rule::intercept()};
        std::mt19937_64 rng(seed + 100);
        for (int k = 0; k < 30; ++k) {
            std::vector<std::uint32_t> lits;
            for (std::uint32_t j = 0; j < 9; ++j)
                if (rng() % 3 == 0) lits.push_back(j);
            if (lits.empty()) lits.push_back(static_cast<std::uint32_t>(rng() % 9));
            rules.emplace_back(lits);
        }
        const auto par = activation_matrix(ds, rules, Exec::parallel);
        const auto ser = activation_matrix(ds, rules, Exec::serial);
        const auto ref = activation_matrix_reference(ds, rules);
        CHECK(par.a == ser.a);
        CHECK(par.rho == ser.rho);
        CHECK(par.a == ref.a);
        CHECK(par.rho == ref.rho);
        for (std::size_t i = 0; i < ds.n(); ++i)
            for (std::size_t k = 1; k < rules.size(); ++k) {
                const auto t = oracle::truth_of(ds, i, rules[k].literals());
                CHECK(par.a(i, k) == (t == oracle::Truth::t ? 1 : 0));
                CHECK(par.rho(i, k) == (t == oracle::Truth::na ? 1 : 0));
                if (par.rho(i, k)) CHECK(par.a(i, k) == 0);
            }
    }
}

TEST_CASE("adding a literal never turns True into False or NA") {
    const auto ds = oracle::random_dataset(300, 6, 0.3, 11);
    for (std::uint32_t a = 0; a < 6; ++a)
        for (std::uint32_t b = a + 1; b < 6; ++b) {
            const std::vector<Rule> rules{Rule{a}, Rule{a, b}};
            const auto r = activation_matrix(ds, rules);
            for (std::size_t i = 0; i < ds.n(); ++i) {
                if (r.a(i, 0)) CHECK(r.a(i, 1) == 1);
                if (r.rho(i, 1) == 0 && r.a(i, 1) == 0) CHECK(r.a(i, 0) == 0);
            }
        }
}

TEST_CASE("mask-free data never relies") {
    const auto ds = oracle::random_dataset(100, 5, 0.0, 3);
    const std::vector<Rule> rules{Rule::intercept(), Rule{0, 1}, Rule{2, 3, 4}};
    const auto r = activation_matrix(ds, rules);
    CHECK(std::ranges::all_of(r.rho.data(), [](auto v) { return v == 0; }));
    for (double v : r.reliance_rates()) CHECK(v == 0.0);
}

TEST_CASE("reliance rates average rho per rule") {
    const auto ds = make_dataset(bit_matrix({{0}, {0}, {1}, {0}}), bit_matrix({{1}, {1}, {0}, {0}}), {0, 0, 0, 0});
    const std::vector<Rule> rules{Rule::intercept(), Rule{0}};
    const auto rates = activation_matrix(ds, rules).reliance_rates();
    CHECK(rates == std::vector<double>{0.0, 0.5});
}
