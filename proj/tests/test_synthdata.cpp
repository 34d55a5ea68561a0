#include <doctest.h>

#include <cmath>

#include "minty/activation.hpp"
#include "minty/metrics.hpp"
#include "minty/synthdata.hpp"
#include "minty/weighted_lasso.hpp"

using namespace minty;

TEST_CASE("replacement pairs: delta = 0 copies the base feature") {
    PairSpec spec;
    spec.n = 2000;
    spec.c = 5;
    spec.delta = 0.0;
    const auto d = gen_replacement_pairs(spec);
    for (std::size_t i = 0; i < spec.n; ++i)
        for (std::size_t k = 0; k < 5; ++k) CHECK(d.x(i, k) == d.x(i, 5 + k));
    CHECK(d.names.front() == "X1");
    CHECK(d.names.back() == "X5_rep");
}

TEST_CASE("replacement pairs: disagreement rate") {
    PairSpec spec;
    spec.n = 100000;
    spec.c = 3;
    spec.delta = 0.1;
    const auto d = gen_replacement_pairs(spec);
    for (std::size_t k = 0; k < 3; ++k) {
        double dis = 0.0;
        for (std::size_t i = 0; i < spec.n; ++i) dis += d.x(i, k) != d.x(i, 3 + k);
        dis /= static_cast<double>(spec.n);
        CHECK(dis >= 0.095);
        CHECK(dis <= 0.105);
    }
}

TEST_CASE("replacement pairs: noiseless unit coefficient") {
    PairSpec spec;
    spec.n = 500;
    spec.c = 4;
    spec.sigma = 0.0;
    spec.beta.assign(8, 0.0);
    spec.beta[0] = 1.0;
    const auto d = gen_replacement_pairs(spec);
    for (std::size_t i = 0; i < spec.n; ++i) CHECK(d.y[i] == d.x(i, 0));
}

TEST_CASE("pair spec validation and default coefficients") {
    PairSpec spec;
    spec.delta = 1.5;
    CHECK_THROWS_AS(spec.validate(), DomainError);
    spec.delta = 0.1;
    spec.beta = {1.0};
    CHECK_THROWS_AS(spec.validate(), DimensionError);
    const auto b = default_pair_beta(20, 3);
    CHECK(b.size() == 20);
    CHECK(std::ranges::all_of(b, [](double v) { return v >= 0.0; }));
    CHECK(b == default_pair_beta(20, 3));
}

TEST_CASE("pair mask") {
    PairSpec spec;
    spec.n = 100000;
    spec.c = 3;
    const auto d = gen_replacement_pairs(spec);
    const auto none = gen_pair_mask(d.x, 0.0, 1);
    CHECK(std::ranges::all_of(none.data(), [](auto v) { return v == 0; }));
    const auto m = gen_pair_mask(d.x, 0.3, 1);
    for (std::size_t i = 0; i < spec.n; ++i)
        for (std::size_t k = 0; k < 3; ++k) CHECK_FALSE((m(i, k) && m(i, 3 + k)));
    for (std::size_t j = 0; j < 6; ++j) {
        double r = 0.0;
        for (std::size_t i = 0; i < spec.n; ++i) r += m(i, j);
        CHECK(std::abs(r / static_cast<double>(spec.n) - 0.3) <= 0.01);
    }
    CHECK_THROWS_AS(gen_pair_mask(d.x, 0.6, 1), DomainError);
    BitMatrix odd(4, 3);
    CHECK_THROWS_AS(gen_pair_mask(odd, 0.1, 1), DimensionError);
}

TEST_CASE("toy generator") {
    const auto ds = gen_toy(20000, 0.0, 4);
    CHECK(ds.d() == 15);
    CHECK(std::ranges::all_of(ds.mask.data(), [](auto v) { return v == 0; }));
    CHECK(ds.literal_names[0] == "Variable 1");
    CHECK(ds.literal_names[4] == "Variable 5");
    double s = 0.0, cnt = 0.0, agree = 0.0;
    for (std::size_t i = 0; i < ds.n(); ++i) {
        agree += ds.xbar(i, 0) == ds.xbar(i, 4);
        if (!ds.xbar(i, 0) && !ds.xbar(i, 4)) {
            s += ds.y[i];
            ++cnt;
        }
    }
    CHECK(s / cnt == doctest::Approx(1.0).epsilon(0.05));
    CHECK(agree / 20000.0 == doctest::Approx(0.95).epsilon(0.02));
    CHECK(gen_toy(100, 0.2, 4) == gen_toy(100, 0.2, 4));
    const auto masked = gen_toy(5000, 0.1, 4);
    CHECK_NOTHROW(validate_dataset(masked));
    CHECK_THROWS_AS(gen_toy(0, 0.1, 1), DomainError);
}

TEST_CASE("presets") {
    CHECK(preset("sec4").n == 5000);
    CHECK(preset("sec4").columns == 60);
    CHECK(preset("appendix").n == 7000);
    CHECK(preset("appendix").columns == 15);
    CHECK_THROWS_AS(preset("table9"), DomainError);
}

TEST_CASE("pair-rule model has no bias when replacements are exact") {
    PairSpec spec;
    spec.n = 20000;
    spec.c = 4;
    spec.delta = 0.0;
    spec.sigma = 0.5;
    spec.beta.assign(8, 1.0);
    spec.seed = 12;
    const auto d = gen_replacement_pairs(spec);
    const auto ds = make_dataset(d.x, gen_pair_mask(d.x, 0.3, 13), d.y);
    std::vector<Rule> rules{Rule::intercept()};
    for (std::uint32_t k = 0; k < 4; ++k) rules.push_back(Rule{k, k + 4});
    const auto act = activation_matrix(ds, rules);
    std::vector<double> yhat(ds.n());
    std::vector<std::uint8_t> relied(ds.n());
    for (std::size_t i = 0; i < ds.n(); ++i)
        for (std::size_t k = 1; k < 5; ++k) {
            yhat[i] += 2.0 * act.a(i, k);
            relied[i] |= act.rho(i, k);
        }
    const auto rep = evaluate_predictions(yhat, ds.y, relied, 0);
    double se = 0.0;
    for (std::size_t i = 0; i < ds.n(); ++i) {
        const double e = (yhat[i] - ds.y[i]) * (yhat[i] - ds.y[i]) - rep.mse;
        se += e * e;
    }
    se = std::sqrt(se / static_cast<double>(ds.n() - 1) / static_cast<double>(ds.n()));
    CHECK(rep.mse <= 0.25 + 3.0 * se);
    // a pair is NA when one side is masked and the other is observed 0
    const double expected = 1.0 - std::pow(1.0 - 2.0 * 0.3 * 0.5, 4);
    CHECK(std::abs(rep.rho_bar - expected) <= 4.0 * std::sqrt(expected * (1.0 - expected) / 20000.0));
}
