#include "minty/metrics.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <random>

#include "minty/column_generation.hpp"

namespace minty {

namespace {

double mean_of(std::span<const double> v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

/// Linear interpolation between order statistics of a sorted sample.
double percentile(std::span<const double> sorted, double p) {
    const double pos = p * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

Interval percentile_interval(std::vector<double> v) {
    std::ranges::sort(v);
    return {percentile(v, 0.025), percentile(v, 0.975)};
}

} // namespace

double mean_squared_error(std::span<const double> yhat, std::span<const double> y) {
    if (yhat.size() != y.size()) throw DimensionError("prediction and outcome lengths differ");
    if (y.empty()) throw DomainError("mean squared error of an empty sample");
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += (yhat[i] - y[i]) * (yhat[i] - y[i]);
    return s / static_cast<double>(y.size());
}

std::optional<double> r_squared(std::span<const double> yhat, std::span<const double> y) {
    const double mse = mean_squared_error(yhat, y);
    const double mu = mean_of(y);
    double var = 0.0;
    for (double v : y) var += (v - mu) * (v - mu);
    var /= static_cast<double>(y.size());
    if (var <= 0.0) return std::nullopt;
    return 1.0 - mse / var;
}

EvalReport evaluate_predictions(std::span<const double> yhat, std::span<const double> y,
                                std::span<const std::uint8_t> relied, std::size_t bootstrap_reps,
                                std::uint64_t seed, Exec exec) {
    const std::size_t n = y.size();
    if (n == 0) throw DomainError("test set is empty");
    if (yhat.size() != n || relied.size() != n) throw DimensionError("evaluation inputs differ in length");

    EvalReport rep;
    rep.n_test = n;
    rep.mse = mean_squared_error(yhat, y);
    rep.r2 = r_squared(yhat, y);
    std::size_t relied_count = 0;
    for (auto r : relied) relied_count += r ? 1 : 0;
    rep.rho_bar = static_cast<double>(relied_count) / static_cast<double>(n);

    if (bootstrap_reps == 0) {
        rep.mse_ci = {rep.mse, rep.mse};
        if (rep.r2) rep.r2_ci = Interval{*rep.r2, *rep.r2};
        return rep;
    }

    std::vector<double> mse_b(bootstrap_reps);
    std::vector<double> r2_b(bootstrap_reps);
    std::vector<std::uint8_t> r2_ok(bootstrap_reps);
    const auto reps = static_cast<std::ptrdiff_t>(bootstrap_reps);
#pragma omp parallel if (exec == Exec::parallel)
    {
        std::vector<double> ys(n);
        std::vector<double> ps(n);
#pragma omp for schedule(static)
        for (std::ptrdiff_t b = 0; b < reps; ++b) {
            std::mt19937_64 rng(derive_seed(seed, static_cast<std::uint64_t>(b)));
            std::uniform_int_distribution<std::size_t> pick(0, n - 1);
            for (std::size_t i = 0; i < n; ++i) {
                const std::size_t k = pick(rng);
                ys[i] = y[k];
                ps[i] = yhat[k];
            }
            const auto idx = static_cast<std::size_t>(b);
            mse_b[idx] = mean_squared_error(ps, ys);
            const auto r2 = r_squared(ps, ys);
            r2_ok[idx] = r2.has_value();
            r2_b[idx] = r2.value_or(0.0);
        }
    }
    rep.mse_ci = percentile_interval(mse_b);
    std::vector<double> valid;
    for (std::size_t b = 0; b < bootstrap_reps; ++b)
        if (r2_ok[b]) valid.push_back(r2_b[b]);
    if (rep.r2 && !valid.empty()) rep.r2_ci = percentile_interval(std::move(valid));
    return rep;
}

EvalReport evaluate(const RuleModel& model, const BinaryDataset& test, std::size_t bootstrap_reps,
                    std::uint64_t seed, Exec exec) {
    if (test.n() == 0) throw DomainError("test set is empty");
    std::vector<double> yhat(test.n());
    std::vector<std::uint8_t> relied(test.n());
    for (std::size_t i = 0; i < test.n(); ++i) {
        const auto p = predict(model, test.xbar.row(i), test.mask.row(i));
        yhat[i] = p.yhat;
        relied[i] = p.relied ? 1 : 0;
    }
    return evaluate_predictions(yhat, test.y, relied, bootstrap_reps, seed, exec);
}

double reliance_linear(std::span<const double> beta_dense, const BinaryDataset& test) {
    if (beta_dense.size() != test.d())
        throw DimensionError("coefficient vector has " + std::to_string(beta_dense.size()) +
                             " entries, dataset has " + std::to_string(test.d()) + " literals");
    if (test.n() == 0) return 0.0;
    std::size_t c = 0;
    for (std::size_t i = 0; i < test.n(); ++i) {
        const auto m = test.mask.row(i);
        for (std::size_t j = 0; j < test.d(); ++j) {
            if (beta_dense[j] != 0.0 && m[j]) {
                ++c;
                break;
            }
        }
    }
    return static_cast<double>(c) / static_cast<double>(test.n());
}

nlohmann::json to_json(const EvalReport& r) {
    using nlohmann::json;
    auto interval = [](const Interval& iv) { return json::array({iv.lo, iv.hi}); };
    return json{{"mse", r.mse},
                {"mse_ci", interval(r.mse_ci)},
                {"r2", r.r2 ? json(*r.r2) : json(nullptr)},
                {"r2_ci", r.r2_ci ? interval(*r.r2_ci) : json(nullptr)},
                {"rho_bar", r.rho_bar},
                {"n_test", r.n_test}};
}

std::string format_report_table(std::span<const std::pair<std::string, EvalReport>> rows) {
    auto fixed2 = [](double v) {
        char buf[48];
        std::snprintf(buf, sizeof buf, "%.2f", v);
        return std::string(buf);
    };
    auto with_ci = [&](double v, const Interval& ci) {
        return fixed2(v) + " (" + fixed2(ci.lo) + ", " + fixed2(ci.hi) + ")";
    };

    std::vector<std::array<std::string, 4>> cells;
    cells.push_back({"Model", "R2", "MSE", "rho"});
    for (const auto& [name, r] : rows) {
        const std::string r2 = r.r2 ? with_ci(*r.r2, r.r2_ci.value_or(Interval{*r.r2, *r.r2})) : "n/a";
        cells.push_back({name, r2, with_ci(r.mse, r.mse_ci), fixed2(r.rho_bar)});
    }
    std::array<std::size_t, 4> width{};
    for (const auto& row : cells)
        for (std::size_t c = 0; c < 4; ++c) width[c] = std::max(width[c], row[c].size());

    std::string out;
    for (const auto& row : cells) {
        for (std::size_t c = 0; c < 4; ++c) {
            if (c) out += " | ";
            out += row[c];
            if (c + 1 < 4) out.append(width[c] - row[c].size(), ' ');
        }
        out += '\n';
    }
    return out;
}

} // namespace minty
