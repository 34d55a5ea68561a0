#include "minty/column_generation.hpp"

#include <algorithm>
#include <cmath>

#include "minty/activation.hpp"
#include "minty/weighted_lasso.hpp"

namespace minty {

const char* to_string(Termination t) noexcept {
    switch (t) {
        case Termination::optimal: return "optimal";
        case Termination::k_max: return "k_max";
        case Termination::no_candidate: return "no_candidate";
    }
    return "?";
}

namespace {

Matrix<double> design(const std::vector<std::vector<std::uint8_t>>& cols, std::size_t n) {
    Matrix<double> A(n, cols.size());
    for (std::size_t k = 0; k < cols.size(); ++k)
        for (std::size_t i = 0; i < n; ++i) A(i, k) = cols[k][i];
    return A;
}

std::size_t count_nonzero(std::span<const double> beta) {
    return static_cast<std::size_t>(std::ranges::count_if(beta, [](double b) { return b != 0.0; }));
}

} // namespace

FitResult fit_minty(const BinaryDataset& ds, const FitConfig& cfg, Exec exec) {
    cfg.validate();
    validate_dataset(ds);
    const std::size_t n = ds.n();
    if (n < 2) throw DomainError("fit_minty needs at least two rows");

    const Pricer pricer(ds);
    const PricingPenalties pen{cfg.gamma, cfg.lambda0, cfg.lambda1};
    const std::size_t width = cfg.resolved_width(ds.d());

    std::vector<Rule> rules{Rule::intercept()};
    std::vector<double> rho_bar{0.0};
    std::vector<std::vector<std::uint8_t>> a_cols{std::vector<std::uint8_t>(n, 1)};
    std::vector<double> beta;
    bool all_converged = true;

    auto refit = [&] {
        const auto w = PenaltyWeights::for_rules(rules, rho_bar, cfg.gamma, cfg.lambda0, cfg.lambda1);
        auto res = fit_weighted_lasso(design(a_cols, n), ds.y, w, cfg, beta);
        beta = std::move(res.beta);
        all_converged = all_converged && res.converged;
        return res.objective;
    };

    FitTrace trace;
    double objective = refit();
    trace.initial_objective = objective;

    std::vector<double> residual(n);
    std::size_t added = 0;
    for (;;) {
        if (added >= cfg.k_max) {
            trace.termination = Termination::k_max;
            break;
        }
        for (std::size_t i = 0; i < n; ++i) {
            double s = 0.0;
            for (std::size_t k = 0; k < rules.size(); ++k) s += beta[k] * a_cols[k][i];
            residual[i] = s - ds.y[i];
        }
        const std::span<const Rule> taken(rules.begin() + 1, rules.end());
        auto priced = cfg.solver == Solver::beam ? pricer.beam(residual, pen, width, cfg.beam_depth, taken, exec)
                                                 : pricer.exhaustive(residual, pen, cfg.beam_depth, taken, exec);
        if (!priced.found) {
            trace.termination = Termination::no_candidate;
            break;
        }
        if (priced.objective >= 0.0) {
            trace.termination = Termination::optimal;
            trace.final_delta = priced.objective;
            break;
        }

        const auto na = std::ranges::count(priced.rho, std::uint8_t{1});
        rules.push_back(priced.rule);
        rho_bar.push_back(static_cast<double>(na) / static_cast<double>(n));
        a_cols.push_back(std::move(priced.a));
        ++added;

        objective = refit();
        trace.steps.push_back({priced.rule, priced.objective, priced.sign, objective, count_nonzero(beta)});
    }

    trace.rules = rules;
    trace.beta = beta;
    trace.rho_bar = rho_bar;

    FitResult out;
    auto& model = out.model;
    for (std::size_t k = 0; k < rules.size(); ++k) {
        if (k == 0 || std::abs(beta[k]) >= coefficient_drop_threshold) {
            model.rules.push_back(rules[k]);
            model.beta.push_back(beta[k]);
        }
    }
    model.literal_names = ds.literal_names;
    model.fit_meta.config = cfg;
    model.fit_meta.converged = all_converged;
    model.fit_meta.termination = to_string(trace.termination);
    model.fit_meta.iterations = added;
    model.fit_meta.objective = objective;
    out.trace = std::move(trace);
    return out;
}

Prediction predict(const RuleModel& model, std::span<const std::uint8_t> xbar_row,
                   std::span<const std::uint8_t> mask_row) {
    if (xbar_row.size() != mask_row.size()) throw DimensionError("xbar and mask rows differ in length");
    if (!model.literal_names.empty() && xbar_row.size() != model.literal_names.size())
        throw DimensionError("row has " + std::to_string(xbar_row.size()) + " literals, model expects " +
                             std::to_string(model.literal_names.size()));
    if (model.beta.size() != model.rules.size()) throw DimensionError("model beta/rules length mismatch");
    check_rules(model.rules, xbar_row.size());

    Prediction p;
    for (std::size_t k = 0; k < model.rules.size(); ++k) {
        switch (eval_rule_trivalued(model.rules[k], xbar_row, mask_row)) {
            case TriValue::True: p.yhat += model.beta[k]; break;
            case TriValue::NA:
                if (model.beta[k] != 0.0) p.relied = true;
                break;
            case TriValue::False: break;
        }
    }
    return p;
}

std::vector<Prediction> predict(const RuleModel& model, const BinaryDataset& ds) {
    std::vector<Prediction> out;
    out.reserve(ds.n());
    for (std::size_t i = 0; i < ds.n(); ++i) out.push_back(predict(model, ds.xbar.row(i), ds.mask.row(i)));
    return out;
}

double reliance_rate(const RuleModel& model, const BinaryDataset& ds) {
    if (ds.n() == 0) return 0.0;
    std::size_t c = 0;
    for (const auto& p : predict(model, ds)) c += p.relied ? 1 : 0;
    return static_cast<double>(c) / static_cast<double>(ds.n());
}

} // namespace minty
