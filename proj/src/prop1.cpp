#include "minty/prop1.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace minty {

double beta_norm_sq(std::span<const double> beta) noexcept {
    double s = 0.0;
    for (double b : beta) s += b * b;
    return s;
}

double pair_cross_sum(std::span<const double> beta) noexcept {
    const std::size_t d = beta.size();
    const std::size_t c = d / 2;
    double s = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        const std::size_t partner = (i + c) % d;
        for (std::size_t k = 0; k < d; ++k)
            if (k != i && k != partner) s += std::abs(beta[i] * beta[k]);
    }
    return s;
}

double prop1_upper_bound(double delta, std::span<const double> beta, double sigma) noexcept {
    return delta * beta_norm_sq(beta) + delta * delta * pair_cross_sum(beta) + sigma * sigma;
}

double prop1_lower_bound(double eta, std::span<const double> beta, double sigma) noexcept {
    return eta * beta_norm_sq(beta) + sigma * sigma;
}

double prop1_threshold(double eta, std::span<const double> beta) noexcept {
    const double cross = pair_cross_sum(beta);
    if (cross == 0.0) return std::numeric_limits<double>::infinity();
    const double a = beta_norm_sq(beta) / cross;
    return (std::sqrt(a * a + 4.0 * eta) - a) / 2.0;
}

double prop1_crossover(double eta, std::span<const double> beta) noexcept {
    const double cross = pair_cross_sum(beta);
    if (cross == 0.0) return eta;
    const double a = beta_norm_sq(beta) / cross;
    return (std::sqrt(a * a + 4.0 * eta * a) - a) / 2.0;
}

bool Prop1Report::upper_holds(double k) const noexcept { return risk_glrm_mc <= bound_upper + k * risk_glrm_se; }

bool Prop1Report::lower_holds(double k) const noexcept {
    return risk_linear_mc >= bound_lower - k * risk_linear_se;
}

namespace {

/// Streaming mean and sum of squared deviations; merges with Chan's update.
struct Moments {
    double count = 0.0;
    double mean = 0.0;
    double m2 = 0.0;

    void push(double x) noexcept {
        count += 1.0;
        const double dx = x - mean;
        mean += dx / count;
        m2 += dx * (x - mean);
    }
    void merge(const Moments& o) noexcept {
        if (o.count == 0.0) return;
        const double total = count + o.count;
        const double dx = o.mean - mean;
        mean += dx * o.count / total;
        m2 += o.m2 + dx * dx * count * o.count / total;
        count = total;
    }
    double standard_error() const noexcept {
        return count > 1.0 ? std::sqrt(m2 / (count - 1.0) / count) : 0.0;
    }
};

struct BatchStats {
    Moments glrm;
    Moments linear;
    std::size_t relied_glrm = 0;
    std::size_t relied_linear = 0;
    std::vector<std::size_t> missing_true;  // per feature, count of x_i = 1 and m_i = 1
};

constexpr std::size_t batch_size = 1 << 16;

} // namespace

Prop1Report run_prop1_experiment(const PairSpec& spec, double q, std::size_t mc_samples, std::uint64_t seed,
                                 Exec exec) {
    spec.validate();
    if (!(q >= 0.0 && q <= 0.5)) throw DomainError("pair-mask rate q must lie in [0, 0.5]");
    if (mc_samples < 2) throw DomainError("need at least two Monte-Carlo samples");
    const std::size_t c = spec.c;
    const std::size_t d = spec.d();
    const auto beta = spec.beta.empty() ? default_pair_beta(d, spec.seed) : spec.beta;
    for (double b : beta)
        if (b < 0.0) throw DomainError("the lower bound requires beta >= 0 elementwise");

    std::vector<double> rule_coef(c);
    for (std::size_t k = 0; k < c; ++k) rule_coef[k] = beta[k] + beta[c + k];

    const std::size_t batches = (mc_samples + batch_size - 1) / batch_size;
    std::vector<BatchStats> stats(batches);
    const auto nb = static_cast<std::ptrdiff_t>(batches);

#pragma omp parallel for schedule(dynamic) if (exec == Exec::parallel)
    for (std::ptrdiff_t bs = 0; bs < nb; ++bs) {
        const auto b = static_cast<std::size_t>(bs);
        const std::size_t count = std::min(batch_size, mc_samples - b * batch_size);
        std::mt19937_64 rng(derive_seed(seed, b));
        std::bernoulli_distribution base(spec.base_p);
        std::bernoulli_distribution flip(spec.delta);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        std::normal_distribution<double> noise(0.0, 1.0);
        std::vector<std::uint8_t> x(d);
        std::vector<std::uint8_t> m(d);
        BatchStats& st = stats[b];
        st.missing_true.assign(d, 0);

        for (std::size_t s = 0; s < count; ++s) {
            for (std::size_t k = 0; k < c; ++k) {
                const bool v = base(rng);
                x[k] = v ? 1 : 0;
                x[c + k] = (flip(rng) ? !v : v) ? 1 : 0;
                const double draw = u(rng);
                m[k] = draw < q ? 1 : 0;
                m[c + k] = (draw >= q && draw < 2.0 * q) ? 1 : 0;
            }
            double mu = 0.0;
            for (std::size_t j = 0; j < d; ++j) mu += beta[j] * x[j];
            const double y = mu + spec.sigma * noise(rng);

            double h = 0.0;
            bool na_glrm = false;
            for (std::size_t k = 0; k < c; ++k) {
                const bool xb = x[k] && !m[k];
                const bool rb = x[c + k] && !m[c + k];
                if (xb || rb)
                    h += rule_coef[k];
                else if ((m[k] || m[c + k]) && rule_coef[k] != 0.0)
                    na_glrm = true;
            }
            double lin = 0.0;
            bool na_linear = false;
            for (std::size_t j = 0; j < d; ++j) {
                if (m[j]) {
                    if (beta[j] != 0.0) na_linear = true;
                    if (x[j]) ++st.missing_true[j];
                } else {
                    lin += beta[j] * x[j];
                }
            }
            st.glrm.push((h - y) * (h - y));
            st.linear.push((lin - y) * (lin - y));
            st.relied_glrm += na_glrm ? 1 : 0;
            st.relied_linear += na_linear ? 1 : 0;
        }
    }

    Moments glrm;
    Moments linear;
    std::size_t relied_glrm = 0;
    std::size_t relied_linear = 0;
    std::vector<std::size_t> missing_true(d, 0);
    for (const auto& st : stats) {
        glrm.merge(st.glrm);
        linear.merge(st.linear);
        relied_glrm += st.relied_glrm;
        relied_linear += st.relied_linear;
        for (std::size_t j = 0; j < d; ++j) missing_true[j] += st.missing_true[j];
    }

    const double total = static_cast<double>(mc_samples);
    Prop1Report r;
    r.delta = spec.delta;
    r.q = q;
    r.sigma = spec.sigma;
    r.mc_samples = mc_samples;
    r.eta = std::numeric_limits<double>::infinity();
    for (auto cnt : missing_true) r.eta = std::min(r.eta, static_cast<double>(cnt) / total);
    r.beta_norm_sq = beta_norm_sq(beta);
    r.cross_sum = pair_cross_sum(beta);
    r.risk_glrm_mc = glrm.mean;
    r.risk_glrm_se = glrm.standard_error();
    r.risk_linear_mc = linear.mean;
    r.risk_linear_se = linear.standard_error();
    r.bound_upper = prop1_upper_bound(spec.delta, beta, spec.sigma);
    r.bound_lower = prop1_lower_bound(r.eta, beta, spec.sigma);
    r.threshold = prop1_threshold(r.eta, beta);
    r.threshold_crossover = prop1_crossover(r.eta, beta);
    r.rho_glrm = static_cast<double>(relied_glrm) / total;
    r.rho_linear = static_cast<double>(relied_linear) / total;
    return r;
}

nlohmann::json to_json(const Prop1Report& r) {
    using nlohmann::json;
    auto finite_or_null = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
    return json{{"delta", r.delta},
                {"q", r.q},
                {"eta", r.eta},
                {"sigma", r.sigma},
                {"beta_norm_sq", r.beta_norm_sq},
                {"cross_sum", r.cross_sum},
                {"risk_glrm_mc", r.risk_glrm_mc},
                {"risk_glrm_se", r.risk_glrm_se},
                {"risk_linear_mc", r.risk_linear_mc},
                {"risk_linear_se", r.risk_linear_se},
                {"bound_upper", r.bound_upper},
                {"bound_lower", r.bound_lower},
                {"threshold", finite_or_null(r.threshold)},
                {"threshold_crossover", r.threshold_crossover},
                {"rho_glrm", r.rho_glrm},
                {"rho_linear", r.rho_linear},
                {"mc_samples", r.mc_samples},
                {"upper_bound_holds", r.upper_holds()},
                {"lower_bound_holds", r.lower_holds()}};
}

} // namespace minty
