#include "minty/weighted_lasso.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace minty {

PenaltyWeights PenaltyWeights::for_rules(std::span<const Rule> rules, std::span<const double> rho_bar,
                                         double gamma, double lambda0, double lambda1) {
    if (rho_bar.size() != rules.size()) throw DimensionError("rho_bar length does not match rule count");
    PenaltyWeights pw;
    pw.w.resize(rules.size(), 0.0);
    for (std::size_t k = 0; k < rules.size(); ++k) {
        if (rules[k].is_intercept()) continue;
        pw.w[k] = gamma * rho_bar[k] + lambda0 + lambda1 * static_cast<double>(rules[k].size());
    }
    return pw;
}

double soft_threshold(double v, double t) noexcept {
    if (v > t) return v - t;
    if (v < -t) return v + t;
    return 0.0;
}

namespace {

void check_shapes(const Matrix<double>& A, std::span<const double> y, std::span<const double> w,
                  std::span<const double> beta) {
    if (y.size() != A.rows()) throw DimensionError("y length does not match A rows");
    if (w.size() != A.cols()) throw DimensionError("weight length does not match A columns");
    if (beta.size() != A.cols()) throw DimensionError("beta length does not match A columns");
}

std::vector<double> residual_of(const Matrix<double>& A, std::span<const double> y,
                                std::span<const double> beta) {
    std::vector<double> e(A.rows());
    for (std::size_t i = 0; i < A.rows(); ++i) e[i] = y[i] - predict_linear(A.row(i), beta);
    return e;
}

double objective_from_residual(std::span<const double> e, std::span<const double> w,
                               std::span<const double> beta) {
    double ss = 0.0;
    for (double v : e) ss += v * v;
    double pen = 0.0;
    for (std::size_t k = 0; k < beta.size(); ++k) pen += w[k] * std::abs(beta[k]);
    return ss / static_cast<double>(e.size()) + pen;
}

/// e = y - A beta
double kkt_from_residual(const std::vector<std::vector<double>>& cols, std::span<const double> e,
                         std::span<const double> w, std::span<const double> beta) {
    const double scale = 2.0 / static_cast<double>(e.size());
    double worst = 0.0;
    for (std::size_t k = 0; k < cols.size(); ++k) {
        double dot = 0.0;
        for (std::size_t i = 0; i < e.size(); ++i) dot += cols[k][i] * e[i];
        const double g = -scale * dot;
        const double viol = beta[k] != 0.0 ? std::abs(g + w[k] * (beta[k] > 0 ? 1.0 : -1.0))
                                           : std::max(std::abs(g) - w[k], 0.0);
        worst = std::max(worst, viol);
    }
    return worst;
}

std::vector<std::vector<double>> columns_of(const Matrix<double>& A) {
    std::vector<std::vector<double>> cols(A.cols(), std::vector<double>(A.rows()));
    for (std::size_t i = 0; i < A.rows(); ++i)
        for (std::size_t k = 0; k < A.cols(); ++k) cols[k][i] = A(i, k);
    return cols;
}

} // namespace

double lasso_objective(const Matrix<double>& A, std::span<const double> y, std::span<const double> w,
                       std::span<const double> beta) {
    check_shapes(A, y, w, beta);
    return objective_from_residual(residual_of(A, y, beta), w, beta);
}

double kkt_violation(const Matrix<double>& A, std::span<const double> y, std::span<const double> w,
                     std::span<const double> beta) {
    check_shapes(A, y, w, beta);
    return kkt_from_residual(columns_of(A), residual_of(A, y, beta), w, beta);
}

LassoResult fit_weighted_lasso(const Matrix<double>& A, std::span<const double> y, const PenaltyWeights& pw,
                               const FitConfig& cfg, std::span<const double> warm_start) {
    const std::size_t n = A.rows();
    const std::size_t K = A.cols();
    if (n == 0) throw DimensionError("weighted lasso needs at least one row");
    if (warm_start.size() > K) throw DimensionError("warm start longer than column count");
    for (double wk : pw.w)
        if (!(wk >= 0.0)) throw DomainError("penalty weights must be nonnegative");

    LassoResult res;
    res.beta.assign(K, 0.0);
    std::ranges::copy(warm_start, res.beta.begin());
    check_shapes(A, y, pw.w, res.beta);

    const auto cols = columns_of(A);
    std::vector<double> sq(K, 0.0);
    for (std::size_t k = 0; k < K; ++k)
        for (double v : cols[k]) sq[k] += v * v;

    const double nd = static_cast<double>(n);
    auto e = residual_of(A, y, res.beta);
    double prev = objective_from_residual(e, pw.w, res.beta);

    for (res.sweeps = 1; res.sweeps <= cfg.cd_max_iter; ++res.sweeps) {
        for (std::size_t k = 0; k < K; ++k) {
            const double old = res.beta[k];
            double fresh = 0.0;
            if (sq[k] > 0.0) {
                double rho = sq[k] * old;
                for (std::size_t i = 0; i < n; ++i) rho += cols[k][i] * e[i];
                fresh = soft_threshold(rho, nd * pw.w[k] / 2.0) / sq[k];
            }
            if (fresh != old) {
                const double step = fresh - old;
                for (std::size_t i = 0; i < n; ++i) e[i] -= cols[k][i] * step;
                res.beta[k] = fresh;
            }
        }
        e = residual_of(A, y, res.beta);
        const double obj = objective_from_residual(e, pw.w, res.beta);
        const double decrease = prev - obj;
        prev = obj;
        if (decrease <= cfg.cd_tol * std::max(std::abs(obj), std::numeric_limits<double>::min()) &&
            kkt_from_residual(cols, e, pw.w, res.beta) <= cfg.cd_tol) {
            res.converged = true;
            break;
        }
    }
    res.sweeps = std::min(res.sweeps, cfg.cd_max_iter);
    res.objective = prev;
    return res;
}

double predict_linear(std::span<const double> a_row, std::span<const double> beta) {
    if (a_row.size() != beta.size())
        throw DimensionError("activation row has " + std::to_string(a_row.size()) + " entries, beta has " +
                             std::to_string(beta.size()));
    double s = 0.0;
    for (std::size_t k = 0; k < beta.size(); ++k) s += a_row[k] * beta[k];
    return s;
}

} // namespace minty
