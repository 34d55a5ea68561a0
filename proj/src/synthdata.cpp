#include "minty/synthdata.hpp"

#include <cmath>
#include <random>

#include "minty/exec.hpp"
#include "minty/missingness.hpp"

namespace minty {

namespace {

constexpr std::uint64_t beta_stream = 11;
constexpr std::uint64_t feature_stream = 12;
constexpr std::uint64_t noise_stream = 13;
constexpr std::uint64_t mask_stream = 14;

} // namespace

void PairSpec::validate() const {
    if (!(delta >= 0.0 && delta <= 1.0)) throw DomainError("delta must lie in [0, 1]");
    if (!(sigma >= 0.0)) throw DomainError("sigma must be >= 0");
    if (!(base_p >= 0.0 && base_p <= 1.0)) throw DomainError("base_p must lie in [0, 1]");
    if (c == 0) throw DomainError("c must be >= 1");
    if (!beta.empty() && beta.size() != d())
        throw DimensionError("beta has " + std::to_string(beta.size()) + " entries, expected " +
                             std::to_string(d()));
}

std::vector<double> default_pair_beta(std::size_t d, std::uint64_t seed) {
    std::mt19937_64 rng(derive_seed(seed, beta_stream));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> beta(d);
    for (auto& b : beta) b = std::abs(normal(rng));
    return beta;
}

CompleteData gen_replacement_pairs(const PairSpec& spec) {
    spec.validate();
    const std::size_t c = spec.c;
    const std::size_t d = spec.d();
    const auto beta = spec.beta.empty() ? default_pair_beta(d, spec.seed) : spec.beta;

    CompleteData out;
    out.x = BitMatrix(spec.n, d);
    out.y.resize(spec.n);
    std::mt19937_64 xrng(derive_seed(spec.seed, feature_stream));
    std::mt19937_64 erng(derive_seed(spec.seed, noise_stream));
    std::bernoulli_distribution base(spec.base_p);
    std::bernoulli_distribution flip(spec.delta);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (std::size_t i = 0; i < spec.n; ++i) {
        for (std::size_t k = 0; k < c; ++k) {
            const bool v = base(xrng);
            const bool r = flip(xrng) ? !v : v;
            out.x(i, k) = v ? 1 : 0;
            out.x(i, c + k) = r ? 1 : 0;
        }
        double s = 0.0;
        for (std::size_t j = 0; j < d; ++j) s += beta[j] * out.x(i, j);
        out.y[i] = s + spec.sigma * noise(erng);
    }
    for (std::size_t k = 0; k < c; ++k) out.names.push_back("X" + std::to_string(k + 1));
    for (std::size_t k = 0; k < c; ++k) out.names.push_back("X" + std::to_string(k + 1) + "_rep");
    return out;
}

BitMatrix gen_pair_mask(const BitMatrix& x_complete, double q, std::uint64_t seed) {
    if (!(q >= 0.0 && q <= 0.5)) throw DomainError("pair mask rate q must lie in [0, 0.5]");
    const std::size_t d = x_complete.cols();
    if (d % 2 != 0) throw DimensionError("pair mask needs an even column count");
    const std::size_t c = d / 2;
    BitMatrix mask(x_complete.rows(), d);
    if (q == 0.0) return mask;
    std::mt19937_64 rng(derive_seed(seed, mask_stream));
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t i = 0; i < x_complete.rows(); ++i) {
        for (std::size_t k = 0; k < c; ++k) {
            const double draw = u(rng);
            if (draw < q)
                mask(i, k) = 1;
            else if (draw < 2.0 * q)
                mask(i, c + k) = 1;
        }
    }
    return mask;
}

CompleteData gen_toy_complete(std::size_t n, std::uint64_t seed) {
    if (n < 1) throw DomainError("toy generator needs n >= 1");
    CompleteData out;
    out.x = BitMatrix(n, toy_columns);
    out.y.resize(n);
    std::mt19937_64 xrng(derive_seed(seed, feature_stream));
    std::mt19937_64 erng(derive_seed(seed, noise_stream));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::bernoulli_distribution copy(0.9);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < toy_columns; ++j) out.x(i, j) = normal(xrng) > 0.0 ? 1 : 0;
        if (copy(xrng)) out.x(i, 4) = out.x(i, 0);
        const double rule = std::max(out.x(i, 0), out.x(i, 4));
        out.y[i] = 1.0 + 2.0 * rule + normal(erng);
    }
    for (std::size_t j = 0; j < toy_columns; ++j) out.names.push_back("Variable " + std::to_string(j + 1));
    return out;
}

BinaryDataset gen_toy(std::size_t n, double p_miss, std::uint64_t seed) {
    auto data = gen_toy_complete(n, seed);
    const auto mask = mask_mcar(data.x, p_miss, derive_seed(seed, mask_stream));
    return make_dataset(data.x, mask, std::move(data.y), std::move(data.names));
}

Preset preset(const std::string& name) {
    if (name == "sec4") return {"sec4", "pairs", 5000, 60};
    if (name == "appendix") return {"appendix", "toy", 7000, toy_columns};
    throw DomainError("unknown preset '" + name + "' (expected sec4 or appendix)");
}

} // namespace minty
