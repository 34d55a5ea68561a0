#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "minty/binarize.hpp"
#include "minty/column_generation.hpp"
#include "minty/metrics.hpp"
#include "minty/missingness.hpp"
#include "minty/model_io.hpp"
#include "minty/prop1.hpp"
#include "minty/synthdata.hpp"
#include "minty/version.hpp"

namespace minty::cli {

namespace fs = std::filesystem;
using nlohmann::json;

std::size_t display_width(const std::string& s) noexcept {
    std::size_t w = 0;
    for (unsigned char ch : s)
        if ((ch & 0xC0) != 0x80) ++w;
    return w;
}

std::string format_coefficient(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", std::abs(v));
    const std::string digits(buf);
    const bool negative = v < 0.0 && digits != "0.00";
    return (negative ? "−" : "+") + digits;
}

std::vector<double> log_space(double lo, double hi, std::size_t count) {
    if (!(lo > 0.0 && hi >= lo)) throw DomainError("log range needs 0 < lo <= hi");
    if (count == 0) throw DomainError("log range needs at least one point");
    if (count == 1) return {lo};
    std::vector<double> out(count);
    const double a = std::log10(lo);
    const double b = std::log10(hi);
    for (std::size_t i = 0; i < count; ++i)
        out[i] = std::pow(10.0, a + (b - a) * static_cast<double>(i) / static_cast<double>(count - 1));
    out.front() = lo;
    out.back() = hi;
    return out;
}

namespace {

std::string rule_text(const Rule& rule, const std::vector<std::string>& names) {
    std::string s;
    for (auto j : rule.literals()) {
        if (!s.empty()) s += " OR ";
        s += j < names.size() ? names[j] : "[" + std::to_string(j) + "]";
    }
    return s;
}

} // namespace

std::string render_scorecard(const RuleModel& model) {
    model.validate();
    std::vector<std::pair<std::string, std::string>> lines;
    for (std::size_t k = 1; k < model.rules.size(); ++k)
        lines.emplace_back(rule_text(model.rules[k], model.literal_names), format_coefficient(model.beta[k]));
    lines.emplace_back("Intercept", format_coefficient(model.beta[0]));

    std::size_t width = 0;
    for (const auto& l : lines) width = std::max(width, display_width(l.first));
    std::string out;
    for (const auto& [text, coef] : lines) {
        out += text;
        out.append(width - display_width(text) + 3, ' ');
        out += coef;
        out += '\n';
    }
    return out;
}

namespace {

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

constexpr std::uint64_t split_stream = 101;
constexpr std::uint64_t validation_stream = 102;
constexpr std::uint64_t bootstrap_stream = 103;
constexpr std::uint64_t synth_mask_stream = 14;

const std::vector<double> lambda_grid{1e-3, 1e-2, 1e-1};

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag) {
    if (flag) return *flag;
    const char* env = std::getenv("MINTY_SEED");
    if (env == nullptr || *env == '\0') return 0;
    std::uint64_t v = 0;
    const std::string_view s(env);
    auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || ptr != s.data() + s.size())
        throw UsageError("MINTY_SEED must be an unsigned integer, got '" + std::string(s) + "'");
    return v;
}

void write_text(const fs::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw UsageError("cannot open '" + path.string() + "' for writing");
    f << text;
    if (!f) throw UsageError("write to '" + path.string() + "' failed");
}

fs::path manifest_path(const fs::path& output) { return fs::path(output.string() + ".manifest.json"); }

/// Everything needed to rerun a command; written next to each output file.
struct Manifest {
    std::string command;
    std::vector<std::string> args;
    json config = json::object();
    json inputs = json::array();
    json outputs = json::array();
    std::uint64_t seed = 0;
    std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

    void write(const fs::path& output, const json& extra = nullptr) const {
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        json m{{"command", command},
               {"args", args},
               {"config", config},
               {"inputs", inputs},
               {"outputs", outputs},
               {"seed", seed},
               {"wall_clock_seconds", secs},
               {"library_version", version}};
        if (!extra.is_null()) m["results"] = extra;
        write_text(manifest_path(output), m.dump(2) + "\n");
    }
};

void emit(const std::string& text, const std::string& out_path, std::ostream& out) {
    if (out_path.empty())
        out << text;
    else
        write_text(out_path, text);
}

// ---------------------------------------------------------------------------
// Shared options

struct DataOpts {
    std::string data;
    std::string outcome = "y";
    std::size_t n_bins = 4;
};

struct FitOpts {
    std::optional<double> lambda0;
    std::optional<double> lambda1;
    double gamma = 0.0;
    std::size_t k_max = 10;
    std::size_t beam_depth = 7;
    std::size_t beam_width = 0;
    std::string solver = "beam";
    std::size_t cd_max_iter = 10000;
    double cd_tol = 1e-8;
};

struct RunOpts {
    std::optional<std::uint64_t> seed;
    int jobs = 1;
    std::size_t bootstrap_reps = default_bootstrap_reps;
    std::string out;
};

void add_data_opts(CLI::App* app, DataOpts& o) {
    app->add_option("data,--data", o.data, "Input CSV (header row first)")->required();
    app->add_option("--outcome", o.outcome, "Outcome column name")->capture_default_str();
    app->add_option("--n-bins", o.n_bins, "Quantile bins per continuous column")
        ->check(CLI::Range(std::size_t{2}, std::size_t{1000}))
        ->capture_default_str();
}

void add_fit_opts(CLI::App* app, FitOpts& o, bool with_gamma) {
    app->add_option("--lambda0", o.lambda0, "Per-rule penalty (grid-searched when omitted)")
        ->check(CLI::NonNegativeNumber);
    app->add_option("--lambda1", o.lambda1, "Per-literal penalty (grid-searched when omitted)")
        ->check(CLI::NonNegativeNumber);
    if (with_gamma)
        app->add_option("--gamma", o.gamma, "Reliance penalty")->check(CLI::NonNegativeNumber)->capture_default_str();
    app->add_option("--k-max", o.k_max, "Maximum number of rules")->check(CLI::PositiveNumber)->capture_default_str();
    app->add_option("--beam-depth", o.beam_depth, "Beam depth (exact solver: size cap)")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    app->add_option("--beam-width", o.beam_width, "Beam width (0 = number of literals)")->capture_default_str();
    app->add_option("--solver", o.solver, "Pricing solver")
        ->check(CLI::IsMember({"beam", "exact"}))
        ->capture_default_str();
    app->add_option("--cd-tol", o.cd_tol, "Coordinate descent tolerance")->check(CLI::PositiveNumber);
    app->add_option("--cd-max-iter", o.cd_max_iter, "Coordinate descent sweep cap")->check(CLI::PositiveNumber);
}

void add_run_opts(CLI::App* app, RunOpts& o, bool with_bootstrap) {
    app->add_option("--seed", o.seed, "Seed (falls back to MINTY_SEED, then 0)");
    app->add_option("--jobs", o.jobs, "Concurrent fits")->check(CLI::PositiveNumber)->capture_default_str();
    if (with_bootstrap)
        app->add_option("--bootstrap-reps", o.bootstrap_reps, "Bootstrap replicates for intervals")
            ->capture_default_str();
}

FitConfig make_config(const FitOpts& o, double l0, double l1, double gamma, std::uint64_t seed) {
    FitConfig cfg;
    cfg.lambda0 = l0;
    cfg.lambda1 = l1;
    cfg.gamma = gamma;
    cfg.k_max = o.k_max;
    cfg.beam_depth = o.beam_depth;
    cfg.beam_width = o.beam_width;
    cfg.solver = o.solver == "exact" ? Solver::exact : Solver::beam;
    cfg.cd_tol = o.cd_tol;
    cfg.cd_max_iter = o.cd_max_iter;
    cfg.seed = seed;
    cfg.validate();
    return cfg;
}

struct Split {
    std::vector<std::size_t> first;   // larger part, sorted
    std::vector<std::size_t> second;  // held-out fraction, sorted
};

Split split_rows(std::size_t n, double fraction, std::uint64_t seed) {
    if (n < 2) throw UsageError("need at least two rows to split, got " + std::to_string(n));
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    std::mt19937_64 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);
    auto held = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
    held = std::clamp<std::size_t>(held, 1, n - 1);
    Split s;
    s.second.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(held));
    s.first.assign(perm.begin() + static_cast<std::ptrdiff_t>(held), perm.end());
    std::ranges::sort(s.first);
    std::ranges::sort(s.second);
    return s;
}

struct Prepared {
    BinarizationSchema schema;
    BinaryDataset train;
    BinaryDataset test;
    std::size_t dropped_rows = 0;
    std::vector<std::string> warnings;
};

/// Binarize the whole table, then split 80/20 into train and test.
Prepared prepare(const DataOpts& o, std::uint64_t seed, std::ostream& err) {
    const auto table = read_csv_file(o.data);
    if (!table.find(o.outcome))
        throw UsageError("outcome column '" + o.outcome + "' not found in " + o.data);
    auto built = build_schema(table, o.n_bins, {o.outcome});
    if (built.schema.literals.empty()) throw UsageError("no literals could be built from " + o.data);
    auto applied = apply_schema(table, built.schema, o.outcome);
    for (const auto& w : built.warnings) err << "warning: " << w << "\n";
    if (applied.dropped_rows > 0)
        err << "warning: dropped " << applied.dropped_rows << " rows with a missing outcome\n";

    const auto split = split_rows(applied.data.n(), 0.2, derive_seed(seed, split_stream));
    Prepared p;
    p.schema = std::move(built.schema);
    p.train = subset_rows(applied.data, split.first);
    p.test = subset_rows(applied.data, split.second);
    p.dropped_rows = applied.dropped_rows;
    p.warnings = std::move(built.warnings);
    return p;
}

double validation_mse(const RuleModel& model, const BinaryDataset& val) {
    std::vector<double> yhat;
    yhat.reserve(val.n());
    for (const auto& p : predict(model, val)) yhat.push_back(p.yhat);
    return mean_squared_error(yhat, val.y);
}

/// Runs body(i) for i in [0, count) on up to `jobs` threads. The first
/// exception (lowest index) is rethrown.
template <class F>
void run_points(std::size_t count, int jobs, F&& body) {
    std::vector<std::exception_ptr> errors(count);
    const auto n = static_cast<std::ptrdiff_t>(count);
#pragma omp parallel for schedule(dynamic) num_threads(jobs) if (jobs > 1)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        try {
            body(static_cast<std::size_t>(i));
        } catch (...) {
            errors[static_cast<std::size_t>(i)] = std::current_exception();
        }
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

json split_info(const Prepared& p) {
    return json{{"train_rows", p.train.n()},
                {"test_rows", p.test.n()},
                {"literals", p.train.d()},
                {"dropped_rows", p.dropped_rows}};
}

// ---------------------------------------------------------------------------
// Commands

int cmd_fit(const DataOpts& data, const FitOpts& fo, const RunOpts& ro, Manifest& manifest, std::ostream& out,
            std::ostream& err) {
    const std::uint64_t seed = resolve_seed(ro.seed);
    manifest.seed = seed;
    const auto prep = prepare(data, seed, err);
    const Exec inner = ro.jobs > 1 ? Exec::serial : Exec::parallel;

    const auto l0_grid = fo.lambda0 ? std::vector<double>{*fo.lambda0} : lambda_grid;
    const auto l1_grid = fo.lambda1 ? std::vector<double>{*fo.lambda1} : lambda_grid;
    double l0 = l0_grid.front();
    double l1 = l1_grid.front();
    json selection = nullptr;

    if (l0_grid.size() * l1_grid.size() > 1) {
        const auto vs = split_rows(prep.train.n(), 0.2, derive_seed(seed, validation_stream));
        const auto fit_part = subset_rows(prep.train, vs.first);
        const auto val_part = subset_rows(prep.train, vs.second);
        std::vector<std::pair<double, double>> points;
        for (double a : l0_grid)
            for (double b : l1_grid) points.emplace_back(a, b);
        std::vector<double> mse(points.size());
        run_points(points.size(), ro.jobs, [&](std::size_t i) {
            const auto cfg = make_config(fo, points[i].first, points[i].second, fo.gamma, seed);
            mse[i] = validation_mse(fit_minty(fit_part, cfg, inner).model, val_part);
        });
        const auto best = static_cast<std::size_t>(std::ranges::min_element(mse) - mse.begin());
        l0 = points[best].first;
        l1 = points[best].second;
        selection = json::array();
        for (std::size_t i = 0; i < points.size(); ++i)
            selection.push_back({{"lambda0", points[i].first}, {"lambda1", points[i].second}, {"validation_mse", mse[i]}});
    }

    const auto cfg = make_config(fo, l0, l1, fo.gamma, seed);
    auto fit = fit_minty(prep.train, cfg, Exec::parallel);
    fit.model.schema = prep.schema;
    save_model(fit.model, ro.out);

    const auto report = evaluate(fit.model, prep.test, ro.bootstrap_reps, derive_seed(seed, bootstrap_stream));
    const std::vector<std::pair<std::string, EvalReport>> rows{{"MINTY", report}};
    out << render_scorecard(fit.model) << "\n" << format_report_table(rows);
    out << "lambda0=" << format_number(l0) << " lambda1=" << format_number(l1) << " gamma=" << format_number(cfg.gamma)
        << " termination=" << fit.model.fit_meta.termination << "\n";
    if (!fit.model.fit_meta.converged) err << "warning: coordinate descent hit the sweep cap\n";

    manifest.config = {{"fit", to_json(cfg)},
                       {"outcome", data.outcome},
                       {"n_bins", data.n_bins},
                       {"jobs", ro.jobs},
                       {"bootstrap_reps", ro.bootstrap_reps}};
    manifest.inputs = {data.data};
    manifest.outputs = {ro.out};
    manifest.write(ro.out, {{"split", split_info(prep)}, {"selection", selection}, {"test", to_json(report)}});
    return exit_ok;
}

struct SweepOpts {
    std::vector<double> gammas;
    double gamma_min = 1e-6;
    double gamma_max = 1e3;
    std::size_t gamma_count = 20;
};

int cmd_sweep_gamma(const DataOpts& data, const FitOpts& fo, const SweepOpts& so, const RunOpts& ro,
                    Manifest& manifest, std::ostream& out, std::ostream& err) {
    const std::uint64_t seed = resolve_seed(ro.seed);
    manifest.seed = seed;
    const auto prep = prepare(data, seed, err);
    const auto gammas = so.gammas.empty() ? log_space(so.gamma_min, so.gamma_max, so.gamma_count) : so.gammas;
    for (double g : gammas)
        if (!(g >= 0.0)) throw UsageError("gamma values must be >= 0");
    const double l0 = fo.lambda0.value_or(0.01);
    const double l1 = fo.lambda1.value_or(0.01);
    const Exec inner = ro.jobs > 1 ? Exec::serial : Exec::parallel;

    std::vector<EvalReport> reports(gammas.size());
    std::vector<std::size_t> sizes(gammas.size());
    run_points(gammas.size(), ro.jobs, [&](std::size_t i) {
        const auto cfg = make_config(fo, l0, l1, gammas[i], seed);
        const auto fit = fit_minty(prep.train, cfg, inner);
        reports[i] = evaluate(fit.model, prep.test, 0, 0, Exec::serial);
        sizes[i] = fit.model.size() - 1;
    });

    std::string csv = "gamma,r2,mse,rho_bar,n_rules\n";
    for (std::size_t i = 0; i < gammas.size(); ++i) {
        const auto& r = reports[i];
        csv += format_number(gammas[i]) + "," + (r.r2 ? format_number(*r.r2) : "") + "," + format_number(r.mse) + "," +
               format_number(r.rho_bar) + "," + std::to_string(sizes[i]) + "\n";
    }
    emit(csv, ro.out, out);
    if (!ro.out.empty()) {
        manifest.config = {{"fit", to_json(make_config(fo, l0, l1, 0.0, seed))},
                           {"gammas", gammas},
                           {"outcome", data.outcome},
                           {"n_bins", data.n_bins},
                           {"jobs", ro.jobs}};
        manifest.inputs = {data.data};
        manifest.outputs = {ro.out};
        manifest.write(ro.out, {{"split", split_info(prep)}});
    }
    return exit_ok;
}

int cmd_scorecard(const std::string& model_path, const std::string& out_path, Manifest& manifest,
                  std::ostream& out) {
    const auto model = load_model(model_path);
    emit(render_scorecard(model), out_path, out);
    if (!out_path.empty()) {
        manifest.inputs = {model_path};
        manifest.outputs = {out_path};
        manifest.write(out_path);
    }
    return exit_ok;
}

struct SynthOpts {
    std::string preset;
    std::string generator = "toy";
    std::size_t n = 7000;
    std::size_t c = 30;
    double delta = 0.1;
    double sigma = 1.0;
    double base_p = 0.5;
    double q = 0.1;
    std::string mechanism;  // empty: pair mask for pairs, MCAR for toy
    std::size_t pivots = 1;
};

BitMatrix mask_for(const BitMatrix& x, const std::string& mechanism, double q, std::size_t pivots,
                   std::uint64_t seed) {
    if (mechanism == "none") return BitMatrix(x.rows(), x.cols());
    if (mechanism == "pair") return gen_pair_mask(x, q, seed);
    MaskSpec spec{mechanism_from_string(mechanism), q, pivots, derive_seed(seed, synth_mask_stream)};
    return make_mask(x, spec);
}

std::string dataset_csv(const BinaryDataset& ds) {
    std::ostringstream s;
    write_csv(s, dataset_to_table(ds, "y"));
    return s.str();
}

int cmd_synth(SynthOpts so, const CLI::App& app, const RunOpts& ro, Manifest& manifest, std::ostream& out) {
    const std::uint64_t seed = resolve_seed(ro.seed);
    manifest.seed = seed;
    if (!so.preset.empty()) {
        const auto p = preset(so.preset);
        if (app.count("--generator") == 0) so.generator = p.generator;
        if (app.count("--n") == 0) so.n = p.n;
        if (p.generator == "pairs" && app.count("--c") == 0) so.c = p.columns / 2;
    }
    if (so.mechanism.empty()) so.mechanism = so.generator == "pairs" ? "pair" : "mcar";

    BinaryDataset ds;
    if (so.generator == "toy") {
        if (so.mechanism == "mcar") {
            ds = gen_toy(so.n, so.q, seed);
        } else {
            auto data = gen_toy_complete(so.n, seed);
            const auto mask = mask_for(data.x, so.mechanism, so.q, so.pivots, seed);
            ds = make_dataset(data.x, mask, std::move(data.y), std::move(data.names));
        }
    } else {
        PairSpec spec;
        spec.n = so.n;
        spec.c = so.c;
        spec.delta = so.delta;
        spec.sigma = so.sigma;
        spec.base_p = so.base_p;
        spec.seed = seed;
        auto data = gen_replacement_pairs(spec);
        const auto mask = mask_for(data.x, so.mechanism, so.q, so.pivots, seed);
        ds = make_dataset(data.x, mask, std::move(data.y), std::move(data.names));
    }
    emit(dataset_csv(ds), ro.out, out);
    if (!ro.out.empty()) {
        manifest.config = {{"preset", so.preset},
                           {"generator", so.generator},
                           {"n", so.n},
                           {"c", so.c},
                           {"delta", so.delta},
                           {"sigma", so.sigma},
                           {"base_p", so.base_p},
                           {"q", so.q},
                           {"mechanism", so.mechanism},
                           {"pivots", so.pivots}};
        manifest.outputs = {ro.out};
        manifest.write(ro.out);
    }
    return exit_ok;
}

struct MaskOpts {
    std::string data;
    std::string outcome = "y";
    std::string mechanism = "mcar";
    double q = 0.1;
    std::size_t pivots = 1;
};

int cmd_mask(const MaskOpts& mo, const RunOpts& ro, Manifest& manifest, std::ostream& out) {
    const std::uint64_t seed = resolve_seed(ro.seed);
    manifest.seed = seed;
    auto table = read_csv_file(mo.data);
    const auto yc = table.find(mo.outcome);
    if (!yc) throw UsageError("outcome column '" + mo.outcome + "' not found in " + mo.data);

    std::vector<std::size_t> feature_cols;
    for (std::size_t c = 0; c < table.columns.size(); ++c)
        if (c != *yc) feature_cols.push_back(c);
    BitMatrix x(table.rows(), feature_cols.size());
    for (std::size_t k = 0; k < feature_cols.size(); ++k) {
        const auto& col = table.columns[feature_cols[k]];
        for (std::size_t i = 0; i < table.rows(); ++i) {
            const auto& cell = col.cells[i];
            if (!cell || (*cell != "0" && *cell != "1"))
                throw DomainError("column '" + col.name + "' row " + std::to_string(i + 1) +
                                  ": masking needs complete 0/1 features");
            x(i, k) = *cell == "1" ? 1 : 0;
        }
    }
    const auto mask = mask_for(x, mo.mechanism, mo.q, mo.pivots, seed);
    for (std::size_t k = 0; k < feature_cols.size(); ++k)
        for (std::size_t i = 0; i < table.rows(); ++i)
            if (mask(i, k)) table.columns[feature_cols[k]].cells[i].reset();

    std::ostringstream s;
    write_csv(s, table);
    emit(s.str(), ro.out, out);
    if (!ro.out.empty()) {
        manifest.config = {{"outcome", mo.outcome}, {"mechanism", mo.mechanism}, {"q", mo.q}, {"pivots", mo.pivots}};
        manifest.inputs = {mo.data};
        manifest.outputs = {ro.out};
        manifest.write(ro.out);
    }
    return exit_ok;
}

struct Prop1Opts {
    std::size_t c = 4;
    double sigma = 0.5;
    double base_p = 0.5;
    std::size_t mc_samples = 1'000'000;
    std::vector<double> deltas{0.0, 0.05, 0.1, 0.2};
    std::vector<double> qs{0.1, 0.3, 0.5};
    std::vector<double> beta;  // empty: all ones
};

int cmd_prop1(const Prop1Opts& po, const RunOpts& ro, Manifest& manifest, std::ostream& out) {
    const std::uint64_t seed = resolve_seed(ro.seed);
    manifest.seed = seed;
    json reports = json::array();
    std::size_t checks = 0;
    std::size_t passed = 0;
    auto line = [&](bool ok, const char* which, const Prop1Report& r, double risk, const char* rel, double bound,
                    double se) {
        ++checks;
        passed += ok ? 1 : 0;
        char buf[256];
        std::snprintf(buf, sizeof buf, "%s %s delta=%g q=%g risk=%.6f %s bound=%.6f se=%.2e threshold=%.6f\n",
                      ok ? "PASS" : "FAIL", which, r.delta, r.q, risk, rel, bound, se, r.threshold);
        out << buf;
    };
    std::size_t config = 0;
    for (double delta : po.deltas) {
        for (double q : po.qs) {
            PairSpec spec;
            spec.c = po.c;
            spec.delta = delta;
            spec.sigma = po.sigma;
            spec.base_p = po.base_p;
            spec.beta = po.beta.empty() ? std::vector<double>(2 * po.c, 1.0) : po.beta;
            spec.seed = seed;
            const auto r = run_prop1_experiment(spec, q, po.mc_samples, derive_seed(seed, config++));
            line(r.upper_holds(), "upper", r, r.risk_glrm_mc, "<=", r.bound_upper, r.risk_glrm_se);
            line(r.lower_holds(), "lower", r, r.risk_linear_mc, ">=", r.bound_lower, r.risk_linear_se);
            reports.push_back(to_json(r));
        }
    }
    out << passed << "/" << checks << " bound checks passed\n";
    if (!ro.out.empty()) {
        write_text(ro.out, reports.dump(2) + "\n");
        manifest.config = {{"c", po.c},
                           {"sigma", po.sigma},
                           {"base_p", po.base_p},
                           {"mc_samples", po.mc_samples},
                           {"deltas", po.deltas},
                           {"qs", po.qs},
                           {"beta", po.beta.empty() ? json("ones") : json(po.beta)}};
        manifest.outputs = {ro.out};
        manifest.write(ro.out, {{"checks", checks}, {"passed", passed}});
    }
    return passed == checks ? exit_ok : exit_check_failed;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Disjunctive rule models that avoid relying on missing values", "minty"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(version));

    DataOpts data;
    FitOpts fit_opts;
    RunOpts run_opts;
    SweepOpts sweep_opts;
    SynthOpts synth_opts;
    MaskOpts mask_opts;
    Prop1Opts prop1_opts;
    std::string model_path;

    auto* fit = app.add_subcommand("fit", "Binarize a CSV, fit a rule model and evaluate it on a 20% test split");
    add_data_opts(fit, data);
    add_fit_opts(fit, fit_opts, true);
    add_run_opts(fit, run_opts, true);
    fit->add_option("--out", run_opts.out, "Model JSON path")->required();

    auto* sweep = app.add_subcommand("sweep-gamma", "Fit and evaluate over a list of reliance penalties");
    add_data_opts(sweep, data);
    add_fit_opts(sweep, fit_opts, false);
    add_run_opts(sweep, run_opts, false);
    sweep->add_option("--gammas", sweep_opts.gammas, "Comma-separated gamma values")->delimiter(',');
    sweep->add_option("--gamma-min", sweep_opts.gamma_min, "Log range start")->capture_default_str();
    sweep->add_option("--gamma-max", sweep_opts.gamma_max, "Log range end")->capture_default_str();
    sweep->add_option("--gamma-count", sweep_opts.gamma_count, "Log range size")->capture_default_str();
    sweep->add_option("--out", run_opts.out, "CSV path (stdout when omitted)");

    auto* scorecard = app.add_subcommand("scorecard", "Render a model file as a plain-text scorecard");
    scorecard->add_option("model,--model", model_path, "Model JSON")->required();
    scorecard->add_option("--out", run_opts.out, "Output path (stdout when omitted)");

    auto* synth = app.add_subcommand("synth", "Generate a synthetic dataset as CSV");
    synth->add_option("--preset", synth_opts.preset, "Named configuration")->check(CLI::IsMember({"sec4", "appendix"}));
    synth->add_option("--generator", synth_opts.generator, "Generator")
        ->check(CLI::IsMember({"toy", "pairs"}))
        ->capture_default_str();
    synth->add_option("--n", synth_opts.n, "Rows")->check(CLI::PositiveNumber)->capture_default_str();
    synth->add_option("--c", synth_opts.c, "Base features (pairs)")->check(CLI::PositiveNumber)->capture_default_str();
    synth->add_option("--delta", synth_opts.delta, "Replacement disagreement (pairs)")->capture_default_str();
    synth->add_option("--sigma", synth_opts.sigma, "Noise sd (pairs)")->capture_default_str();
    synth->add_option("--base-p", synth_opts.base_p, "Base Bernoulli rate (pairs)")->capture_default_str();
    synth->add_option("--q", synth_opts.q, "Missingness rate")->capture_default_str();
    synth->add_option("--mechanism", synth_opts.mechanism, "none, pair, mcar, mar or mnar")
        ->check(CLI::IsMember({"none", "pair", "mcar", "mar", "mnar"}));
    synth->add_option("--pivots", synth_opts.pivots, "MAR pivot columns")->capture_default_str();
    add_run_opts(synth, run_opts, false);
    synth->add_option("--out", run_opts.out, "CSV path (stdout when omitted)");

    auto* mask = app.add_subcommand("mask", "Ampute the 0/1 feature columns of a complete CSV");
    mask->add_option("data,--data", mask_opts.data, "Complete CSV")->required();
    mask->add_option("--outcome", mask_opts.outcome, "Outcome column (left untouched)")->capture_default_str();
    mask->add_option("--mechanism", mask_opts.mechanism, "pair, mcar, mar or mnar")
        ->check(CLI::IsMember({"pair", "mcar", "mar", "mnar"}))
        ->capture_default_str();
    mask->add_option("--q", mask_opts.q, "Missingness rate")->capture_default_str();
    mask->add_option("--pivots", mask_opts.pivots, "MAR pivot columns")->capture_default_str();
    add_run_opts(mask, run_opts, false);
    mask->add_option("--out", run_opts.out, "CSV path (stdout when omitted)");

    auto* prop1 = app.add_subcommand("prop1", "Monte-Carlo check of the paired-replacement risk bounds");
    prop1->add_option("--c", prop1_opts.c, "Pairs")->check(CLI::PositiveNumber)->capture_default_str();
    prop1->add_option("--sigma", prop1_opts.sigma, "Noise sd")->capture_default_str();
    prop1->add_option("--base-p", prop1_opts.base_p, "Base Bernoulli rate")->capture_default_str();
    prop1->add_option("--mc-samples", prop1_opts.mc_samples, "Monte-Carlo draws per configuration")
        ->capture_default_str();
    prop1->add_option("--deltas", prop1_opts.deltas, "Comma-separated delta grid")->delimiter(',');
    prop1->add_option("--qs", prop1_opts.qs, "Comma-separated q grid")->delimiter(',');
    prop1->add_option("--beta", prop1_opts.beta, "Comma-separated coefficients (default all ones)")->delimiter(',');
    add_run_opts(prop1, run_opts, false);
    prop1->add_option("--out", run_opts.out, "Report JSON path");

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    Manifest manifest;
    manifest.args = args;
    try {
        if (*fit) {
            manifest.command = "fit";
            return cmd_fit(data, fit_opts, run_opts, manifest, out, err);
        }
        if (*sweep) {
            manifest.command = "sweep-gamma";
            return cmd_sweep_gamma(data, fit_opts, sweep_opts, run_opts, manifest, out, err);
        }
        if (*scorecard) {
            manifest.command = "scorecard";
            return cmd_scorecard(model_path, run_opts.out, manifest, out);
        }
        if (*synth) {
            manifest.command = "synth";
            return cmd_synth(synth_opts, *synth, run_opts, manifest, out);
        }
        if (*mask) {
            manifest.command = "mask";
            return cmd_mask(mask_opts, run_opts, manifest, out);
        }
        if (*prop1) {
            manifest.command = "prop1";
            return cmd_prop1(prop1_opts, run_opts, manifest, out);
        }
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}

} // namespace minty::cli
