#include "minty/model_io.hpp"

#include <fstream>
#include <sstream>

namespace minty {

using nlohmann::json;

json to_json(const FitConfig& cfg) {
    return json{{"lambda0", cfg.lambda0},
                {"lambda1", cfg.lambda1},
                {"gamma", cfg.gamma},
                {"k_max", cfg.k_max},
                {"beam_width", cfg.beam_width == 0 ? json("auto") : json(cfg.beam_width)},
                {"beam_depth", cfg.beam_depth},
                {"solver", to_string(cfg.solver)},
                {"cd_tol", cfg.cd_tol},
                {"cd_max_iter", cfg.cd_max_iter},
                {"seed", cfg.seed}};
}

FitConfig fit_config_from_json(const json& j) {
    FitConfig cfg;
    cfg.lambda0 = j.value("lambda0", cfg.lambda0);
    cfg.lambda1 = j.value("lambda1", cfg.lambda1);
    cfg.gamma = j.value("gamma", cfg.gamma);
    cfg.k_max = j.value("k_max", cfg.k_max);
    if (auto it = j.find("beam_width"); it != j.end() && it->is_number_unsigned())
        cfg.beam_width = it->get<std::size_t>();
    cfg.beam_depth = j.value("beam_depth", cfg.beam_depth);
    cfg.solver = j.value("solver", std::string("beam")) == "exact" ? Solver::exact : Solver::beam;
    cfg.cd_tol = j.value("cd_tol", cfg.cd_tol);
    cfg.cd_max_iter = j.value("cd_max_iter", cfg.cd_max_iter);
    cfg.seed = j.value("seed", cfg.seed);
    return cfg;
}

json to_json(const BinarizationSchema& schema) {
    json cols = json::array();
    for (const auto& c : schema.columns) {
        cols.push_back({{"name", c.name},
                        {"kind", to_string(c.kind)},
                        {"thresholds", c.thresholds},
                        {"categories", c.categories}});
    }
    json lits = json::array();
    for (const auto& l : schema.literals) {
        json e{{"column", l.column}, {"op", to_string(l.op)}, {"name", l.name}};
        if (l.op == Predicate::eq)
            e["category"] = l.category;
        else
            e["threshold"] = l.threshold;
        lits.push_back(std::move(e));
    }
    return json{{"columns", std::move(cols)}, {"literals", std::move(lits)}};
}

BinarizationSchema schema_from_json(const json& j) {
    BinarizationSchema s;
    for (const auto& c : j.at("columns")) {
        ColumnSpec spec;
        spec.name = c.at("name").get<std::string>();
        spec.kind = column_kind_from_string(c.at("kind").get<std::string>());
        spec.thresholds = c.value("thresholds", std::vector<double>{});
        spec.categories = c.value("categories", std::vector<std::string>{});
        s.columns.push_back(std::move(spec));
    }
    for (const auto& l : j.at("literals")) {
        LiteralSpec lit;
        lit.column = l.at("column").get<std::size_t>();
        lit.op = predicate_from_string(l.at("op").get<std::string>());
        lit.threshold = l.value("threshold", 0.0);
        lit.category = l.value("category", std::string{});
        lit.name = l.at("name").get<std::string>();
        if (lit.column >= s.columns.size()) throw DimensionError("schema literal refers to unknown column");
        s.literals.push_back(std::move(lit));
    }
    return s;
}

json to_json(const RuleModel& model) {
    json rules = json::array();
    for (const auto& r : model.rules) rules.push_back(r.literals());
    const auto& m = model.fit_meta;
    json meta{{"config", to_json(m.config)},
              {"converged", m.converged},
              {"termination", m.termination},
              {"iterations", m.iterations},
              {"objective", m.objective}};
    return json{{"version", model_format_version},
                {"literal_names", model.literal_names},
                {"rules", std::move(rules)},
                {"beta", model.beta},
                {"intercept_index", 0},
                {"schema", model.schema ? to_json(*model.schema) : json(nullptr)},
                {"fit_meta", std::move(meta)}};
}

RuleModel model_from_json(const json& j) {
    const int version = j.at("version").get<int>();
    if (version > model_format_version)
        throw DomainError("model file version " + std::to_string(version) + " is newer than supported");
    if (j.value("intercept_index", 0) != 0) throw DomainError("intercept_index must be 0");

    RuleModel model;
    model.literal_names = j.value("literal_names", std::vector<std::string>{});
    for (const auto& r : j.at("rules")) model.rules.emplace_back(r.get<std::vector<std::uint32_t>>());
    model.beta = j.at("beta").get<std::vector<double>>();
    if (auto it = j.find("schema"); it != j.end() && !it->is_null()) model.schema = schema_from_json(*it);
    if (auto it = j.find("fit_meta"); it != j.end() && it->is_object()) {
        auto& m = model.fit_meta;
        if (auto c = it->find("config"); c != it->end()) m.config = fit_config_from_json(*c);
        m.converged = it->value("converged", true);
        m.termination = it->value("termination", std::string{});
        m.iterations = it->value("iterations", std::size_t{0});
        m.objective = it->value("objective", 0.0);
    }
    model.validate();
    return model;
}

std::string dump_model(const RuleModel& model) { return to_json(model).dump(2) + "\n"; }

void save_model(const RuleModel& model, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write " + path.string());
    out << dump_model(model);
}

RuleModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot read " + path.string());
    json j;
    try {
        j = json::parse(in);
    } catch (const json::exception& e) {
        throw DomainError("malformed model file " + path.string() + ": " + e.what());
    }
    try {
        return model_from_json(j);
    } catch (const json::exception& e) {
        throw DomainError("invalid model file " + path.string() + ": " + e.what());
    }
}

} // namespace minty
