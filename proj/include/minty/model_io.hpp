#pragma once

#include <filesystem>
#include <string>

#include <json.hpp>

#include "minty/data_model.hpp"

namespace minty {

inline constexpr int model_format_version = 1;

nlohmann::json to_json(const FitConfig& cfg);
FitConfig fit_config_from_json(const nlohmann::json& j);

nlohmann::json to_json(const BinarizationSchema& schema);
BinarizationSchema schema_from_json(const nlohmann::json& j);

/// Model file document: {version, literal_names, rules, beta, intercept_index,
/// schema, fit_meta}. Unknown fields are ignored on read.
nlohmann::json to_json(const RuleModel& model);
RuleModel model_from_json(const nlohmann::json& j);

std::string dump_model(const RuleModel& model);
void save_model(const RuleModel& model, const std::filesystem::path& path);
RuleModel load_model(const std::filesystem::path& path);

} // namespace minty
