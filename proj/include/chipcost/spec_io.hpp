#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "chipcost/explorer.hpp"
#include "chipcost/system_spec.hpp"

namespace chipcost {

// Spec files share the dataset's structured-text format (JSON). Each carries
// "schema_version" and a "kind" naming which schema applies; unknown keys are
// rejected so typos surface as validation errors.

inline constexpr int kSpecSchemaVersion = 1;

nlohmann::json read_json_file(const std::filesystem::path& path);

SystemSpec parse_system_spec(const nlohmann::json& doc);
nlohmann::json to_json(const SystemSpec& sys);

SweepSpec parse_sweep_spec(const nlohmann::json& doc);
nlohmann::json to_json(const SweepSpec& spec);

struct SwitchpointSpec {
  std::vector<std::string> nodes{"7nm", "10nm", "12nm", "16nm", "20nm", "28nm"};
  std::vector<Integration> integrations{Integration::organic_2p5d, Integration::mcm};
  PartitionRule rule;
  SwitchSearch search;
};
SwitchpointSpec parse_switchpoint_spec(const nlohmann::json& doc);
nlohmann::json to_json(const SwitchpointSpec& spec);

HbmStudyConfig parse_hbm_study(const nlohmann::json& doc);
nlohmann::json to_json(const HbmStudyConfig& config);

HybridStudyConfig parse_hybrid_study(const nlohmann::json& doc);
nlohmann::json to_json(const HybridStudyConfig& config);

}  // namespace chipcost
