#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "chipcost/explorer.hpp"
#include "chipcost/system.hpp"

namespace chipcost {

enum class OutputFormat { json, csv, table };

OutputFormat parse_output_format(std::string_view text);

/// Embedded in every output so a file alone identifies its inputs.
struct Provenance {
  std::string command;
  std::string dataset_version;
  std::string dataset_path;
  nlohmann::json config;  // fully resolved configuration
};

/// Plain rows of already-formatted cells.
struct TextTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

std::string format_number(double value);

/// CSV body preceded by "# key=value" provenance lines.
std::string render_csv(const TextTable& table, const Provenance& prov,
                       const std::vector<std::string>& notes = {});
/// Column-aligned text for terminals.
std::string render_text(const TextTable& table, const Provenance& prov,
                        const std::vector<std::string>& notes = {});
std::string render_json(const nlohmann::json& result, const Provenance& prov);

nlohmann::json report_to_json(const CostReport& report);
TextTable report_table(const CostReport& report);

nlohmann::json sweep_to_json(const std::vector<SweepRow>& rows, const SweepSpec& spec);
TextTable sweep_table(const std::vector<SweepRow>& rows, const SweepSpec& spec);
/// Metric columns a sweep can emit, in output order.
const std::vector<std::string>& sweep_metric_columns();

nlohmann::json switchpoints_to_json(const std::vector<SwitchingRow>& rows);
TextTable switchpoints_table(const std::vector<SwitchingRow>& rows);

nlohmann::json hbm_study_to_json(const HbmStudyResult& result);
TextTable hbm_study_table(const HbmStudyResult& result);
std::vector<std::string> hbm_study_notes(const HbmStudyResult& result);

nlohmann::json hybrid_study_to_json(const std::vector<HybridStudyRow>& rows);
TextTable hybrid_study_table(const std::vector<HybridStudyRow>& rows);

std::string render(OutputFormat format, const nlohmann::json& result, const TextTable& table,
                   const Provenance& prov, const std::vector<std::string>& notes = {});

// Long-format plot data, one observation per row.
TextTable plot_package_regression(const TechDatabase& db, const Evaluator& evaluator);
TextTable plot_hbm_overhead(const HbmStudyResult& result);
TextTable plot_hybrid_costs(const std::vector<HybridStudyRow>& rows);
TextTable plot_switchpoints(const std::vector<SwitchingRow>& rows);
TextTable plot_sweep(const std::vector<SweepRow>& rows);

}  // namespace chipcost
