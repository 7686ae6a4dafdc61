#include <fmt/format.h>

#include "chipcost/explorer.hpp"

namespace chipcost {

SystemSpec hbm_study_system(const HbmStudyConfig& config, double scale, Integration integration) {
  SystemSpec sys;
  sys.name = fmt::format("hbm-{}-{}mm2", to_string(integration), scale);
  sys.integration = integration;
  sys.package_class = config.package_class;
  DieSpec core;
  core.name = "core";
  core.node = config.node;
  core.area_mm2 = scale;
  core.signal_pins = config.signal_pins;
  sys.dies.push_back(std::move(core));
  sys.hbm.stacks = config.hbm_stacks;
  sys.hbm.stack_cost = config.stack_cost;
  return sys;
}

HbmStudyResult case_study_hbm(const HbmStudyConfig& config, const TechDatabase& db,
                              const ModelOptions& options, Execution execution) {
  if (config.scales.empty()) throw Error(ErrorKind::validation, "hbm study: no scales given");
  db.node(config.node);
  const Evaluator evaluator(db, options);

  HbmStudyResult out;
  std::vector<SystemSpec> systems;
  for (double scale : config.scales) {
    for (Integration integ : {Integration::silicon_2p5d, Integration::organic_2p5d}) {
      HbmStudyRow row;
      row.scale = scale;
      row.integration = integ;
      systems.push_back(hbm_study_system(config, scale, integ));
      row.verdict = check_integration_feasibility(systems.back(), db);
      out.breakdown.push_back(std::move(row));
    }
    HbmStudyRow mcm;
    mcm.scale = scale;
    mcm.integration = Integration::mcm;
    mcm.verdict = check_integration_feasibility(hbm_study_system(config, scale, Integration::mcm), db);
    out.excluded.push_back(std::move(mcm));
  }

  auto results = evaluate_batch(systems, evaluator, execution);
  for (std::size_t i = 0; i < results.size(); ++i) {
    out.breakdown[i].report = std::move(results[i].report);
    out.breakdown[i].error = std::move(results[i].error);
  }
  return out;
}

std::vector<HybridStudyRow> case_study_hybrid(const HybridStudyConfig& config,
                                              const TechDatabase& db,
                                              const ModelOptions& options, Execution execution) {
  if (config.scales_billion.empty() || config.io_fractions.empty() ||
      config.core_die_counts.empty())
    throw Error(ErrorKind::validation, "hybrid study: every axis needs at least one value");
  for (int k : config.core_die_counts)
    if (k < 1) throw Error(ErrorKind::validation, "hybrid study: core die counts must be >= 1");
  db.node(config.core_node);
  db.node(config.io_node);

  // Each (scale, io_fraction) contributes: core-node monolithic, I/O-node
  // monolithic, then one hybrid per core die count.
  SweepSpec shape;
  shape.unit = ScaleUnit::transistors_billion;
  shape.fixed.signal_pins = config.signal_pins;
  shape.fixed.package_class = config.package_class;
  const std::size_t per_point = 2 + config.core_die_counts.size();

  std::vector<SystemSpec> systems;
  for (double scale : config.scales_billion) {
    for (double f : config.io_fractions) {
      auto add = [&](int k, const std::string& core, const std::string& io) {
        SweepPoint p{systems.size(), scale, f, k, {core, io}, config.integration};
        auto sys = build_point_system(p, shape, db);
        sys.name = k == 1 && core == io
                       ? fmt::format("monolithic-{}-{}B-io{}", core, scale, f)
                       : fmt::format("hybrid-{}x{}+{}-{}B-io{}", k, core, io, scale, f);
        systems.push_back(std::move(sys));
      };
      add(1, config.core_node, config.core_node);
      add(1, config.io_node, config.io_node);
      for (int k : config.core_die_counts) add(k, config.core_node, config.io_node);
    }
  }

  const Evaluator evaluator(db, options);
  const auto results = evaluate_batch(systems, evaluator, execution);

  std::vector<HybridStudyRow> rows;
  std::size_t base = 0;
  for (double scale : config.scales_billion) {
    for (double f : config.io_fractions) {
      HybridStudyRow row;
      row.scale = scale;
      row.io_fraction = f;
      const auto& mono_core = results[base];
      const auto& mono_io = results[base + 1];
      if (mono_core.ok()) row.monolithic_core_node = mono_core.report->grand_total;
      if (mono_io.ok()) row.monolithic_io_node = mono_io.report->grand_total;
      for (std::size_t v = 0; v < config.core_die_counts.size(); ++v) {
        const auto& r = results[base + 2 + v];
        HybridVariant hv;
        hv.core_dies = config.core_die_counts[v];
        if (r.ok()) {
          hv.cost = r.report->grand_total;
          if (row.best_core_dies == 0 || *hv.cost < row.best_cost) {
            row.best_core_dies = hv.core_dies;
            row.best_cost = *hv.cost;
          }
        } else {
          hv.error = r.error;
        }
        row.hybrids.push_back(std::move(hv));
      }
      if (!row.monolithic_core_node)
        row.error = "core-node monolithic: " + mono_core.error;
      else if (row.best_core_dies == 0)
        row.error = "no hybrid variant evaluated";
      else
        row.improvement = 1.0 - row.best_cost / *row.monolithic_core_node;
      rows.push_back(std::move(row));
      base += per_point;
    }
  }
  return rows;
}

}  // namespace chipcost
