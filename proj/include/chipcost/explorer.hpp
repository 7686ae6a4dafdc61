#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chipcost/error.hpp"
#include "chipcost/system.hpp"

namespace chipcost {

enum class Execution { serial, parallel };

// ---------------------------------------------------------------------------
// Batch evaluation kernel. The serial loop is the reference; the OpenMP loop
// must produce identical results in identical order.

struct BatchResult {
  std::optional<CostReport> report;
  std::string error;  // empty on success
  ErrorKind error_kind = ErrorKind::model;

  bool ok() const { return report.has_value(); }
};

std::vector<BatchResult> evaluate_batch_serial(std::span<const SystemSpec> systems,
                                               const Evaluator& evaluator);
std::vector<BatchResult> evaluate_batch_parallel(std::span<const SystemSpec> systems,
                                                 const Evaluator& evaluator);
std::vector<BatchResult> evaluate_batch(std::span<const SystemSpec> systems,
                                        const Evaluator& evaluator, Execution execution);

// ---------------------------------------------------------------------------
// Cross-product sweeps.

enum class ScaleUnit { transistors_billion, area_mm2 };

struct NodePair {
  std::string core;
  std::string io;
  bool operator==(const NodePair&) const = default;
};

/// Parameters held constant across a sweep.
struct SweepFixed {
  HbmConfig hbm;
  std::optional<std::string> package_class;
  std::optional<std::string> bump_tech;
  std::optional<double> floorplan_overhead;
  double signal_pins = 1000.0;       // external signals of the whole system
  double d2d_signals_per_die = 0.0;  // interposer-routed signals per logic die
};

struct SweepSpec {
  ScaleUnit unit = ScaleUnit::transistors_billion;
  std::vector<double> scales;
  std::vector<double> io_fractions{0.0};
  std::vector<int> die_counts{1};
  std::vector<NodePair> node_pairs;
  std::vector<Integration> integrations{Integration::mcm};
  SweepFixed fixed;
  std::size_t max_points = 1'000'000;
  std::vector<std::string> columns;  // empty = all
};

/// One point of the cross product. Axis order (slowest first): scale,
/// io_fraction, die_count, node_pair, integration.
struct SweepPoint {
  std::size_t index = 0;
  double scale = 0.0;
  double io_fraction = 0.0;
  int die_count = 1;
  NodePair nodes;
  Integration integration = Integration::mcm;
};

struct SweepRow {
  SweepPoint point;
  BatchResult result;
};

void validate_sweep(const SweepSpec& spec);
std::size_t sweep_size(const SweepSpec& spec);
std::vector<SweepPoint> enumerate_points(const SweepSpec& spec);

/// System for one point: a single die when die_count is 1 and both node roles
/// coincide; otherwise die_count equal logic dies on the core node plus one
/// I/O die on the I/O node holding the io_fraction share of the transistors.
SystemSpec build_point_system(const SweepPoint& point, const SweepSpec& spec,
                              const TechDatabase& db);

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const TechDatabase& db,
                                const ModelOptions& options = {},
                                Execution execution = Execution::parallel);

// ---------------------------------------------------------------------------
// Monolithic vs chiplet switching points.

struct PartitionRule {
  enum class Kind { equal_split, max_die_area };
  Kind kind = Kind::equal_split;
  int count = 2;               // equal_split
  double max_die_area = 150.0; // max_die_area: fewest equal dies each <= this

  int dies_for(double area_mm2) const;
};

struct SwitchSearch {
  double min_area = 20.0;    // mm², integer grid
  double max_area = 1200.0;
  int samples = 64;          // coarse grid used to validate monotonicity and bracket
  double signal_pins = 1000.0;
  std::optional<std::string> package_class;
};

enum class SwitchVerdict { crossover, chiplet_always_cheaper, monolithic_always_cheaper };

std::string_view to_string(SwitchVerdict verdict);

/// Smallest integer monolithic area at which the partitioned system costs no
/// more than the monolithic die. For a crossover, `area - 1` is strictly more
/// expensive as chiplets; the *_below fields hold those costs.
struct SwitchingPoint {
  std::string node;
  Integration integration = Integration::mcm;
  SwitchVerdict verdict = SwitchVerdict::crossover;
  double area = 0.0;
  double transistors_billion = 0.0;
  int die_count = 0;
  double monolithic_cost = 0.0;
  double chiplet_cost = 0.0;
  double monolithic_cost_below = 0.0;
  double chiplet_cost_below = 0.0;
};

SystemSpec monolithic_system(const TechNode& node, double area_mm2, const SwitchSearch& search);
SystemSpec partitioned_system(const TechNode& node, Integration integration, double area_mm2,
                              const PartitionRule& rule, const SwitchSearch& search);

SwitchingPoint find_switching_point(const TechNode& node, Integration integration,
                                    const PartitionRule& rule, const Evaluator& evaluator,
                                    const SwitchSearch& search = {});
SwitchingPoint find_switching_point(const TechNode& node, Integration integration,
                                    const PartitionRule& rule, const TechDatabase& db,
                                    const SwitchSearch& search = {},
                                    const ModelOptions& options = {});

struct SwitchingRow {
  std::string node;
  Integration integration = Integration::mcm;
  std::optional<SwitchingPoint> point;
  std::string error;
};

/// Node-major, integration-minor; each pair searched independently.
std::vector<SwitchingRow> find_switching_points(std::span<const std::string> nodes,
                                                std::span<const Integration> integrations,
                                                const PartitionRule& rule,
                                                const TechDatabase& db,
                                                const SwitchSearch& search = {},
                                                const ModelOptions& options = {},
                                                Execution execution = Execution::parallel);

// ---------------------------------------------------------------------------
// Case study: overhead of integrating HBM stacks on an interposer.

struct HbmStudyConfig {
  std::vector<double> scales{200.0, 400.0, 800.0};  // logic die area, mm²
  std::string node = "7nm";
  int hbm_stacks = 4;
  double stack_cost = 0.0;
  double signal_pins = 1000.0;
  std::optional<std::string> package_class;
};

struct HbmStudyRow {
  double scale = 0.0;
  Integration integration = Integration::mcm;
  FeasibilityVerdict verdict;
  std::optional<CostReport> report;
  std::string error;
};

struct HbmStudyResult {
  std::vector<HbmStudyRow> breakdown;  // scale-major, silicon then organic
  std::vector<HbmStudyRow> excluded;   // MCM rows with their feasibility verdict
};

SystemSpec hbm_study_system(const HbmStudyConfig& config, double scale, Integration integration);

HbmStudyResult case_study_hbm(const HbmStudyConfig& config, const TechDatabase& db,
                              const ModelOptions& options = {},
                              Execution execution = Execution::parallel);

// ---------------------------------------------------------------------------
// Case study: logic dies on an advanced node, I/O die on a mature node.

struct HybridStudyConfig {
  std::vector<double> scales_billion{5.0, 10.0, 50.0};
  std::vector<double> io_fractions{0.3, 0.4, 0.5};
  std::vector<int> core_die_counts{2, 4, 8};
  std::string core_node = "7nm";
  std::string io_node = "12nm";
  Integration integration = Integration::mcm;
  double signal_pins = 1000.0;
  std::optional<std::string> package_class;
};

struct HybridVariant {
  int core_dies = 0;
  std::optional<double> cost;  // unset when the variant failed to evaluate
  std::string error;
};

struct HybridStudyRow {
  double scale = 0.0;
  double io_fraction = 0.0;
  std::optional<double> monolithic_core_node;
  std::optional<double> monolithic_io_node;
  std::vector<HybridVariant> hybrids;
  int best_core_dies = 0;
  double best_cost = 0.0;
  double improvement = 0.0;  // 1 - best / monolithic_core_node
  std::string error;
};

std::vector<HybridStudyRow> case_study_hybrid(const HybridStudyConfig& config,
                                              const TechDatabase& db,
                                              const ModelOptions& options = {},
                                              Execution execution = Execution::parallel);

}  // namespace chipcost
