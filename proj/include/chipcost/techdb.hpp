#pragma once

#include <filesystem>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "chipcost/types.hpp"

namespace chipcost {

/// Per-node wafer manufacturing parameters. Areas are mm², defect density is
/// per cm², transistor density is million transistors per mm².
struct TechNode {
  std::string name;
  double wafer_cost = 0.0;
  double wafer_diameter = 300.0;
  double defect_density = 0.0;
  double clustering_alpha = 1.0;
  double transistor_density = 1.0;
  double wafer_base_yield = 1.0;
  // I/O transistors are placed at transistor_density * io_density_factor.
  double io_density_factor = 1.0;
  // Interposer routing capacity, signals per mm of die edge per wiring layer.
  // Zero means the node carries no routing model.
  double routing_density = 0.0;
  // Optional wafer cost keyed by wiring-layer count (interposer nodes).
  std::map<int, double> layer_wafer_costs;
  std::string provenance;

  bool operator==(const TechNode&) const = default;
};

/// Rectangular panel used to build organic interposers.
struct PanelSpec {
  std::string name;
  double panel_cost = 0.0;
  double panel_width = 0.0;
  double panel_height = 0.0;
  double panel_base_yield = 1.0;
  double defect_density = 0.0;
  double clustering_alpha = 1.0;
  double routing_density = 0.0;
  std::map<int, double> layer_panel_costs;
  std::string provenance;

  double area() const { return panel_width * panel_height; }
  bool operator==(const PanelSpec&) const = default;
};

struct BumpTech {
  std::string name;
  double pitch = 0.0;  // µm
  double bond_cost_per_die = 0.0;
  double bond_yield = 1.0;
  std::string provenance;

  bool operator==(const BumpTech&) const = default;
};

struct PackageSample {
  double substrate_area = 0.0;  // mm²
  double pin_count = 0.0;
  double cost = 0.0;

  bool operator==(const PackageSample&) const = default;
};

/// Flip-chip organic substrate with a fixed (core, build-up) layer stack and
/// the tabulated cost samples its regression is fitted from.
struct PackageClass {
  std::string name;
  int core_layers = 0;
  int buildup_layers = 0;
  std::vector<PackageSample> samples;
  std::string provenance;

  bool operator==(const PackageClass&) const = default;
};

/// Dataset-wide parameters used when a system spec leaves them unset.
struct ModelDefaults {
  std::string silicon_interposer_node = "65nm-passive";
  std::string organic_panel;
  std::string bump_silicon;
  std::string bump_organic;
  std::string bump_mcm;
  std::string package_class;
  double floorplan_overhead = 0.10;
  double package_fanout = 1.0;
  double pg_ratio = 1.0;
  double hbm_footprint = 5.48 * 7.29;  // mm², HBM1
  double hbm_signal_bits = 1024.0;

  bool operator==(const ModelDefaults&) const = default;

  const std::string& bump_for(Integration integration) const;
};

/// Immutable, validated technology dataset. Every model parameter reaches the
/// rest of the library through one of these.
class TechDatabase {
 public:
  static constexpr int kSchemaVersion = 1;

  /// Parses and validates; `origin` only labels error messages.
  static TechDatabase from_json(const nlohmann::json& doc,
                                std::string_view origin = "<dataset>");
  nlohmann::json to_json() const;

  const std::string& version() const { return version_; }
  const std::string& description() const { return description_; }
  const ModelDefaults& defaults() const { return defaults_; }

  const TechNode& node(std::string_view name) const;
  const PanelSpec& panel(std::string_view name) const;
  const BumpTech& bump(std::string_view name) const;
  const PackageClass& package_class(std::string_view name) const;

  std::span<const TechNode> nodes() const { return nodes_; }
  std::span<const PanelSpec> panels() const { return panels_; }
  std::span<const BumpTech> bumps() const { return bumps_; }
  std::span<const PackageClass> package_classes() const { return classes_; }

  std::vector<std::string> node_names() const;

  /// Non-fatal findings, e.g. transistor density not decreasing with node age.
  std::span<const std::string> warnings() const { return warnings_; }

 private:
  std::string version_;
  std::string description_;
  std::vector<TechNode> nodes_;
  std::vector<PanelSpec> panels_;
  std::vector<BumpTech> bumps_;
  std::vector<PackageClass> classes_;
  ModelDefaults defaults_;
  std::vector<std::string> warnings_;
};

TechDatabase load_dataset(const std::filesystem::path& path);

/// $CHIPCOST_DATASET if set, otherwise the dataset bundled with the sources.
std::filesystem::path default_dataset_path();

const TechNode& lookup_node(const TechDatabase& db, std::string_view name);

/// Feature size parsed from a node name ("7nm" -> 7, "65nm-passive" -> 65);
/// negative when the name carries none.
double feature_size_nm(std::string_view node_name);

}  // namespace chipcost
