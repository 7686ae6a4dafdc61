#pragma once

#include <optional>
#include <string>
#include <vector>

#include "chipcost/die.hpp"
#include "chipcost/types.hpp"

namespace chipcost {

/// HBM stacks are bonded units with a footprint and a 1024-bit style signal
/// interface. Their manufacturing cost is not modelled; `stack_cost` is an
/// optional purchase price per stack.
struct HbmConfig {
  int stacks = 0;
  std::optional<double> footprint_mm2;  // dataset default when unset
  std::optional<double> signal_bits;    // dataset default when unset
  double stack_cost = 0.0;

  bool operator==(const HbmConfig&) const = default;
};

struct SystemSpec {
  std::string name = "system";
  std::vector<DieSpec> dies;
  HbmConfig hbm;
  Integration integration = Integration::mcm;
  // Overrides of the dataset defaults.
  std::optional<std::string> bump_tech;
  std::optional<std::string> interposer_node;
  std::optional<std::string> panel;
  std::optional<std::string> package_class;
  std::optional<double> floorplan_overhead;

  bool operator==(const SystemSpec&) const = default;
};

}  // namespace chipcost
