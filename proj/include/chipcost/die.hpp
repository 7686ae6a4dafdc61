#pragma once

#include <optional>
#include <string>

#include "chipcost/techdb.hpp"

namespace chipcost {

/// One functional die. Size is given as a transistor budget, an explicit area,
/// or both (then they must agree within 1%).
struct DieSpec {
  std::string name;
  std::string node;
  std::optional<double> transistors_billion;
  std::optional<double> area_mm2;
  double io_fraction = 0.0;   // share of the transistor budget that is I/O, [0, 1)
  double signal_pins = 0.0;   // external signals routed to the package
  double d2d_signals = 0.0;   // die-to-die signals routed on the interposer

  bool operator==(const DieSpec&) const = default;
};

struct DieCostResult {
  double area = 0.0;
  double unit_cost = 0.0;     // C_die
  double yield = 1.0;         // Y_die
  double yielded_cost = 0.0;  // C_die / Y_die
  long dies_per_wafer = 0;

  bool operator==(const DieCostResult&) const = default;
};

double die_area(const DieSpec& spec, const TechNode& node);

DieCostResult die_cost(const DieSpec& spec, const TechNode& node);

/// Wafer-dicing cost and negative-binomial yield of a die of known area.
DieCostResult die_cost_for_area(double area_mm2, const TechNode& node);

}  // namespace chipcost
