#pragma once

#include <span>

#include "chipcost/techdb.hpp"
#include "chipcost/types.hpp"

namespace chipcost {

struct InterposerCostResult {
  InterposerKind kind = InterposerKind::none;
  double area = 0.0;
  double unit_cost = 0.0;     // C_int
  double yield = 1.0;         // Y_int
  double yielded_cost = 0.0;  // C_int / Y_int
  int wiring_layers = 0;      // informational

  bool operator==(const InterposerCostResult&) const = default;
};

/// Panel-built organic interposer: C_panel / floor(A_panel / A) and a
/// negative-binomial yield scaled by the panel base yield.
InterposerCostResult organic_interposer_cost(double area_mm2, const PanelSpec& panel,
                                             int wiring_layers = 0);

/// Passive silicon interposer diced from a round wafer of `node`.
InterposerCostResult silicon_interposer_cost(double area_mm2, const TechNode& node,
                                             int wiring_layers = 0);

/// MCM: no substrate term at all.
InterposerCostResult no_interposer();

/// Sum of placed areas grown by a fixed overhead fraction. Summation order is
/// canonicalised so the result does not depend on list order.
double interposer_area_from_floorplan(std::span<const double> die_areas,
                                      double overhead_fraction);

/// ceil(signals / (routing_density * shoreline)), shoreline being one edge of
/// every placed die. At least 1 layer; 0 when there is no routing model.
int interposer_wiring_layers(double signals, std::span<const double> die_areas,
                             double routing_density);

/// Cost for the cheapest listed layer count that covers `layers`; the largest
/// listed entry when none does; `base` when the table is empty or layers <= 0.
double cost_for_layers(const std::map<int, double>& table, int layers, double base);

}  // namespace chipcost
