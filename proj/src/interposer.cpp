#include "chipcost/interposer.hpp"

#include <algorithm>
#include <iterator>
#include <cmath>
#include <vector>

#include <fmt/format.h>

#include "chipcost/error.hpp"
#include "chipcost/yield.hpp"

namespace chipcost {

double cost_for_layers(const std::map<int, double>& table, int layers, double base) {
  if (table.empty() || layers <= 0) return base;
  auto it = table.lower_bound(layers);
  if (it == table.end()) return std::prev(table.end())->second;
  return it->second;
}

InterposerCostResult organic_interposer_cost(double area_mm2, const PanelSpec& panel,
                                             int wiring_layers) {
  if (!(area_mm2 > 0.0))
    throw Error(ErrorKind::domain,
                fmt::format("organic interposer area must be > 0 (got {})", area_mm2));
  if (area_mm2 > panel.area())
    throw Error(ErrorKind::model,
                fmt::format("organic interposer of {} mm² exceeds panel '{}' ({} mm²)",
                            area_mm2, panel.name, panel.area()));
  InterposerCostResult r;
  r.kind = InterposerKind::organic;
  r.area = area_mm2;
  r.wiring_layers = wiring_layers;
  const double panel_cost = cost_for_layers(panel.layer_panel_costs, wiring_layers, panel.panel_cost);
  r.unit_cost = panel_cost / static_cast<double>(units_per_panel(area_mm2, panel));
  r.yield = negbin_yield(area_mm2, yield_params(panel));
  r.yielded_cost = r.unit_cost / r.yield;
  return r;
}

InterposerCostResult silicon_interposer_cost(double area_mm2, const TechNode& node,
                                             int wiring_layers) {
  if (!(area_mm2 > 0.0))
    throw Error(ErrorKind::domain,
                fmt::format("silicon interposer area must be > 0 (got {})", area_mm2));
  const long per_wafer = dies_per_round_wafer(area_mm2, node.wafer_diameter);
  if (per_wafer < 1)
    throw Error(ErrorKind::model,
                fmt::format("silicon interposer of {} mm² does not fit on a {} mm wafer",
                            area_mm2, node.wafer_diameter));
  InterposerCostResult r;
  r.kind = InterposerKind::silicon;
  r.area = area_mm2;
  r.wiring_layers = wiring_layers;
  const double wafer_cost = cost_for_layers(node.layer_wafer_costs, wiring_layers, node.wafer_cost);
  r.unit_cost = wafer_cost / static_cast<double>(per_wafer);
  r.yield = negbin_yield(area_mm2, yield_params(node));
  r.yielded_cost = r.unit_cost / r.yield;
  return r;
}

InterposerCostResult no_interposer() { return InterposerCostResult{}; }

double interposer_area_from_floorplan(std::span<const double> die_areas,
                                      double overhead_fraction) {
  if (die_areas.empty())
    throw Error(ErrorKind::domain, "floorplan needs at least one die");
  if (!(overhead_fraction >= 0.0))
    throw Error(ErrorKind::domain,
                fmt::format("floorplan overhead must be >= 0 (got {})", overhead_fraction));
  std::vector<double> sorted(die_areas.begin(), die_areas.end());
  std::sort(sorted.begin(), sorted.end());
  double total = 0.0;
  for (double a : sorted) {
    if (!(a > 0.0))
      throw Error(ErrorKind::domain, fmt::format("floorplan die area must be > 0 (got {})", a));
    total += a;
  }
  return total * (1.0 + overhead_fraction);
}

int interposer_wiring_layers(double signals, std::span<const double> die_areas,
                             double routing_density) {
  if (routing_density <= 0.0 || die_areas.empty()) return 0;
  if (signals <= 0.0) return 1;
  double shoreline = 0.0;
  for (double a : die_areas) shoreline += std::sqrt(a);
  return std::max(1, static_cast<int>(std::ceil(signals / (routing_density * shoreline))));
}

}  // namespace chipcost
