#include "chipcost/die.hpp"

#include <cmath>

#include <fmt/format.h>

#include "chipcost/error.hpp"
#include "chipcost/yield.hpp"

namespace chipcost {

double die_area(const DieSpec& spec, const TechNode& node) {
  if (!(spec.io_fraction >= 0.0 && spec.io_fraction < 1.0))
    throw Error(ErrorKind::validation,
                fmt::format("die '{}': io_fraction must be in [0, 1) (got {})", spec.name,
                            spec.io_fraction));
  if (!spec.transistors_billion && !spec.area_mm2)
    throw Error(ErrorKind::validation,
                fmt::format("die '{}': needs transistors_billion or area_mm2", spec.name));

  std::optional<double> from_tx;
  if (spec.transistors_billion) {
    const double tx = *spec.transistors_billion;
    if (!(tx > 0.0))
      throw Error(ErrorKind::validation,
                  fmt::format("die '{}': transistors_billion must be > 0", spec.name));
    const double million = tx * 1000.0;
    const double logic = (1.0 - spec.io_fraction) * million / node.transistor_density;
    const double io =
        spec.io_fraction * million / (node.transistor_density * node.io_density_factor);
    from_tx = logic + io;
  }
  if (spec.area_mm2) {
    const double area = *spec.area_mm2;
    if (!(area > 0.0))
      throw Error(ErrorKind::validation,
                  fmt::format("die '{}': area_mm2 must be > 0", spec.name));
    if (from_tx && std::abs(*from_tx - area) > 0.01 * area)
      throw Error(ErrorKind::validation,
                  fmt::format("die '{}': area_mm2 {} disagrees with transistor-derived "
                              "area {} at node '{}'",
                              spec.name, area, *from_tx, node.name));
    return area;
  }
  return *from_tx;
}

DieCostResult die_cost_for_area(double area_mm2, const TechNode& node) {
  DieCostResult r;
  r.area = area_mm2;
  r.dies_per_wafer = dies_per_round_wafer(area_mm2, node.wafer_diameter);
  if (r.dies_per_wafer < 1)
    throw Error(ErrorKind::model,
                fmt::format("die of {} mm² does not fit on a {} mm wafer at node '{}'",
                            area_mm2, node.wafer_diameter, node.name));
  r.unit_cost = node.wafer_cost / static_cast<double>(r.dies_per_wafer);
  r.yield = negbin_yield(area_mm2, yield_params(node));
  r.yielded_cost = r.unit_cost / r.yield;
  return r;
}

DieCostResult die_cost(const DieSpec& spec, const TechNode& node) {
  return die_cost_for_area(die_area(spec, node), node);
}

}  // namespace chipcost
