#include "chipcost/yield.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "chipcost/error.hpp"

namespace chipcost {

YieldParams yield_params(const TechNode& node) {
  return {node.wafer_base_yield, node.defect_density, node.clustering_alpha};
}

YieldParams yield_params(const PanelSpec& panel) {
  return {panel.panel_base_yield, panel.defect_density, panel.clustering_alpha};
}

double negbin_yield(double area_mm2, const YieldParams& p) {
  if (!(area_mm2 >= 0.0))
    throw Error(ErrorKind::domain, fmt::format("yield area must be >= 0 (got {})", area_mm2));
  if (!(p.base_yield > 0.0 && p.base_yield <= 1.0) || !(p.defect_density >= 0.0) ||
      !(p.clustering_alpha > 0.0))
    throw Error(ErrorKind::domain,
                fmt::format("invalid yield parameters (base {}, D0 {}, alpha {})",
                            p.base_yield, p.defect_density, p.clustering_alpha));
  const double defects = mm2_to_cm2(area_mm2) * p.defect_density;
  if (defects == 0.0) return p.base_yield;
  // log1p keeps the large-alpha (Poisson) limit accurate.
  return p.base_yield * std::exp(-p.clustering_alpha * std::log1p(defects / p.clustering_alpha));
}

long dies_per_round_wafer(double die_area_mm2, double wafer_diameter_mm) {
  if (!(die_area_mm2 > 0.0) || !(wafer_diameter_mm > 0.0))
    throw Error(ErrorKind::domain,
                fmt::format("dies_per_round_wafer needs positive inputs (area {}, diameter {})",
                            die_area_mm2, wafer_diameter_mm));
  const double radius = wafer_diameter_mm / 2.0;
  const double gross = std::numbers::pi * radius * radius / die_area_mm2 -
                       std::numbers::pi * wafer_diameter_mm / std::sqrt(2.0 * die_area_mm2);
  if (gross <= 0.0) return 0;
  return static_cast<long>(std::floor(gross));
}

long units_per_panel(double unit_area_mm2, const PanelSpec& panel) {
  if (!(unit_area_mm2 > 0.0))
    throw Error(ErrorKind::domain,
                fmt::format("panel unit area must be > 0 (got {})", unit_area_mm2));
  return static_cast<long>(std::floor(panel.area() / unit_area_mm2));
}

}  // namespace chipcost
