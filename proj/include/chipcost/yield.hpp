#pragma once

#include "chipcost/techdb.hpp"

namespace chipcost {

struct YieldParams {
  double base_yield = 1.0;      // (0, 1]
  double defect_density = 0.0;  // defects per cm²
  double clustering_alpha = 1.0;
};

YieldParams yield_params(const TechNode& node);
YieldParams yield_params(const PanelSpec& panel);

/// Negative-binomial yield base * (1 + A*D0/alpha)^(-alpha), A converted to cm².
double negbin_yield(double area_mm2, const YieldParams& params);

/// Gross dies on a round wafer: floor(pi*r^2/A - pi*d/sqrt(2A)), clamped at 0.
long dies_per_round_wafer(double die_area_mm2, double wafer_diameter_mm);

/// Units cut from a rectangular panel as a pure area ratio, floor(A_panel/A_unit).
long units_per_panel(double unit_area_mm2, const PanelSpec& panel);

}  // namespace chipcost
