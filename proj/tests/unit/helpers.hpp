#pragma once

#include <cmath>
#include <string>

#include "chipcost/techdb.hpp"

namespace chipcost::test {

inline TechNode make_node(double wafer_cost, double d0, double alpha = 3.0, double density = 50.0) {
  TechNode n;
  n.name = "test-node";
  n.wafer_cost = wafer_cost;
  n.wafer_diameter = 300.0;
  n.defect_density = d0;
  n.clustering_alpha = alpha;
  n.transistor_density = density;
  n.wafer_base_yield = 1.0;
  return n;
}

inline PanelSpec make_panel(double cost, double width, double height) {
  PanelSpec p;
  p.name = "test-panel";
  p.panel_cost = cost;
  p.panel_width = width;
  p.panel_height = height;
  return p;
}

inline const TechDatabase& default_db() {
  static const TechDatabase db = load_dataset(default_dataset_path());
  return db;
}

inline bool rel_close(double a, double b, double rel) {
  return std::abs(a - b) <= rel * std::max(std::abs(a), std::abs(b));
}

}  // namespace chipcost::test
