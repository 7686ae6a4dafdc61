#pragma once

#include <string>
#include <vector>

#include "chipcost/system_spec.hpp"
#include "chipcost/techdb.hpp"

namespace chipcost {

struct HullPoint {
  double area = 0.0;
  double pins = 0.0;
  bool operator==(const HullPoint&) const = default;
};

/// Fitted C_P = mu_area * A_sub + mu_pins * N_pin + intercept for one
/// (core, build-up) layer configuration.
struct PackageRegression {
  double mu_area = 0.0;    // currency per mm²
  double mu_pins = 0.0;    // currency per pin
  double intercept = 0.0;  // currency
  double r_squared = 1.0;
  std::string source_class;
  std::vector<HullPoint> hull;  // convex hull of the samples, counter-clockwise

  bool operator==(const PackageRegression&) const = default;
};

struct PackageCost {
  double cost = 0.0;
  bool extrapolated = false;  // (A, N) outside the sample hull
};

/// Ordinary least squares through the class samples via the normal equations
/// on standardised regressors, solved with partial pivoting.
/// Throws validation error for a rank-deficient design.
PackageRegression fit_package_regression(const PackageClass& package_class);

PackageCost package_cost(const PackageRegression& reg, double substrate_area_mm2,
                         double pin_count);

/// Convex hull (monotone chain), counter-clockwise, collinear points dropped.
std::vector<HullPoint> convex_hull(std::vector<HullPoint> points);
bool hull_contains(const std::vector<HullPoint>& hull, HullPoint p);

struct SubstrateRequirements {
  double substrate_area = 0.0;  // mm²
  double pin_count = 0.0;
  double footprint = 0.0;       // interposer area or MCM die spread, mm²
};

/// Footprint (interposer area including HBM stacks, or MCM die spread) times
/// the dataset fan-out factor; pins are the dies' external signals plus the
/// power/ground share.
SubstrateRequirements substrate_requirements(const SystemSpec& sys, const TechDatabase& db);

}  // namespace chipcost
