#include "chipcost/package.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include <fmt/format.h>

#include "chipcost/error.hpp"
#include "chipcost/interposer.hpp"

namespace chipcost {

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;
using Vec3 = std::array<double, 3>;

// Gaussian elimination with partial pivoting. Returns false when a pivot falls
// below `rank_tol` times the largest diagonal entry of the input.
bool solve3(Mat3 m, Vec3 b, Vec3& x, double rank_tol) {
  double scale = 0.0;
  for (int i = 0; i < 3; ++i) scale = std::max(scale, std::abs(m[i][i]));
  if (scale == 0.0) return false;
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int row = col + 1; row < 3; ++row)
      if (std::abs(m[row][col]) > std::abs(m[pivot][col])) pivot = row;
    if (std::abs(m[pivot][col]) <= rank_tol * scale) return false;
    std::swap(m[pivot], m[col]);
    std::swap(b[pivot], b[col]);
    for (int row = col + 1; row < 3; ++row) {
      const double f = m[row][col] / m[col][col];
      for (int k = col; k < 3; ++k) m[row][k] -= f * m[col][k];
      b[row] -= f * b[col];
    }
  }
  for (int row = 2; row >= 0; --row) {
    double acc = b[row];
    for (int k = row + 1; k < 3; ++k) acc -= m[row][k] * x[k];
    x[row] = acc / m[row][row];
  }
  return true;
}

double cross(HullPoint o, HullPoint a, HullPoint b) {
  return (a.area - o.area) * (b.pins - o.pins) - (a.pins - o.pins) * (b.area - o.area);
}

}  // namespace

PackageRegression fit_package_regression(const PackageClass& pc) {
  const auto& s = pc.samples;
  if (s.size() < 3)
    throw Error(ErrorKind::validation,
                fmt::format("package class '{}': regression needs >= 3 samples (got {})",
                            pc.name, s.size()));
  const double n = static_cast<double>(s.size());
  double ma = 0.0, mp = 0.0, my = 0.0;
  for (const auto& p : s) {
    ma += p.substrate_area;
    mp += p.pin_count;
    my += p.cost;
  }
  ma /= n;
  mp /= n;
  my /= n;
  double sa = 0.0, sp = 0.0;
  for (const auto& p : s) {
    sa = std::max(sa, std::abs(p.substrate_area - ma));
    sp = std::max(sp, std::abs(p.pin_count - mp));
  }
  if (sa == 0.0 || sp == 0.0)
    throw Error(ErrorKind::validation,
                fmt::format("package class '{}': samples do not vary in {}; regression is "
                            "rank-deficient",
                            pc.name, sa == 0.0 ? "substrate area" : "pin count"));

  // Design columns: 1, (A - mean)/scale, (N - mean)/scale.
  Mat3 normal{};
  Vec3 rhs{};
  for (const auto& p : s) {
    const Vec3 row{1.0, (p.substrate_area - ma) / sa, (p.pin_count - mp) / sp};
    for (int i = 0; i < 3; ++i) {
      rhs[i] += row[i] * p.cost;
      for (int j = 0; j < 3; ++j) normal[i][j] += row[i] * row[j];
    }
  }
  Vec3 beta{};
  if (!solve3(normal, rhs, beta, 1e-10))
    throw Error(ErrorKind::validation,
                fmt::format("package class '{}': samples are collinear in (area, pins); "
                            "regression is rank-deficient",
                            pc.name));

  PackageRegression reg;
  reg.source_class = pc.name;
  reg.mu_area = beta[1] / sa;
  reg.mu_pins = beta[2] / sp;
  reg.intercept = beta[0] - reg.mu_area * ma - reg.mu_pins * mp;

  double ss_res = 0.0, ss_tot = 0.0;
  for (const auto& p : s) {
    const double r = p.cost - (reg.mu_area * p.substrate_area + reg.mu_pins * p.pin_count +
                               reg.intercept);
    ss_res += r * r;
    ss_tot += (p.cost - my) * (p.cost - my);
  }
  reg.r_squared = ss_tot > 0.0 ? std::clamp(1.0 - ss_res / ss_tot, 0.0, 1.0) : 1.0;

  std::vector<HullPoint> pts;
  pts.reserve(s.size());
  for (const auto& p : s) pts.push_back({p.substrate_area, p.pin_count});
  reg.hull = convex_hull(std::move(pts));
  return reg;
}

PackageCost package_cost(const PackageRegression& reg, double substrate_area_mm2,
                         double pin_count) {
  if (!(substrate_area_mm2 > 0.0) || !(pin_count > 0.0))
    throw Error(ErrorKind::domain,
                fmt::format("package cost needs positive substrate area and pin count (got "
                            "{} mm², {} pins)",
                            substrate_area_mm2, pin_count));
  PackageCost out;
  out.cost = reg.mu_area * substrate_area_mm2 + reg.mu_pins * pin_count + reg.intercept;
  out.extrapolated = !hull_contains(reg.hull, {substrate_area_mm2, pin_count});
  return out;
}

std::vector<HullPoint> convex_hull(std::vector<HullPoint> pts) {
  std::sort(pts.begin(), pts.end(), [](HullPoint a, HullPoint b) {
    return a.area < b.area || (a.area == b.area && a.pins < b.pins);
  });
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  if (pts.size() < 3) return pts;
  std::vector<HullPoint> hull(2 * pts.size());
  std::size_t k = 0;
  for (const auto& p : pts) {
    while (k >= 2 && cross(hull[k - 2], hull[k - 1], p) <= 0.0) --k;
    hull[k++] = p;
  }
  for (std::size_t i = pts.size() - 1, lower = k + 1; i-- > 0;) {
    while (k >= lower && cross(hull[k - 2], hull[k - 1], pts[i]) <= 0.0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

bool hull_contains(const std::vector<HullPoint>& hull, HullPoint p) {
  if (hull.size() < 3) return false;
  // Boundary counts as inside; tolerance scaled to the hull's extent.
  double extent = 0.0;
  for (const auto& h : hull) extent = std::max({extent, std::abs(h.area), std::abs(h.pins)});
  const double tol = 1e-12 * extent * extent;
  for (std::size_t i = 0; i < hull.size(); ++i) {
    const auto& a = hull[i];
    const auto& b = hull[(i + 1) % hull.size()];
    if (cross(a, b, p) < -tol) return false;
  }
  return true;
}

SubstrateRequirements substrate_requirements(const SystemSpec& sys, const TechDatabase& db) {
  if (sys.dies.empty())
    throw Error(ErrorKind::validation,
                fmt::format("system '{}' has no dies; substrate is undefined", sys.name));
  const auto& def = db.defaults();
  std::vector<double> areas;
  double signals = 0.0;
  for (const auto& d : sys.dies) {
    areas.push_back(die_area(d, db.node(d.node)));
    signals += d.signal_pins;
  }
  const double footprint = sys.hbm.footprint_mm2.value_or(def.hbm_footprint);
  for (int i = 0; i < sys.hbm.stacks; ++i) areas.push_back(footprint);

  SubstrateRequirements req;
  req.footprint = interposer_area_from_floorplan(
      areas, sys.floorplan_overhead.value_or(def.floorplan_overhead));
  req.substrate_area = req.footprint * def.package_fanout;
  req.pin_count = std::ceil(signals * (1.0 + def.pg_ratio));
  return req;
}

}  // namespace chipcost
