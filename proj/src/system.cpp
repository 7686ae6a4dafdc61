#include "chipcost/system.hpp"

#include <cmath>

#include <fmt/format.h>

#include "chipcost/error.hpp"

namespace chipcost {

double interface_area(double signal_count, double pitch_um) {
  if (!(signal_count > 0.0) || !(pitch_um > 0.0))
    throw Error(ErrorKind::domain,
                fmt::format("interface area needs positive signal count and pitch (got {}, {})",
                            signal_count, pitch_um));
  const double side_bumps = std::ceil(std::sqrt(signal_count));
  const double side_mm = side_bumps * pitch_um / 1000.0;
  return side_mm * side_mm;
}

FeasibilityVerdict check_integration_feasibility(const SystemSpec& sys, const TechDatabase& db) {
  FeasibilityVerdict v;
  if (sys.hbm.stacks <= 0) {
    v.message = "no HBM stacks";
    return v;
  }
  const auto& def = db.defaults();
  const auto& bump = db.bump(sys.bump_tech.value_or(def.bump_for(sys.integration)));
  v.pitch = bump.pitch;
  v.footprint = sys.hbm.footprint_mm2.value_or(def.hbm_footprint);
  v.interface_area = interface_area(sys.hbm.signal_bits.value_or(def.hbm_signal_bits), bump.pitch);
  // Identical stacks; the first one stands for all of them.
  if (v.interface_area > v.footprint) {
    v.feasible = false;
    v.violating = "hbm[0]";
    v.message = fmt::format(
        "{}-bit HBM interface at {} µm pitch ({}) needs {:.4f} mm², stack footprint is "
        "{:.4f} mm²",
        sys.hbm.signal_bits.value_or(def.hbm_signal_bits), bump.pitch, bump.name,
        v.interface_area, v.footprint);
  } else {
    v.message = fmt::format("HBM interface {:.4f} mm² fits in {:.4f} mm² at {} µm pitch",
                            v.interface_area, v.footprint, bump.pitch);
  }
  return v;
}

Evaluator::Evaluator(const TechDatabase& db, ModelOptions options)
    : db_(&db), options_(options) {
  for (const auto& pc : db.package_classes())
    regressions_.emplace(pc.name, fit_package_regression(pc));
}

const PackageRegression& Evaluator::regression(std::string_view package_class) const {
  auto it = regressions_.find(package_class);
  if (it == regressions_.end()) db_->package_class(package_class);  // throws not-found
  return it->second;
}

namespace {

template <typename F>
auto attributed(std::string_view component, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw e.within(component);
  }
}

}  // namespace

CostReport Evaluator::evaluate(const SystemSpec& sys) const {
  const auto& db = *db_;
  const auto& def = db.defaults();
  if (sys.dies.empty())
    throw Error(ErrorKind::validation, fmt::format("system '{}' has no dies", sys.name));
  if (sys.hbm.stacks < 0)
    throw Error(ErrorKind::validation,
                fmt::format("system '{}': hbm stacks must be >= 0", sys.name));

  const auto verdict =
      attributed("feasibility", [&] { return check_integration_feasibility(sys, db); });
  if (!verdict.feasible)
    throw Error(ErrorKind::model, fmt::format("system '{}' is infeasible on {}: {}: {}", sys.name,
                                              to_string(sys.integration), verdict.violating,
                                              verdict.message));

  CostReport rep;
  rep.system_name = sys.name;
  rep.integration = sys.integration;
  const auto& bump = attributed("bonding", [&]() -> const BumpTech& {
    return db.bump(sys.bump_tech.value_or(def.bump_for(sys.integration)));
  });
  rep.bump_tech = bump.name;

  AssemblySpec asm_spec;
  std::vector<double> placed_areas;
  double routed_signals = 0.0;
  double base = 0.0;
  for (std::size_t i = 0; i < sys.dies.size(); ++i) {
    const auto& d = sys.dies[i];
    const auto cost = attributed(fmt::format("die[{}] '{}'", i, d.name), [&] {
      return die_cost(d, db.node(d.node));
    });
    rep.dies.push_back({d.name, d.node, false, cost, bump.bond_cost_per_die, bump.bond_yield});
    asm_spec.dies.push_back({cost, bump});
    placed_areas.push_back(cost.area);
    routed_signals += d.d2d_signals;
    base += cost.yielded_cost;
  }
  const double hbm_footprint = sys.hbm.footprint_mm2.value_or(def.hbm_footprint);
  const double hbm_bits = sys.hbm.signal_bits.value_or(def.hbm_signal_bits);
  double hbm_purchase = 0.0;
  for (int s = 0; s < sys.hbm.stacks; ++s) {
    DieCostResult stack;
    stack.area = hbm_footprint;
    stack.unit_cost = sys.hbm.stack_cost;
    stack.yield = 1.0;
    stack.yielded_cost = sys.hbm.stack_cost;
    rep.dies.push_back(
        {fmt::format("hbm[{}]", s), "", true, stack, bump.bond_cost_per_die, bump.bond_yield});
    asm_spec.dies.push_back({stack, bump});
    placed_areas.push_back(hbm_footprint);
    routed_signals += hbm_bits;
    hbm_purchase += sys.hbm.stack_cost;
  }

  const double overhead = sys.floorplan_overhead.value_or(def.floorplan_overhead);
  rep.interposer = attributed("interposer", [&] {
    switch (interposer_kind_for(sys.integration)) {
      case InterposerKind::silicon: {
        const auto& node = db.node(sys.interposer_node.value_or(def.silicon_interposer_node));
        const double area = interposer_area_from_floorplan(placed_areas, overhead);
        const int layers = interposer_wiring_layers(routed_signals, placed_areas, node.routing_density);
        return silicon_interposer_cost(area, node, layers);
      }
      case InterposerKind::organic: {
        const auto& panel = db.panel(sys.panel.value_or(def.organic_panel));
        const double area = interposer_area_from_floorplan(placed_areas, overhead);
        const int layers = interposer_wiring_layers(routed_signals, placed_areas, panel.routing_density);
        return organic_interposer_cost(area, panel, layers);
      }
      case InterposerKind::none:
        break;
    }
    return no_interposer();
  });
  asm_spec.interposer = rep.interposer;

  rep.assembly = attributed("assembly", [&] { return assemble_system(asm_spec, options_); });
  rep.bonding_total = rep.assembly.bond_cost_total;

  rep.package = attributed("package", [&] {
    PackageLine line;
    line.package_class = sys.package_class.value_or(def.package_class);
    line.regression = regression(line.package_class);
    const auto req = substrate_requirements(sys, db);
    line.substrate_area = req.substrate_area;
    line.pin_count = req.pin_count;
    const auto pc = package_cost(line.regression, req.substrate_area, req.pin_count);
    line.cost = pc.cost;
    line.extrapolated = pc.extrapolated;
    return line;
  });
  rep.grand_total = rep.assembly.total + rep.package.cost;

  auto& rel = rep.relative;
  rel.base = base;
  rel.core_dies = 1.0;
  rel.hbm_stacks = hbm_purchase / base;
  rel.interposer = rep.assembly.interposer_term / base;
  rel.bond_cost = rep.assembly.bond_cost_total / base;
  rel.bond_yield_loss = (rep.assembly.total - rep.assembly.pre_bond_yield()) / base;
  rel.overhead = (rep.assembly.total - base) / base;
  rel.package = rep.package.cost / base;
  return rep;
}

CostReport evaluate_system(const SystemSpec& sys, const TechDatabase& db,
                           const ModelOptions& options) {
  return Evaluator(db, options).evaluate(sys);
}

}  // namespace chipcost
