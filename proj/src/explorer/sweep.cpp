#include <fmt/format.h>

#include "chipcost/explorer.hpp"

namespace chipcost {

void validate_sweep(const SweepSpec& spec) {
  auto require = [](bool ok, const std::string& what) {
    if (!ok) throw Error(ErrorKind::validation, "sweep: " + what);
  };
  require(!spec.scales.empty(), "scale axis is empty");
  require(!spec.io_fractions.empty(), "io_fraction axis is empty");
  require(!spec.die_counts.empty(), "die_count axis is empty");
  require(!spec.node_pairs.empty(), "node_pair axis is empty");
  require(!spec.integrations.empty(), "integration axis is empty");
  for (double s : spec.scales) require(s > 0.0, fmt::format("scale {} must be > 0", s));
  for (double f : spec.io_fractions)
    require(f >= 0.0 && f < 1.0, fmt::format("io_fraction {} must be in [0, 1)", f));
  for (int k : spec.die_counts) require(k >= 1, fmt::format("die_count {} must be >= 1", k));
  require(spec.fixed.hbm.stacks >= 0, "hbm stacks must be >= 0");
  require(spec.max_points > 0, "max_points must be > 0");
}

std::size_t sweep_size(const SweepSpec& spec) {
  std::size_t n = 1;
  for (std::size_t axis : {spec.scales.size(), spec.io_fractions.size(), spec.die_counts.size(),
                           spec.node_pairs.size(), spec.integrations.size()}) {
    if (axis != 0 && n > spec.max_points / axis + 1) return spec.max_points + 1;
    n *= axis;
  }
  return n;
}

std::vector<SweepPoint> enumerate_points(const SweepSpec& spec) {
  validate_sweep(spec);
  const std::size_t n = sweep_size(spec);
  if (n > spec.max_points)
    throw Error(ErrorKind::limit, fmt::format("sweep has more than {} points (cap {})",
                                              spec.max_points, spec.max_points));
  std::vector<SweepPoint> points;
  points.reserve(n);
  for (double scale : spec.scales)
    for (double f : spec.io_fractions)
      for (int k : spec.die_counts)
        for (const auto& pair : spec.node_pairs)
          for (Integration integ : spec.integrations)
            points.push_back({points.size(), scale, f, k, pair, integ});
  return points;
}

SystemSpec build_point_system(const SweepPoint& p, const SweepSpec& spec, const TechDatabase& db) {
  const auto& core = db.node(p.nodes.core);
  const auto& io = db.node(p.nodes.io);
  const double total_tx = spec.unit == ScaleUnit::transistors_billion
                              ? p.scale
                              : p.scale * core.transistor_density / 1000.0;

  SystemSpec sys;
  sys.name = fmt::format("point-{}", p.index);
  sys.integration = p.integration;
  sys.hbm = spec.fixed.hbm;
  sys.package_class = spec.fixed.package_class;
  sys.bump_tech = spec.fixed.bump_tech;
  sys.floorplan_overhead = spec.fixed.floorplan_overhead;

  const bool monolithic = p.die_count == 1 && (p.nodes.core == p.nodes.io || p.io_fraction == 0.0);
  if (monolithic) {
    DieSpec d;
    d.name = "monolithic";
    d.node = core.name;
    d.transistors_billion = total_tx;
    d.io_fraction = p.io_fraction;
    d.signal_pins = spec.fixed.signal_pins;
    d.d2d_signals = spec.fixed.d2d_signals_per_die;
    sys.dies.push_back(std::move(d));
    return sys;
  }

  const bool has_io_die = p.io_fraction > 0.0;
  const double logic_tx = (1.0 - p.io_fraction) * total_tx;
  for (int i = 0; i < p.die_count; ++i) {
    DieSpec d;
    d.name = fmt::format("core[{}]", i);
    d.node = core.name;
    d.transistors_billion = logic_tx / p.die_count;
    d.signal_pins = has_io_die ? 0.0 : spec.fixed.signal_pins / p.die_count;
    d.d2d_signals = spec.fixed.d2d_signals_per_die;
    sys.dies.push_back(std::move(d));
  }
  if (has_io_die) {
    // An all-I/O die is sized directly from the derated I/O density.
    DieSpec d;
    d.name = "io";
    d.node = io.name;
    d.area_mm2 = p.io_fraction * total_tx * 1000.0 / (io.transistor_density * io.io_density_factor);
    d.signal_pins = spec.fixed.signal_pins;
    d.d2d_signals = spec.fixed.d2d_signals_per_die;
    sys.dies.push_back(std::move(d));
  }
  return sys;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, const TechDatabase& db,
                                const ModelOptions& options, Execution execution) {
  const auto points = enumerate_points(spec);
  const Evaluator evaluator(db, options);

  std::vector<SystemSpec> systems(points.size());
  std::vector<std::string> build_errors(points.size());
  std::vector<ErrorKind> build_kinds(points.size(), ErrorKind::model);
  for (std::size_t i = 0; i < points.size(); ++i) {
    try {
      systems[i] = build_point_system(points[i], spec, db);
    } catch (const Error& e) {
      build_errors[i] = e.what();
      build_kinds[i] = e.kind();
    }
  }
  auto results = evaluate_batch(systems, evaluator, execution);

  std::vector<SweepRow> rows;
  rows.reserve(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!build_errors[i].empty()) {
      BatchResult failed;
      failed.error = build_errors[i];
      failed.error_kind = build_kinds[i];
      rows.push_back({points[i], std::move(failed)});
    } else {
      rows.push_back({points[i], std::move(results[i])});
    }
  }
  return rows;
}

}  // namespace chipcost
