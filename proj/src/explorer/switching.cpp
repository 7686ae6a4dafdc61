#include <algorithm>
#include <cmath>
#include <exception>

#include <fmt/format.h>

#include "chipcost/explorer.hpp"

namespace chipcost {

std::string_view to_string(SwitchVerdict verdict) {
  switch (verdict) {
    case SwitchVerdict::crossover: return "crossover";
    case SwitchVerdict::chiplet_always_cheaper: return "chiplet_always_cheaper";
    case SwitchVerdict::monolithic_always_cheaper: return "monolithic_always_cheaper";
  }
  return "unknown";
}

int PartitionRule::dies_for(double area_mm2) const {
  switch (kind) {
    case Kind::equal_split:
      if (count < 2)
        throw Error(ErrorKind::validation,
                    fmt::format("equal_split partition needs count >= 2 (got {})", count));
      return count;
    case Kind::max_die_area:
      if (!(max_die_area > 0.0))
        throw Error(ErrorKind::validation, "max_die_area partition needs a positive limit");
      return std::max(1, static_cast<int>(std::ceil(area_mm2 / max_die_area)));
  }
  return count;
}

SystemSpec monolithic_system(const TechNode& node, double area_mm2, const SwitchSearch& search) {
  SystemSpec sys;
  sys.name = fmt::format("monolithic-{}-{}", node.name, area_mm2);
  sys.integration = Integration::mcm;
  sys.package_class = search.package_class;
  DieSpec d;
  d.name = "monolithic";
  d.node = node.name;
  d.area_mm2 = area_mm2;
  d.signal_pins = search.signal_pins;
  sys.dies.push_back(std::move(d));
  return sys;
}

SystemSpec partitioned_system(const TechNode& node, Integration integration, double area_mm2,
                              const PartitionRule& rule, const SwitchSearch& search) {
  const int k = rule.dies_for(area_mm2);
  SystemSpec sys;
  sys.name = fmt::format("chiplet-{}-{}-{}", node.name, to_string(integration), area_mm2);
  sys.integration = integration;
  sys.package_class = search.package_class;
  for (int i = 0; i < k; ++i) {
    DieSpec d;
    d.name = fmt::format("chiplet[{}]", i);
    d.node = node.name;
    d.area_mm2 = area_mm2 / k;
    d.signal_pins = search.signal_pins / k;
    sys.dies.push_back(std::move(d));
  }
  return sys;
}

namespace {

struct CostPair {
  double monolithic = 0.0;
  double chiplet = 0.0;
  int dies = 0;
  // A one-die "partition" is the monolithic die, not a win.
  bool chiplet_wins() const { return dies >= 2 && chiplet <= monolithic; }
};

}  // namespace

SwitchingPoint find_switching_point(const TechNode& node, Integration integration,
                                    const PartitionRule& rule, const Evaluator& evaluator,
                                    const SwitchSearch& search) {
  const double lo_area = std::ceil(search.min_area);
  const double hi_area = std::floor(search.max_area);
  if (!(lo_area >= 1.0 && hi_area > lo_area))
    throw Error(ErrorKind::validation,
                fmt::format("switch search interval [{}, {}] is empty", search.min_area,
                            search.max_area));
  if (search.samples < 2)
    throw Error(ErrorKind::validation, "switch search needs at least 2 samples");

  auto costs_at = [&](double area) {
    CostPair c;
    c.dies = rule.dies_for(area);
    c.monolithic = evaluator.evaluate(monolithic_system(node, area, search)).grand_total;
    c.chiplet =
        evaluator.evaluate(partitioned_system(node, integration, area, rule, search)).grand_total;
    return c;
  };

  // Coarse integer grid: validates monotonicity and brackets the crossover.
  std::vector<double> grid;
  for (int j = 0; j < search.samples; ++j) {
    const double a = std::round(lo_area + (hi_area - lo_area) * j / (search.samples - 1));
    if (grid.empty() || a > grid.back()) grid.push_back(a);
  }
  std::vector<CostPair> sampled;
  sampled.reserve(grid.size());
  for (double a : grid) sampled.push_back(costs_at(a));
  for (std::size_t j = 1; j < sampled.size(); ++j) {
    if (sampled[j].monolithic < sampled[j - 1].monolithic)
      throw Error(ErrorKind::domain,
                  fmt::format("monolithic cost at node '{}' is not monotone in area "
                              "({} mm²: {}, {} mm²: {})",
                              node.name, grid[j - 1], sampled[j - 1].monolithic, grid[j],
                              sampled[j].monolithic));
    if (sampled[j].chiplet < sampled[j - 1].chiplet)
      throw Error(ErrorKind::domain,
                  fmt::format("{} chiplet cost at node '{}' is not monotone in area "
                              "({} mm²: {}, {} mm²: {}); bisection needs monotone curves",
                              to_string(integration), node.name, grid[j - 1],
                              sampled[j - 1].chiplet, grid[j], sampled[j].chiplet));
  }

  SwitchingPoint sp;
  sp.node = node.name;
  sp.integration = integration;

  auto finish = [&](double area, const CostPair& at, const CostPair& below) {
    sp.area = area;
    sp.transistors_billion = area * node.transistor_density / 1000.0;
    sp.die_count = rule.dies_for(area);
    sp.monolithic_cost = at.monolithic;
    sp.chiplet_cost = at.chiplet;
    sp.monolithic_cost_below = below.monolithic;
    sp.chiplet_cost_below = below.chiplet;
    return sp;
  };

  auto first = std::find_if(sampled.begin(), sampled.end(),
                            [](const CostPair& c) { return c.chiplet_wins(); });
  if (first == sampled.begin()) {
    sp.verdict = SwitchVerdict::chiplet_always_cheaper;
    return finish(grid.front(), sampled.front(), sampled.front());
  }
  if (first == sampled.end()) {
    sp.verdict = SwitchVerdict::monolithic_always_cheaper;
    return finish(grid.back(), sampled.back(), sampled.back());
  }

  // Invariant: chiplet loses at lo, wins at hi.
  const auto j = static_cast<std::size_t>(first - sampled.begin());
  double lo = grid[j - 1], hi = grid[j];
  CostPair at_lo = sampled[j - 1], at_hi = sampled[j];
  while (hi - lo > 1.0) {
    const double mid = std::floor((lo + hi) / 2.0);
    const CostPair c = costs_at(mid);
    if (c.chiplet_wins()) {
      hi = mid;
      at_hi = c;
    } else {
      lo = mid;
      at_lo = c;
    }
  }
  sp.verdict = SwitchVerdict::crossover;
  return finish(hi, at_hi, at_lo);
}

SwitchingPoint find_switching_point(const TechNode& node, Integration integration,
                                    const PartitionRule& rule, const TechDatabase& db,
                                    const SwitchSearch& search, const ModelOptions& options) {
  return find_switching_point(node, integration, rule, Evaluator(db, options), search);
}

std::vector<SwitchingRow> find_switching_points(std::span<const std::string> nodes,
                                                std::span<const Integration> integrations,
                                                const PartitionRule& rule,
                                                const TechDatabase& db,
                                                const SwitchSearch& search,
                                                const ModelOptions& options,
                                                Execution execution) {
  const Evaluator evaluator(db, options);
  std::vector<SwitchingRow> rows;
  for (const auto& n : nodes)
    for (Integration integ : integrations) rows.push_back({n, integ, std::nullopt, {}});

  auto solve = [&](SwitchingRow& row) {
    try {
      row.point = find_switching_point(db.node(row.node), row.integration, rule, evaluator, search);
    } catch (const Error& e) {
      row.error = e.what();
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  };
  const auto n = static_cast<long>(rows.size());
  if (execution == Execution::parallel) {
#pragma omp parallel for schedule(dynamic, 1)
    for (long i = 0; i < n; ++i) solve(rows[i]);
  } else {
    for (long i = 0; i < n; ++i) solve(rows[i]);
  }
  return rows;
}

}  // namespace chipcost
