#include "chipcost/report_io.hpp"

#include <algorithm>
#include <map>

#include <fmt/format.h>

#include "chipcost/error.hpp"

namespace chipcost {

using nlohmann::json;

OutputFormat parse_output_format(std::string_view text) {
  if (text == "json") return OutputFormat::json;
  if (text == "csv") return OutputFormat::csv;
  if (text == "table") return OutputFormat::table;
  throw Error(ErrorKind::validation,
              fmt::format("unknown output format '{}' (json, csv or table)", text));
}

std::string format_number(double value) { return fmt::format("{}", value); }

namespace {

std::string csv_cell(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string provenance_lines(const Provenance& prov, const std::vector<std::string>& notes) {
  std::string out;
  out += fmt::format("# chipcost {}\n", prov.command);
  out += fmt::format("# dataset_version={}\n", prov.dataset_version);
  out += fmt::format("# dataset_path={}\n", prov.dataset_path);
  out += fmt::format("# config={}\n", prov.config.dump());
  for (const auto& n : notes) out += fmt::format("# {}\n", n);
  return out;
}

std::string num(double v) { return format_number(v); }
std::string num(const std::optional<double>& v) { return v ? format_number(*v) : std::string(); }

json die_cost_json(const DieCostResult& d) {
  return {{"area_mm2", d.area},
          {"unit_cost", d.unit_cost},
          {"yield", d.yield},
          {"yielded_cost", d.yielded_cost},
          {"dies_per_wafer", d.dies_per_wafer}};
}

json relative_json(const RelativeBreakdown& r) {
  return {{"base_cost", r.base},          {"core_dies", r.core_dies},
          {"hbm_stacks", r.hbm_stacks},   {"interposer", r.interposer},
          {"bond_cost", r.bond_cost},     {"bond_yield_loss", r.bond_yield_loss},
          {"overhead", r.overhead},       {"package", r.package}};
}

json verdict_json(const FeasibilityVerdict& v) {
  return {{"feasible", v.feasible},       {"violating", v.violating},
          {"interface_area_mm2", v.interface_area}, {"footprint_mm2", v.footprint},
          {"pitch_um", v.pitch},          {"message", v.message}};
}

}  // namespace

std::string render_csv(const TextTable& table, const Provenance& prov,
                       const std::vector<std::string>& notes) {
  std::string out = provenance_lines(prov, notes);
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      out += csv_cell(cells[i]);
    }
    out += '\n';
  };
  line(table.header);
  for (const auto& r : table.rows) line(r);
  return out;
}

std::string render_text(const TextTable& table, const Provenance& prov,
                        const std::vector<std::string>& notes) {
  std::vector<std::size_t> width(table.header.size(), 0);
  auto measure = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size() && i < width.size(); ++i)
      width[i] = std::max(width[i], cells[i].size());
  };
  measure(table.header);
  for (const auto& r : table.rows) measure(r);
  std::string out = provenance_lines(prov, notes);
  auto line = [&](const std::vector<std::string>& cells) {
    std::string l;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) l += "  ";
      l += fmt::format("{:<{}}", cells[i], i < width.size() ? width[i] : 0);
    }
    while (!l.empty() && l.back() == ' ') l.pop_back();
    out += l + '\n';
  };
  line(table.header);
  std::size_t total = 0;
  for (auto w : width) total += w;
  out += std::string(total + 2 * (width.empty() ? 0 : width.size() - 1), '-') + '\n';
  for (const auto& r : table.rows) line(r);
  return out;
}

std::string render_json(const json& result, const Provenance& prov) {
  json doc = {{"tool", "chipcost"},
              {"command", prov.command},
              {"dataset_version", prov.dataset_version},
              {"dataset_path", prov.dataset_path},
              {"config", prov.config},
              {"result", result}};
  return doc.dump(2) + "\n";
}

std::string render(OutputFormat format, const json& result, const TextTable& table,
                   const Provenance& prov, const std::vector<std::string>& notes) {
  switch (format) {
    case OutputFormat::json: return render_json(result, prov);
    case OutputFormat::csv: return render_csv(table, prov, notes);
    case OutputFormat::table: return render_text(table, prov, notes);
  }
  return {};
}

// --- single system ---------------------------------------------------------

json report_to_json(const CostReport& r) {
  json dies = json::array();
  for (const auto& d : r.dies) {
    json j = die_cost_json(d.cost);
    j["name"] = d.name;
    j["node"] = d.node;
    j["is_hbm"] = d.is_hbm;
    j["bond_cost"] = d.bond_cost;
    j["bond_yield"] = d.bond_yield;
    dies.push_back(std::move(j));
  }
  const auto& ip = r.interposer;
  const auto& as = r.assembly;
  const auto& pk = r.package;
  return {
      {"system", r.system_name},
      {"integration", std::string(to_string(r.integration))},
      {"bump_tech", r.bump_tech},
      {"dies", std::move(dies)},
      {"interposer",
       {{"kind", std::string(to_string(ip.kind))},
        {"area_mm2", ip.area},
        {"unit_cost", ip.unit_cost},
        {"yield", ip.yield},
        {"yielded_cost", ip.yielded_cost},
        {"wiring_layers", ip.wiring_layers}}},
      {"assembly",
       {{"total", as.total},
        {"interposer_term", as.interposer_term},
        {"per_die_terms", as.per_die_terms},
        {"bond_yield_divisor", as.bond_yield_divisor},
        {"bond_cost_total", as.bond_cost_total}}},
      {"bonding_total", r.bonding_total},
      {"package",
       {{"class", pk.package_class},
        {"substrate_area_mm2", pk.substrate_area},
        {"pin_count", pk.pin_count},
        {"cost", pk.cost},
        {"extrapolated", pk.extrapolated},
        {"regression",
         {{"mu_area", pk.regression.mu_area},
          {"mu_pins", pk.regression.mu_pins},
          {"intercept", pk.regression.intercept},
          {"r_squared", pk.regression.r_squared}}}}},
      {"grand_total", r.grand_total},
      {"relative_breakdown", relative_json(r.relative)}};
}

TextTable report_table(const CostReport& r) {
  TextTable t;
  t.header = {"section", "item", "metric", "value"};
  auto add = [&](std::string section, std::string item, std::string metric, std::string value) {
    t.rows.push_back({std::move(section), std::move(item), std::move(metric), std::move(value)});
  };
  add("system", r.system_name, "integration", std::string(to_string(r.integration)));
  add("system", r.system_name, "bump_tech", r.bump_tech);
  for (const auto& d : r.dies) {
    const std::string section = d.is_hbm ? "hbm" : "die";
    if (!d.is_hbm) add(section, d.name, "node", d.node);
    add(section, d.name, "area_mm2", num(d.cost.area));
    add(section, d.name, "unit_cost", num(d.cost.unit_cost));
    add(section, d.name, "yield", num(d.cost.yield));
    add(section, d.name, "yielded_cost", num(d.cost.yielded_cost));
    add(section, d.name, "bond_cost", num(d.bond_cost));
    add(section, d.name, "bond_yield", num(d.bond_yield));
  }
  const auto& ip = r.interposer;
  add("interposer", std::string(to_string(ip.kind)), "area_mm2", num(ip.area));
  add("interposer", std::string(to_string(ip.kind)), "unit_cost", num(ip.unit_cost));
  add("interposer", std::string(to_string(ip.kind)), "yield", num(ip.yield));
  add("interposer", std::string(to_string(ip.kind)), "yielded_cost", num(ip.yielded_cost));
  add("interposer", std::string(to_string(ip.kind)), "wiring_layers", std::to_string(ip.wiring_layers));
  add("assembly", "", "interposer_term", num(r.assembly.interposer_term));
  add("assembly", "", "bond_cost_total", num(r.assembly.bond_cost_total));
  add("assembly", "", "bond_yield_divisor", num(r.assembly.bond_yield_divisor));
  add("assembly", "", "total", num(r.assembly.total));
  add("package", r.package.package_class, "substrate_area_mm2", num(r.package.substrate_area));
  add("package", r.package.package_class, "pin_count", num(r.package.pin_count));
  add("package", r.package.package_class, "cost", num(r.package.cost));
  add("package", r.package.package_class, "extrapolated", r.package.extrapolated ? "true" : "false");
  const auto& rel = r.relative;
  add("relative", "", "base_cost", num(rel.base));
  add("relative", "", "hbm_stacks", num(rel.hbm_stacks));
  add("relative", "", "interposer", num(rel.interposer));
  add("relative", "", "bond_cost", num(rel.bond_cost));
  add("relative", "", "bond_yield_loss", num(rel.bond_yield_loss));
  add("relative", "", "overhead", num(rel.overhead));
  add("relative", "", "package", num(rel.package));
  add("total", "", "grand_total", num(r.grand_total));
  return t;
}

// --- sweeps ----------------------------------------------------------------

const std::vector<std::string>& sweep_metric_columns() {
  static const std::vector<std::string> cols = {
      "grand_total",   "assembly_total", "die_cost",      "interposer_cost",
      "bonding_total", "bond_yield_divisor", "package_cost", "substrate_area_mm2",
      "pin_count",     "total_die_area_mm2", "overhead"};
  return cols;
}

namespace {

std::vector<std::string> selected_columns(const SweepSpec& spec) {
  const auto& all = sweep_metric_columns();
  if (spec.columns.empty()) return all;
  std::vector<std::string> out;
  for (const auto& c : all)
    if (std::find(spec.columns.begin(), spec.columns.end(), c) != spec.columns.end())
      out.push_back(c);
  for (const auto& c : spec.columns)
    if (std::find(all.begin(), all.end(), c) == all.end())
      throw Error(ErrorKind::validation, fmt::format("sweep: unknown output column '{}'", c));
  return out;
}

double metric(const CostReport& r, const std::string& name) {
  if (name == "grand_total") return r.grand_total;
  if (name == "assembly_total") return r.assembly.total;
  if (name == "die_cost") {
    double s = 0.0;
    for (const auto& d : r.dies) s += d.cost.yielded_cost;
    return s;
  }
  if (name == "interposer_cost") return r.interposer.yielded_cost;
  if (name == "bonding_total") return r.bonding_total;
  if (name == "bond_yield_divisor") return r.assembly.bond_yield_divisor;
  if (name == "package_cost") return r.package.cost;
  if (name == "substrate_area_mm2") return r.package.substrate_area;
  if (name == "pin_count") return r.package.pin_count;
  if (name == "total_die_area_mm2") {
    double s = 0.0;
    for (const auto& d : r.dies)
      if (!d.is_hbm) s += d.cost.area;
    return s;
  }
  if (name == "overhead") return r.relative.overhead;
  throw Error(ErrorKind::validation, fmt::format("unknown metric '{}'", name));
}

std::string_view unit_name(ScaleUnit u) {
  return u == ScaleUnit::transistors_billion ? "transistors_billion" : "area_mm2";
}

}  // namespace

json sweep_to_json(const std::vector<SweepRow>& rows, const SweepSpec& spec) {
  const auto cols = selected_columns(spec);
  json out = json::array();
  for (const auto& row : rows) {
    const auto& p = row.point;
    json j = {{"index", p.index},
              {"scale", p.scale},
              {"scale_unit", std::string(unit_name(spec.unit))},
              {"io_fraction", p.io_fraction},
              {"die_count", p.die_count},
              {"core_node", p.nodes.core},
              {"io_node", p.nodes.io},
              {"integration", std::string(to_string(p.integration))},
              {"status", row.result.ok() ? "ok" : "error"}};
    if (row.result.ok()) {
      json m = json::object();
      for (const auto& c : cols) m[c] = metric(*row.result.report, c);
      j["metrics"] = std::move(m);
    } else {
      j["error_kind"] = std::string(to_string(row.result.error_kind));
      j["error"] = row.result.error;
    }
    out.push_back(std::move(j));
  }
  return out;
}

TextTable sweep_table(const std::vector<SweepRow>& rows, const SweepSpec& spec) {
  const auto cols = selected_columns(spec);
  TextTable t;
  t.header = {"index", "scale", "scale_unit", "io_fraction", "die_count", "core_node",
              "io_node", "integration", "status"};
  t.header.insert(t.header.end(), cols.begin(), cols.end());
  t.header.push_back("error");
  for (const auto& row : rows) {
    const auto& p = row.point;
    std::vector<std::string> cells = {std::to_string(p.index), num(p.scale),
                                      std::string(unit_name(spec.unit)), num(p.io_fraction),
                                      std::to_string(p.die_count), p.nodes.core, p.nodes.io,
                                      std::string(to_string(p.integration)),
                                      row.result.ok() ? "ok" : "error"};
    for (const auto& c : cols)
      cells.push_back(row.result.ok() ? num(metric(*row.result.report, c)) : std::string());
    cells.push_back(row.result.error);
    t.rows.push_back(std::move(cells));
  }
  return t;
}

TextTable plot_sweep(const std::vector<SweepRow>& rows) {
  TextTable t;
  t.header = {"index", "scale", "io_fraction", "die_count", "core_node", "io_node",
              "integration", "component", "cost"};
  for (const auto& row : rows) {
    if (!row.result.ok()) continue;
    const auto& p = row.point;
    const auto& r = *row.result.report;
    double dies = 0.0;
    for (const auto& d : r.dies) dies += d.cost.yielded_cost;
    const std::vector<std::pair<std::string, double>> parts = {
        {"dies", dies},
        {"interposer", r.assembly.interposer_term},
        {"bond_cost", r.assembly.bond_cost_total},
        {"bond_yield_loss", r.assembly.total - r.assembly.pre_bond_yield()},
        {"package", r.package.cost}};
    for (const auto& [name, value] : parts)
      t.rows.push_back({std::to_string(p.index), num(p.scale), num(p.io_fraction),
                        std::to_string(p.die_count), p.nodes.core, p.nodes.io,
                        std::string(to_string(p.integration)), name, num(value)});
  }
  return t;
}

// --- switching points --------------------------------------------------------

json switchpoints_to_json(const std::vector<SwitchingRow>& rows) {
  json out = json::array();
  for (const auto& row : rows) {
    json j = {{"node", row.node}, {"integration", std::string(to_string(row.integration))}};
    if (row.point) {
      const auto& sp = *row.point;
      j["verdict"] = std::string(to_string(sp.verdict));
      j["area_mm2"] = sp.area;
      j["transistors_billion"] = sp.transistors_billion;
      j["die_count"] = sp.die_count;
      j["monolithic_cost"] = sp.monolithic_cost;
      j["chiplet_cost"] = sp.chiplet_cost;
      j["monolithic_cost_below"] = sp.monolithic_cost_below;
      j["chiplet_cost_below"] = sp.chiplet_cost_below;
    } else {
      j["verdict"] = "error";
      j["error"] = row.error;
    }
    out.push_back(std::move(j));
  }
  return out;
}

TextTable switchpoints_table(const std::vector<SwitchingRow>& rows) {
  TextTable t;
  t.header = {"node", "integration", "verdict", "area_mm2", "transistors_billion", "die_count",
              "monolithic_cost", "chiplet_cost", "error"};
  for (const auto& row : rows) {
    if (row.point) {
      const auto& sp = *row.point;
      t.rows.push_back({row.node, std::string(to_string(row.integration)),
                        std::string(to_string(sp.verdict)), num(sp.area),
                        num(sp.transistors_billion), std::to_string(sp.die_count),
                        num(sp.monolithic_cost), num(sp.chiplet_cost), ""});
    } else {
      t.rows.push_back({row.node, std::string(to_string(row.integration)), "error", "", "", "", "",
                        "", row.error});
    }
  }
  return t;
}

TextTable plot_switchpoints(const std::vector<SwitchingRow>& rows) {
  TextTable t;
  t.header = {"node", "integration", "quantity", "value"};
  for (const auto& row : rows) {
    if (!row.point) continue;
    t.rows.push_back({row.node, std::string(to_string(row.integration)), "area_mm2",
                      num(row.point->area)});
    t.rows.push_back({row.node, std::string(to_string(row.integration)), "transistors_billion",
                      num(row.point->transistors_billion)});
  }
  return t;
}

// --- HBM case study ----------------------------------------------------------

json hbm_study_to_json(const HbmStudyResult& result) {
  json rows = json::array();
  for (const auto& row : result.breakdown) {
    json j = {{"scale_mm2", row.scale},
              {"integration", std::string(to_string(row.integration))},
              {"feasibility", verdict_json(row.verdict)}};
    if (row.report) {
      j["relative_breakdown"] = relative_json(row.report->relative);
      j["assembly_total"] = row.report->assembly.total;
      j["grand_total"] = row.report->grand_total;
      j["interposer_area_mm2"] = row.report->interposer.area;
    } else {
      j["error"] = row.error;
    }
    rows.push_back(std::move(j));
  }
  json excluded = json::array();
  for (const auto& row : result.excluded)
    excluded.push_back({{"scale_mm2", row.scale},
                        {"integration", std::string(to_string(row.integration))},
                        {"feasibility", verdict_json(row.verdict)}});
  return {{"breakdown", std::move(rows)}, {"excluded", std::move(excluded)}};
}

TextTable hbm_study_table(const HbmStudyResult& result) {
  TextTable t;
  t.header = {"scale_mm2", "integration", "core_dies", "interposer", "bond_cost",
              "bond_yield_loss", "hbm_stacks", "overhead", "package", "base_cost", "error"};
  for (const auto& row : result.breakdown) {
    if (row.report) {
      const auto& r = row.report->relative;
      t.rows.push_back({num(row.scale), std::string(to_string(row.integration)), num(r.core_dies),
                        num(r.interposer), num(r.bond_cost), num(r.bond_yield_loss),
                        num(r.hbm_stacks), num(r.overhead), num(r.package), num(r.base), ""});
    } else {
      t.rows.push_back({num(row.scale), std::string(to_string(row.integration)), "", "", "", "",
                        "", "", "", "", row.error});
    }
  }
  return t;
}

std::vector<std::string> hbm_study_notes(const HbmStudyResult& result) {
  std::vector<std::string> notes;
  for (const auto& row : result.excluded)
    notes.push_back(fmt::format("excluded scale_mm2={} integration={} feasible={}: {}",
                                num(row.scale), to_string(row.integration),
                                row.verdict.feasible ? "true" : "false", row.verdict.message));
  return notes;
}

TextTable plot_hbm_overhead(const HbmStudyResult& result) {
  TextTable t;
  t.header = {"scale_mm2", "integration", "component", "relative_cost"};
  for (const auto& row : result.breakdown) {
    if (!row.report) continue;
    const auto& r = row.report->relative;
    const std::vector<std::pair<std::string, double>> parts = {
        {"core_dies", r.core_dies},    {"hbm_stacks", r.hbm_stacks},
        {"interposer", r.interposer},  {"bond_cost", r.bond_cost},
        {"bond_yield_loss", r.bond_yield_loss}};
    for (const auto& [name, value] : parts)
      t.rows.push_back({num(row.scale), std::string(to_string(row.integration)), name, num(value)});
  }
  return t;
}

// --- hybrid case study ---------------------------------------------------------

json hybrid_study_to_json(const std::vector<HybridStudyRow>& rows) {
  json out = json::array();
  for (const auto& row : rows) {
    json hybrids = json::array();
    for (const auto& h : row.hybrids) {
      json hj = {{"core_dies", h.core_dies}};
      if (h.cost)
        hj["cost"] = *h.cost;
      else
        hj["error"] = h.error;
      hybrids.push_back(std::move(hj));
    }
    json j = {{"scale_billion", row.scale},
              {"io_fraction", row.io_fraction},
              {"hybrids", std::move(hybrids)},
              {"best_core_dies", row.best_core_dies},
              {"best_cost", row.best_cost},
              {"improvement", row.improvement}};
    j["monolithic_core_node"] = row.monolithic_core_node ? json(*row.monolithic_core_node) : json(nullptr);
    j["monolithic_io_node"] = row.monolithic_io_node ? json(*row.monolithic_io_node) : json(nullptr);
    if (!row.error.empty()) j["error"] = row.error;
    out.push_back(std::move(j));
  }
  return out;
}

TextTable hybrid_study_table(const std::vector<HybridStudyRow>& rows) {
  TextTable t;
  t.header = {"scale_billion", "io_fraction", "monolithic_core_node", "monolithic_io_node"};
  std::vector<int> counts;
  if (!rows.empty())
    for (const auto& h : rows.front().hybrids) counts.push_back(h.core_dies);
  for (int k : counts) t.header.push_back(fmt::format("hybrid_{}_core_dies", k));
  for (const auto& c : {"best_core_dies", "best_cost", "improvement", "error"}) t.header.push_back(c);
  for (const auto& row : rows) {
    std::vector<std::string> cells = {num(row.scale), num(row.io_fraction),
                                      num(row.monolithic_core_node), num(row.monolithic_io_node)};
    for (const auto& h : row.hybrids) cells.push_back(num(h.cost));
    cells.push_back(std::to_string(row.best_core_dies));
    cells.push_back(num(row.best_cost));
    cells.push_back(num(row.improvement));
    cells.push_back(row.error);
    t.rows.push_back(std::move(cells));
  }
  return t;
}

TextTable plot_hybrid_costs(const std::vector<HybridStudyRow>& rows) {
  TextTable t;
  t.header = {"scale_billion", "io_fraction", "system", "core_dies", "cost"};
  for (const auto& row : rows) {
    if (row.monolithic_core_node)
      t.rows.push_back({num(row.scale), num(row.io_fraction), "monolithic_core_node", "1",
                        num(*row.monolithic_core_node)});
    if (row.monolithic_io_node)
      t.rows.push_back({num(row.scale), num(row.io_fraction), "monolithic_io_node", "1",
                        num(*row.monolithic_io_node)});
    for (const auto& h : row.hybrids)
      if (h.cost)
        t.rows.push_back({num(row.scale), num(row.io_fraction), "hybrid",
                          std::to_string(h.core_dies), num(*h.cost)});
  }
  return t;
}

// --- package regression ------------------------------------------------------

TextTable plot_package_regression(const TechDatabase& db, const Evaluator& evaluator) {
  TextTable t;
  t.header = {"package_class", "core_layers", "buildup_layers", "substrate_area_mm2",
              "pin_count", "sample_cost", "fitted_cost"};
  for (const auto& pc : db.package_classes()) {
    const auto& reg = evaluator.regression(pc.name);
    for (const auto& s : pc.samples)
      t.rows.push_back({pc.name, std::to_string(pc.core_layers), std::to_string(pc.buildup_layers),
                        num(s.substrate_area), num(s.pin_count), num(s.cost),
                        num(reg.mu_area * s.substrate_area + reg.mu_pins * s.pin_count +
                            reg.intercept)});
  }
  return t;
}

}  // namespace chipcost
