#include "chipcost/spec_io.hpp"

#include <fstream>
#include <set>

#include <fmt/format.h>

#include "chipcost/error.hpp"

namespace chipcost {

using nlohmann::json;

namespace {

[[noreturn]] void invalid(const std::string& where, const std::string& what) {
  throw Error(ErrorKind::validation, fmt::format("{}: {}", where, what));
}

void expect_object(const json& j, const std::string& where) {
  if (!j.is_object()) throw Error(ErrorKind::parse, where + ": expected an object");
}

void check_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed) {
  expect_object(j, where);
  std::set<std::string> ok(allowed.begin(), allowed.end());
  for (const auto& [key, value] : j.items())
    if (!ok.count(key)) invalid(where, fmt::format("unknown field '{}'", key));
}

void check_header(const json& doc, std::string_view kind) {
  expect_object(doc, "spec");
  if (!doc.contains("schema_version") || !doc.at("schema_version").is_number_integer())
    invalid("spec", "field 'schema_version' (integer) is required");
  if (doc.at("schema_version").get<int>() != kSpecSchemaVersion)
    invalid("spec", fmt::format("schema_version {} is not supported (expected {})",
                                doc.at("schema_version").get<int>(), kSpecSchemaVersion));
  if (!doc.contains("kind") || !doc.at("kind").is_string())
    invalid("spec", "field 'kind' (string) is required");
  if (doc.at("kind").get<std::string>() != kind)
    invalid("spec", fmt::format("kind is '{}' but this command expects '{}'",
                                doc.at("kind").get<std::string>(), kind));
}

double get_number(const json& j, const char* key, const std::string& where) {
  if (!j.at(key).is_number()) throw Error(ErrorKind::parse, fmt::format("{}: '{}' must be a number", where, key));
  return j.at(key).get<double>();
}

int get_int(const json& j, const char* key, const std::string& where) {
  if (!j.at(key).is_number_integer())
    throw Error(ErrorKind::parse, fmt::format("{}: '{}' must be an integer", where, key));
  return j.at(key).get<int>();
}

std::string get_string(const json& j, const char* key, const std::string& where) {
  if (!j.at(key).is_string()) throw Error(ErrorKind::parse, fmt::format("{}: '{}' must be a string", where, key));
  return j.at(key).get<std::string>();
}

template <typename T>
void read_opt(const json& j, const char* key, const std::string& where, std::optional<T>& out) {
  if (!j.contains(key)) return;
  if constexpr (std::is_same_v<T, std::string>)
    out = get_string(j, key, where);
  else
    out = get_number(j, key, where);
}

void read_num(const json& j, const char* key, const std::string& where, double& out) {
  if (j.contains(key)) out = get_number(j, key, where);
}

std::vector<double> number_list(const json& j, const char* key, const std::string& where) {
  const auto& v = j.at(key);
  if (!v.is_array()) throw Error(ErrorKind::parse, fmt::format("{}: '{}' must be an array", where, key));
  std::vector<double> out;
  for (const auto& x : v) {
    if (!x.is_number()) throw Error(ErrorKind::parse, fmt::format("{}: '{}' entries must be numbers", where, key));
    out.push_back(x.get<double>());
  }
  return out;
}

std::vector<int> int_list(const json& j, const char* key, const std::string& where) {
  const auto& v = j.at(key);
  if (!v.is_array()) throw Error(ErrorKind::parse, fmt::format("{}: '{}' must be an array", where, key));
  std::vector<int> out;
  for (const auto& x : v) {
    if (!x.is_number_integer())
      throw Error(ErrorKind::parse, fmt::format("{}: '{}' entries must be integers", where, key));
    out.push_back(x.get<int>());
  }
  return out;
}

std::vector<std::string> string_list(const json& j, const char* key, const std::string& where) {
  const auto& v = j.at(key);
  if (!v.is_array()) throw Error(ErrorKind::parse, fmt::format("{}: '{}' must be an array", where, key));
  std::vector<std::string> out;
  for (const auto& x : v) {
    if (!x.is_string()) throw Error(ErrorKind::parse, fmt::format("{}: '{}' entries must be strings", where, key));
    out.push_back(x.get<std::string>());
  }
  return out;
}

std::vector<Integration> integration_list(const json& j, const char* key, const std::string& where) {
  std::vector<Integration> out;
  for (const auto& s : string_list(j, key, where)) out.push_back(parse_integration(s));
  return out;
}

json integration_list_json(const std::vector<Integration>& list) {
  json out = json::array();
  for (auto i : list) out.push_back(std::string(to_string(i)));
  return out;
}

HbmConfig parse_hbm(const json& j, const std::string& where) {
  check_keys(j, where, {"stacks", "footprint_mm2", "signal_bits", "stack_cost"});
  HbmConfig h;
  if (j.contains("stacks")) h.stacks = get_int(j, "stacks", where);
  read_opt(j, "footprint_mm2", where, h.footprint_mm2);
  read_opt(j, "signal_bits", where, h.signal_bits);
  read_num(j, "stack_cost", where, h.stack_cost);
  if (h.stacks < 0) invalid(where, "'stacks' must be >= 0");
  if (h.footprint_mm2 && !(*h.footprint_mm2 > 0.0)) invalid(where, "'footprint_mm2' must be > 0");
  if (h.signal_bits && !(*h.signal_bits > 0.0)) invalid(where, "'signal_bits' must be > 0");
  if (!(h.stack_cost >= 0.0)) invalid(where, "'stack_cost' must be >= 0");
  return h;
}

json hbm_json(const HbmConfig& h) {
  json j = {{"stacks", h.stacks}, {"stack_cost", h.stack_cost}};
  if (h.footprint_mm2) j["footprint_mm2"] = *h.footprint_mm2;
  if (h.signal_bits) j["signal_bits"] = *h.signal_bits;
  return j;
}

DieSpec parse_die(const json& j, const std::string& where) {
  check_keys(j, where, {"name", "node", "transistors_billion", "area_mm2", "io_fraction",
                        "signal_pins", "d2d_signals"});
  DieSpec d;
  if (!j.contains("name")) invalid(where, "field 'name' is required");
  if (!j.contains("node")) invalid(where, "field 'node' is required");
  d.name = get_string(j, "name", where);
  d.node = get_string(j, "node", where);
  read_opt(j, "transistors_billion", where, d.transistors_billion);
  read_opt(j, "area_mm2", where, d.area_mm2);
  read_num(j, "io_fraction", where, d.io_fraction);
  read_num(j, "signal_pins", where, d.signal_pins);
  read_num(j, "d2d_signals", where, d.d2d_signals);
  if (!d.transistors_billion && !d.area_mm2)
    invalid(where, "one of 'transistors_billion' or 'area_mm2' is required");
  if (!(d.io_fraction >= 0.0 && d.io_fraction < 1.0)) invalid(where, "'io_fraction' must be in [0, 1)");
  if (!(d.signal_pins >= 0.0)) invalid(where, "'signal_pins' must be >= 0");
  if (!(d.d2d_signals >= 0.0)) invalid(where, "'d2d_signals' must be >= 0");
  return d;
}

json die_json(const DieSpec& d) {
  json j = {{"name", d.name}, {"node", d.node}, {"io_fraction", d.io_fraction},
            {"signal_pins", d.signal_pins}, {"d2d_signals", d.d2d_signals}};
  if (d.transistors_billion) j["transistors_billion"] = *d.transistors_billion;
  if (d.area_mm2) j["area_mm2"] = *d.area_mm2;
  return j;
}

template <typename T>
void put_opt(json& j, const char* key, const std::optional<T>& v) {
  if (v) j[key] = *v;
}

}  // namespace

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::io, fmt::format("cannot open '{}'", path.string()));
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::parse, fmt::format("{}: {}", path.string(), e.what()));
  }
}

SystemSpec parse_system_spec(const json& doc) {
  check_header(doc, "system");
  const std::string where = "system spec";
  check_keys(doc, where, {"schema_version", "kind", "name", "integration", "dies", "hbm",
                          "bump_tech", "interposer_node", "panel", "package_class",
                          "floorplan_overhead"});
  SystemSpec sys;
  if (doc.contains("name")) sys.name = get_string(doc, "name", where);
  if (!doc.contains("integration")) invalid(where, "field 'integration' is required");
  sys.integration = parse_integration(get_string(doc, "integration", where));
  if (!doc.contains("dies") || !doc.at("dies").is_array() || doc.at("dies").empty())
    invalid(where, "field 'dies' must be a non-empty array");
  const auto& dies = doc.at("dies");
  for (std::size_t i = 0; i < dies.size(); ++i)
    sys.dies.push_back(parse_die(dies[i], fmt::format("{}: dies[{}]", where, i)));
  if (doc.contains("hbm")) sys.hbm = parse_hbm(doc.at("hbm"), where + ": hbm");
  read_opt(doc, "bump_tech", where, sys.bump_tech);
  read_opt(doc, "interposer_node", where, sys.interposer_node);
  read_opt(doc, "panel", where, sys.panel);
  read_opt(doc, "package_class", where, sys.package_class);
  read_opt(doc, "floorplan_overhead", where, sys.floorplan_overhead);
  if (sys.floorplan_overhead && !(*sys.floorplan_overhead >= 0.0))
    invalid(where, "'floorplan_overhead' must be >= 0");
  return sys;
}

json to_json(const SystemSpec& sys) {
  json dies = json::array();
  for (const auto& d : sys.dies) dies.push_back(die_json(d));
  json j = {{"schema_version", kSpecSchemaVersion},
            {"kind", "system"},
            {"name", sys.name},
            {"integration", std::string(to_string(sys.integration))},
            {"dies", std::move(dies)},
            {"hbm", hbm_json(sys.hbm)}};
  put_opt(j, "bump_tech", sys.bump_tech);
  put_opt(j, "interposer_node", sys.interposer_node);
  put_opt(j, "panel", sys.panel);
  put_opt(j, "package_class", sys.package_class);
  put_opt(j, "floorplan_overhead", sys.floorplan_overhead);
  return j;
}

SweepSpec parse_sweep_spec(const json& doc) {
  check_header(doc, "sweep");
  const std::string where = "sweep spec";
  check_keys(doc, where, {"schema_version", "kind", "scale", "io_fractions", "die_counts",
                          "node_pairs", "integrations", "fixed", "max_points", "columns"});
  SweepSpec s;
  if (!doc.contains("scale")) invalid(where, "field 'scale' is required");
  const auto& scale = doc.at("scale");
  check_keys(scale, where + ": scale", {"unit", "values"});
  if (!scale.contains("unit") || !scale.contains("values"))
    invalid(where + ": scale", "needs 'unit' and 'values'");
  const auto unit = get_string(scale, "unit", where + ": scale");
  if (unit == "transistors_billion")
    s.unit = ScaleUnit::transistors_billion;
  else if (unit == "area_mm2")
    s.unit = ScaleUnit::area_mm2;
  else
    invalid(where + ": scale", fmt::format("unknown unit '{}' (transistors_billion or area_mm2)", unit));
  s.scales = number_list(scale, "values", where + ": scale");
  if (doc.contains("io_fractions")) s.io_fractions = number_list(doc, "io_fractions", where);
  if (doc.contains("die_counts")) s.die_counts = int_list(doc, "die_counts", where);
  if (!doc.contains("node_pairs")) invalid(where, "field 'node_pairs' is required");
  const auto& pairs = doc.at("node_pairs");
  if (!pairs.is_array()) throw Error(ErrorKind::parse, where + ": 'node_pairs' must be an array");
  for (const auto& p : pairs) {
    if (p.is_string()) {
      s.node_pairs.push_back({p.get<std::string>(), p.get<std::string>()});
    } else if (p.is_array() && p.size() == 2 && p[0].is_string() && p[1].is_string()) {
      s.node_pairs.push_back({p[0].get<std::string>(), p[1].get<std::string>()});
    } else {
      throw Error(ErrorKind::parse,
                  where + ": node_pairs entries are \"node\" or [\"core_node\", \"io_node\"]");
    }
  }
  if (doc.contains("integrations")) s.integrations = integration_list(doc, "integrations", where);
  if (doc.contains("fixed")) {
    const auto& f = doc.at("fixed");
    const std::string fw = where + ": fixed";
    check_keys(f, fw, {"hbm", "package_class", "bump_tech", "floorplan_overhead", "signal_pins",
                       "d2d_signals_per_die"});
    if (f.contains("hbm")) s.fixed.hbm = parse_hbm(f.at("hbm"), fw + ": hbm");
    read_opt(f, "package_class", fw, s.fixed.package_class);
    read_opt(f, "bump_tech", fw, s.fixed.bump_tech);
    read_opt(f, "floorplan_overhead", fw, s.fixed.floorplan_overhead);
    read_num(f, "signal_pins", fw, s.fixed.signal_pins);
    read_num(f, "d2d_signals_per_die", fw, s.fixed.d2d_signals_per_die);
  }
  if (doc.contains("max_points")) {
    if (!doc.at("max_points").is_number_unsigned() || doc.at("max_points").get<std::size_t>() == 0)
      invalid(where, "'max_points' must be a positive integer");
    s.max_points = doc.at("max_points").get<std::size_t>();
  }
  if (doc.contains("columns")) s.columns = string_list(doc, "columns", where);
  validate_sweep(s);
  return s;
}

json to_json(const SweepSpec& s) {
  json pairs = json::array();
  for (const auto& p : s.node_pairs) pairs.push_back(json::array({p.core, p.io}));
  json fixed = {{"hbm", hbm_json(s.fixed.hbm)},
                {"signal_pins", s.fixed.signal_pins},
                {"d2d_signals_per_die", s.fixed.d2d_signals_per_die}};
  put_opt(fixed, "package_class", s.fixed.package_class);
  put_opt(fixed, "bump_tech", s.fixed.bump_tech);
  put_opt(fixed, "floorplan_overhead", s.fixed.floorplan_overhead);
  return {{"schema_version", kSpecSchemaVersion},
          {"kind", "sweep"},
          {"scale",
           {{"unit", s.unit == ScaleUnit::transistors_billion ? "transistors_billion" : "area_mm2"},
            {"values", s.scales}}},
          {"io_fractions", s.io_fractions},
          {"die_counts", s.die_counts},
          {"node_pairs", std::move(pairs)},
          {"integrations", integration_list_json(s.integrations)},
          {"fixed", std::move(fixed)},
          {"max_points", s.max_points},
          {"columns", s.columns}};
}

SwitchpointSpec parse_switchpoint_spec(const json& doc) {
  check_header(doc, "switchpoint");
  const std::string where = "switchpoint spec";
  check_keys(doc, where, {"schema_version", "kind", "nodes", "integrations", "partition", "search"});
  SwitchpointSpec s;
  if (doc.contains("nodes")) s.nodes = string_list(doc, "nodes", where);
  if (doc.contains("integrations")) s.integrations = integration_list(doc, "integrations", where);
  if (doc.contains("partition")) {
    const auto& p = doc.at("partition");
    const std::string pw = where + ": partition";
    check_keys(p, pw, {"rule", "count", "max_die_area"});
    const auto rule = p.contains("rule") ? get_string(p, "rule", pw) : std::string("equal_split");
    if (rule == "equal_split")
      s.rule.kind = PartitionRule::Kind::equal_split;
    else if (rule == "max_die_area")
      s.rule.kind = PartitionRule::Kind::max_die_area;
    else
      invalid(pw, fmt::format("unknown rule '{}' (equal_split or max_die_area)", rule));
    if (p.contains("count")) s.rule.count = get_int(p, "count", pw);
    read_num(p, "max_die_area", pw, s.rule.max_die_area);
  }
  if (doc.contains("search")) {
    const auto& q = doc.at("search");
    const std::string qw = where + ": search";
    check_keys(q, qw, {"min_area", "max_area", "samples", "signal_pins", "package_class"});
    read_num(q, "min_area", qw, s.search.min_area);
    read_num(q, "max_area", qw, s.search.max_area);
    if (q.contains("samples")) s.search.samples = get_int(q, "samples", qw);
    read_num(q, "signal_pins", qw, s.search.signal_pins);
    read_opt(q, "package_class", qw, s.search.package_class);
  }
  if (s.nodes.empty()) invalid(where, "'nodes' must not be empty");
  if (s.integrations.empty()) invalid(where, "'integrations' must not be empty");
  return s;
}

json to_json(const SwitchpointSpec& s) {
  json partition = {{"rule", s.rule.kind == PartitionRule::Kind::equal_split ? "equal_split"
                                                                              : "max_die_area"}};
  if (s.rule.kind == PartitionRule::Kind::equal_split)
    partition["count"] = s.rule.count;
  else
    partition["max_die_area"] = s.rule.max_die_area;
  json search = {{"min_area", s.search.min_area},
                 {"max_area", s.search.max_area},
                 {"samples", s.search.samples},
                 {"signal_pins", s.search.signal_pins}};
  put_opt(search, "package_class", s.search.package_class);
  return {{"schema_version", kSpecSchemaVersion},
          {"kind", "switchpoint"},
          {"nodes", s.nodes},
          {"integrations", integration_list_json(s.integrations)},
          {"partition", std::move(partition)},
          {"search", std::move(search)}};
}

HbmStudyConfig parse_hbm_study(const json& doc) {
  check_header(doc, "casestudy_hbm");
  const std::string where = "hbm case study spec";
  check_keys(doc, where, {"schema_version", "kind", "scales", "node", "hbm_stacks", "stack_cost",
                          "signal_pins", "package_class"});
  HbmStudyConfig c;
  if (doc.contains("scales")) c.scales = number_list(doc, "scales", where);
  if (doc.contains("node")) c.node = get_string(doc, "node", where);
  if (doc.contains("hbm_stacks")) c.hbm_stacks = get_int(doc, "hbm_stacks", where);
  read_num(doc, "stack_cost", where, c.stack_cost);
  read_num(doc, "signal_pins", where, c.signal_pins);
  read_opt(doc, "package_class", where, c.package_class);
  if (c.scales.empty()) invalid(where, "'scales' must not be empty");
  for (double s : c.scales)
    if (!(s > 0.0)) invalid(where, fmt::format("scale {} must be > 0", s));
  if (c.hbm_stacks < 0) invalid(where, "'hbm_stacks' must be >= 0");
  return c;
}

json to_json(const HbmStudyConfig& c) {
  json j = {{"schema_version", kSpecSchemaVersion},
            {"kind", "casestudy_hbm"},
            {"scales", c.scales},
            {"node", c.node},
            {"hbm_stacks", c.hbm_stacks},
            {"stack_cost", c.stack_cost},
            {"signal_pins", c.signal_pins}};
  put_opt(j, "package_class", c.package_class);
  return j;
}

HybridStudyConfig parse_hybrid_study(const json& doc) {
  check_header(doc, "casestudy_hybrid");
  const std::string where = "hybrid case study spec";
  check_keys(doc, where, {"schema_version", "kind", "scales_billion", "io_fractions",
                          "core_die_counts", "core_node", "io_node", "integration", "signal_pins",
                          "package_class"});
  HybridStudyConfig c;
  if (doc.contains("scales_billion")) c.scales_billion = number_list(doc, "scales_billion", where);
  if (doc.contains("io_fractions")) c.io_fractions = number_list(doc, "io_fractions", where);
  if (doc.contains("core_die_counts")) c.core_die_counts = int_list(doc, "core_die_counts", where);
  if (doc.contains("core_node")) c.core_node = get_string(doc, "core_node", where);
  if (doc.contains("io_node")) c.io_node = get_string(doc, "io_node", where);
  if (doc.contains("integration"))
    c.integration = parse_integration(get_string(doc, "integration", where));
  read_num(doc, "signal_pins", where, c.signal_pins);
  read_opt(doc, "package_class", where, c.package_class);
  for (double s : c.scales_billion)
    if (!(s > 0.0)) invalid(where, fmt::format("scale {} must be > 0", s));
  for (double f : c.io_fractions)
    if (!(f > 0.0 && f < 1.0)) invalid(where, fmt::format("io_fraction {} must be in (0, 1)", f));
  return c;
}

json to_json(const HybridStudyConfig& c) {
  json j = {{"schema_version", kSpecSchemaVersion},
            {"kind", "casestudy_hybrid"},
            {"scales_billion", c.scales_billion},
            {"io_fractions", c.io_fractions},
            {"core_die_counts", c.core_die_counts},
            {"core_node", c.core_node},
            {"io_node", c.io_node},
            {"integration", std::string(to_string(c.integration))},
            {"signal_pins", c.signal_pins}};
  put_opt(j, "package_class", c.package_class);
  return j;
}

}  // namespace chipcost
