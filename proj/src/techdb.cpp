#include "chipcost/techdb.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdlib>
#include <fstream>
#include <set>

#include <fmt/format.h>

#include "chipcost/error.hpp"

namespace chipcost {

using nlohmann::json;

std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::io: return "io";
    case ErrorKind::parse: return "parse";
    case ErrorKind::validation: return "validation";
    case ErrorKind::not_found: return "not-found";
    case ErrorKind::domain: return "domain";
    case ErrorKind::model: return "model";
    case ErrorKind::limit: return "limit";
  }
  return "unknown";
}

std::string_view to_string(Integration integration) {
  switch (integration) {
    case Integration::silicon_2p5d: return "silicon_2.5d";
    case Integration::organic_2p5d: return "organic_2.5d";
    case Integration::mcm: return "mcm";
  }
  return "unknown";
}

Integration parse_integration(std::string_view text) {
  if (text == "silicon_2.5d") return Integration::silicon_2p5d;
  if (text == "organic_2.5d") return Integration::organic_2p5d;
  if (text == "mcm") return Integration::mcm;
  throw Error(ErrorKind::validation,
              fmt::format("unknown integration '{}' (expected silicon_2.5d, "
                          "organic_2.5d or mcm)",
                          text));
}

std::string_view to_string(InterposerKind kind) {
  switch (kind) {
    case InterposerKind::silicon: return "silicon";
    case InterposerKind::organic: return "organic";
    case InterposerKind::none: return "none";
  }
  return "unknown";
}

InterposerKind interposer_kind_for(Integration integration) {
  switch (integration) {
    case Integration::silicon_2p5d: return InterposerKind::silicon;
    case Integration::organic_2p5d: return InterposerKind::organic;
    case Integration::mcm: return InterposerKind::none;
  }
  return InterposerKind::none;
}

const std::string& ModelDefaults::bump_for(Integration integration) const {
  switch (integration) {
    case Integration::silicon_2p5d: return bump_silicon;
    case Integration::organic_2p5d: return bump_organic;
    case Integration::mcm: return bump_mcm;
  }
  return bump_mcm;
}

double feature_size_nm(std::string_view node_name) {
  auto pos = node_name.find("nm");
  if (pos == std::string_view::npos || pos == 0) return -1.0;
  double value = -1.0;
  auto [ptr, ec] = std::from_chars(node_name.data(), node_name.data() + pos, value);
  if (ec != std::errc() || ptr != node_name.data() + pos) return -1.0;
  return value;
}

namespace {

// Field access on one dataset record; every failure names the record and field.
class RecordReader {
 public:
  RecordReader(const json& obj, std::string context)
      : obj_(obj), context_(std::move(context)) {
    if (!obj_.is_object()) fail_parse("expected an object");
  }

  const std::string& context() const { return context_; }

  bool has(const char* field) const { return obj_.contains(field); }

  double number(const char* field) const {
    if (!obj_.contains(field)) fail(field, "is required");
    const auto& v = obj_.at(field);
    if (!v.is_number()) fail_parse(fmt::format("field '{}' must be a number", field));
    return v.get<double>();
  }

  double number_or(const char* field, double fallback) const {
    return obj_.contains(field) ? number(field) : fallback;
  }

  int integer(const char* field) const {
    if (!obj_.contains(field)) fail(field, "is required");
    const auto& v = obj_.at(field);
    if (!v.is_number_integer())
      fail_parse(fmt::format("field '{}' must be an integer", field));
    return v.get<int>();
  }

  std::string text(const char* field) const {
    if (!obj_.contains(field)) fail(field, "is required");
    const auto& v = obj_.at(field);
    if (!v.is_string()) fail_parse(fmt::format("field '{}' must be a string", field));
    return v.get<std::string>();
  }

  std::string text_or(const char* field, std::string fallback) const {
    return obj_.contains(field) ? text(field) : std::move(fallback);
  }

  std::map<int, double> layer_costs(const char* field) const {
    std::map<int, double> out;
    if (!obj_.contains(field)) return out;
    const auto& v = obj_.at(field);
    if (!v.is_object())
      fail_parse(fmt::format("field '{}' must map layer counts to costs", field));
    for (const auto& [key, cost] : v.items()) {
      int layers = 0;
      auto [ptr, ec] = std::from_chars(key.data(), key.data() + key.size(), layers);
      if (ec != std::errc() || ptr != key.data() + key.size() || layers <= 0)
        fail(field, fmt::format("key '{}' is not a positive layer count", key));
      if (!cost.is_number() || cost.get<double>() <= 0.0)
        fail(field, fmt::format("cost for {} layers must be a positive number", layers));
      out.emplace(layers, cost.get<double>());
    }
    return out;
  }

  void require_positive(const char* field, double value) const {
    if (!(value > 0.0)) fail(field, fmt::format("must be > 0 (got {})", value));
  }
  void require_non_negative(const char* field, double value) const {
    if (!(value >= 0.0)) fail(field, fmt::format("must be >= 0 (got {})", value));
  }
  void require_fraction(const char* field, double value) const {
    if (!(value > 0.0 && value <= 1.0))
      fail(field, fmt::format("must be in (0, 1] (got {})", value));
  }

  [[noreturn]] void fail(const char* field, const std::string& reason) const {
    throw Error(ErrorKind::validation,
                fmt::format("{}: field '{}' {}", context_, field, reason));
  }
  [[noreturn]] void fail_parse(const std::string& reason) const {
    throw Error(ErrorKind::parse, fmt::format("{}: {}", context_, reason));
  }

 private:
  const json& obj_;
  std::string context_;
};

const json& array_field(const json& doc, const char* field, std::string_view origin) {
  if (!doc.contains(field))
    throw Error(ErrorKind::validation,
                fmt::format("{}: missing top-level field '{}'", origin, field));
  const auto& v = doc.at(field);
  if (!v.is_array())
    throw Error(ErrorKind::parse,
                fmt::format("{}: top-level field '{}' must be an array", origin, field));
  return v;
}

std::string record_context(std::string_view origin, const char* table, std::size_t index,
                           const json& rec) {
  if (rec.is_object() && rec.contains("name") && rec.at("name").is_string())
    return fmt::format("{}: {}[{}] '{}'", origin, table, index,
                       rec.at("name").get<std::string>());
  return fmt::format("{}: {}[{}]", origin, table, index);
}

TechNode read_node(const RecordReader& r) {
  TechNode n;
  n.name = r.text("name");
  n.wafer_cost = r.number("wafer_cost");
  n.wafer_diameter = r.number("wafer_diameter");
  n.defect_density = r.number("defect_density");
  n.clustering_alpha = r.number("clustering_alpha");
  n.transistor_density = r.number("transistor_density");
  n.wafer_base_yield = r.number("wafer_base_yield");
  n.io_density_factor = r.number_or("io_density_factor", 1.0);
  n.routing_density = r.number_or("routing_density", 0.0);
  n.layer_wafer_costs = r.layer_costs("layer_wafer_costs");
  n.provenance = r.text_or("provenance", "");

  r.require_positive("wafer_cost", n.wafer_cost);
  r.require_positive("wafer_diameter", n.wafer_diameter);
  // Zero defect density is the perfect-yield limit and is accepted.
  r.require_non_negative("defect_density", n.defect_density);
  r.require_positive("clustering_alpha", n.clustering_alpha);
  r.require_positive("transistor_density", n.transistor_density);
  r.require_fraction("wafer_base_yield", n.wafer_base_yield);
  r.require_positive("io_density_factor", n.io_density_factor);
  r.require_non_negative("routing_density", n.routing_density);
  return n;
}

PanelSpec read_panel(const RecordReader& r) {
  PanelSpec p;
  p.name = r.text("name");
  p.panel_cost = r.number("panel_cost");
  p.panel_width = r.number("panel_width");
  p.panel_height = r.number("panel_height");
  p.panel_base_yield = r.number("panel_base_yield");
  p.defect_density = r.number("defect_density");
  p.clustering_alpha = r.number("clustering_alpha");
  p.routing_density = r.number_or("routing_density", 0.0);
  p.layer_panel_costs = r.layer_costs("layer_panel_costs");
  p.provenance = r.text_or("provenance", "");

  r.require_positive("panel_cost", p.panel_cost);
  r.require_positive("panel_width", p.panel_width);
  r.require_positive("panel_height", p.panel_height);
  r.require_fraction("panel_base_yield", p.panel_base_yield);
  r.require_non_negative("defect_density", p.defect_density);
  r.require_positive("clustering_alpha", p.clustering_alpha);
  r.require_non_negative("routing_density", p.routing_density);
  return p;
}

BumpTech read_bump(const RecordReader& r) {
  BumpTech b;
  b.name = r.text("name");
  b.pitch = r.number("pitch");
  b.bond_cost_per_die = r.number("bond_cost_per_die");
  b.bond_yield = r.number("bond_yield");
  b.provenance = r.text_or("provenance", "");

  r.require_positive("pitch", b.pitch);
  r.require_non_negative("bond_cost_per_die", b.bond_cost_per_die);
  r.require_fraction("bond_yield", b.bond_yield);
  return b;
}

// Rank test on the (area, pins) design: the centered 2x2 scatter matrix must
// be non-singular relative to its own scale.
bool samples_span_plane(const std::vector<PackageSample>& samples) {
  const double n = static_cast<double>(samples.size());
  double ma = 0.0, mp = 0.0;
  for (const auto& s : samples) {
    ma += s.substrate_area;
    mp += s.pin_count;
  }
  ma /= n;
  mp /= n;
  double saa = 0.0, spp = 0.0, sap = 0.0;
  for (const auto& s : samples) {
    const double da = s.substrate_area - ma;
    const double dp = s.pin_count - mp;
    saa += da * da;
    spp += dp * dp;
    sap += da * dp;
  }
  if (saa <= 0.0 || spp <= 0.0) return false;
  const double det = saa * spp - sap * sap;
  return det > 1e-10 * saa * spp;
}

PackageClass read_package_class(const RecordReader& r, const json& rec) {
  PackageClass c;
  c.name = r.text("name");
  c.core_layers = r.integer("core_layers");
  c.buildup_layers = r.integer("buildup_layers");
  c.provenance = r.text_or("provenance", "");
  if (c.core_layers <= 0) r.fail("core_layers", "must be > 0");
  if (c.buildup_layers <= 0) r.fail("buildup_layers", "must be > 0");

  if (!rec.contains("samples")) r.fail("samples", "is required");
  const auto& samples = rec.at("samples");
  if (!samples.is_array()) r.fail_parse("field 'samples' must be an array");
  for (const auto& s : samples) {
    if (!s.is_array() || s.size() != 3 || !s[0].is_number() || !s[1].is_number() ||
        !s[2].is_number())
      r.fail_parse("each sample must be [substrate_area, pin_count, cost]");
    PackageSample ps{s[0].get<double>(), s[1].get<double>(), s[2].get<double>()};
    if (!(ps.substrate_area > 0.0 && ps.pin_count > 0.0 && ps.cost >= 0.0))
      r.fail("samples", "area and pins must be > 0, cost >= 0");
    c.samples.push_back(ps);
  }
  if (c.samples.size() < 3)
    r.fail("samples", fmt::format("needs at least 3 points (got {})", c.samples.size()));
  if (!samples_span_plane(c.samples))
    r.fail("samples", "are collinear in (substrate_area, pin_count); regression is rank-deficient");
  return c;
}

json layer_costs_json(const std::map<int, double>& costs) {
  json out = json::object();
  for (const auto& [layers, cost] : costs) out[std::to_string(layers)] = cost;
  return out;
}

template <typename T>
const T& find_named(const std::vector<T>& records, std::string_view name, const char* what) {
  auto it = std::find_if(records.begin(), records.end(),
                         [&](const T& r) { return r.name == name; });
  if (it != records.end()) return *it;
  std::string available;
  for (const auto& r : records) {
    if (!available.empty()) available += ", ";
    available += r.name;
  }
  throw Error(ErrorKind::not_found,
              fmt::format("unknown {} '{}' (available: {})", what, name, available));
}

template <typename T>
void check_unique(const std::vector<T>& records, std::string_view origin, const char* table) {
  std::set<std::string> seen;
  for (const auto& r : records)
    if (!seen.insert(r.name).second)
      throw Error(ErrorKind::validation,
                  fmt::format("{}: {} has duplicate name '{}'", origin, table, r.name));
}

}  // namespace

TechDatabase TechDatabase::from_json(const json& doc, std::string_view origin) {
  if (!doc.is_object())
    throw Error(ErrorKind::parse, fmt::format("{}: dataset must be an object", origin));

  TechDatabase db;
  RecordReader top(doc, std::string(origin));
  const int schema = top.integer("schema_version");
  if (schema != kSchemaVersion)
    top.fail("schema_version",
             fmt::format("is {} but this build reads version {}", schema, kSchemaVersion));
  db.version_ = top.text("dataset_version");
  db.description_ = top.text_or("description", "");

  const auto& nodes = array_field(doc, "nodes", origin);
  for (std::size_t i = 0; i < nodes.size(); ++i)
    db.nodes_.push_back(read_node(RecordReader(nodes[i], record_context(origin, "nodes", i, nodes[i]))));
  const auto& panels = array_field(doc, "panels", origin);
  for (std::size_t i = 0; i < panels.size(); ++i)
    db.panels_.push_back(read_panel(RecordReader(panels[i], record_context(origin, "panels", i, panels[i]))));
  const auto& bumps = array_field(doc, "bump_techs", origin);
  for (std::size_t i = 0; i < bumps.size(); ++i)
    db.bumps_.push_back(read_bump(RecordReader(bumps[i], record_context(origin, "bump_techs", i, bumps[i]))));
  const auto& classes = array_field(doc, "package_classes", origin);
  for (std::size_t i = 0; i < classes.size(); ++i)
    db.classes_.push_back(read_package_class(
        RecordReader(classes[i], record_context(origin, "package_classes", i, classes[i])),
        classes[i]));

  check_unique(db.nodes_, origin, "nodes");
  check_unique(db.panels_, origin, "panels");
  check_unique(db.bumps_, origin, "bump_techs");
  check_unique(db.classes_, origin, "package_classes");

  if (!doc.contains("defaults"))
    throw Error(ErrorKind::validation, fmt::format("{}: missing top-level field 'defaults'", origin));
  RecordReader d(doc.at("defaults"), fmt::format("{}: defaults", origin));
  auto& def = db.defaults_;
  def.silicon_interposer_node = d.text("silicon_interposer_node");
  def.organic_panel = d.text("organic_panel");
  def.bump_silicon = d.text("bump_silicon");
  def.bump_organic = d.text("bump_organic");
  def.bump_mcm = d.text("bump_mcm");
  def.package_class = d.text("package_class");
  def.floorplan_overhead = d.number("floorplan_overhead");
  def.package_fanout = d.number("package_fanout");
  def.pg_ratio = d.number("pg_ratio");
  def.hbm_footprint = d.number_or("hbm_footprint", def.hbm_footprint);
  def.hbm_signal_bits = d.number_or("hbm_signal_bits", def.hbm_signal_bits);
  d.require_non_negative("floorplan_overhead", def.floorplan_overhead);
  d.require_positive("package_fanout", def.package_fanout);
  d.require_non_negative("pg_ratio", def.pg_ratio);
  d.require_positive("hbm_footprint", def.hbm_footprint);
  d.require_positive("hbm_signal_bits", def.hbm_signal_bits);

  // Defaults must resolve against the tables above.
  auto resolve = [&](const char* field, auto&& lookup) {
    try {
      lookup();
    } catch (const Error& e) {
      d.fail(field, e.what());
    }
  };
  resolve("silicon_interposer_node", [&] { db.node(def.silicon_interposer_node); });
  resolve("organic_panel", [&] { db.panel(def.organic_panel); });
  resolve("bump_silicon", [&] { db.bump(def.bump_silicon); });
  resolve("bump_organic", [&] { db.bump(def.bump_organic); });
  resolve("bump_mcm", [&] { db.bump(def.bump_mcm); });
  resolve("package_class", [&] { db.package_class(def.package_class); });

  // Density should fall as feature size grows; out-of-order nodes only warn.
  std::vector<const TechNode*> sized;
  for (const auto& n : db.nodes_)
    if (feature_size_nm(n.name) > 0.0) sized.push_back(&n);
  std::stable_sort(sized.begin(), sized.end(), [](const TechNode* a, const TechNode* b) {
    return feature_size_nm(a->name) < feature_size_nm(b->name);
  });
  for (std::size_t i = 1; i < sized.size(); ++i) {
    if (!(sized[i]->transistor_density < sized[i - 1]->transistor_density))
      db.warnings_.push_back(fmt::format(
          "node '{}' transistor_density {} is not below that of finer node '{}' ({})",
          sized[i]->name, sized[i]->transistor_density, sized[i - 1]->name,
          sized[i - 1]->transistor_density));
  }
  return db;
}

json TechDatabase::to_json() const {
  json doc;
  doc["schema_version"] = kSchemaVersion;
  doc["dataset_version"] = version_;
  doc["description"] = description_;
  json nodes = json::array();
  for (const auto& n : nodes_) {
    json j = {{"name", n.name},
              {"wafer_cost", n.wafer_cost},
              {"wafer_diameter", n.wafer_diameter},
              {"defect_density", n.defect_density},
              {"clustering_alpha", n.clustering_alpha},
              {"transistor_density", n.transistor_density},
              {"wafer_base_yield", n.wafer_base_yield},
              {"io_density_factor", n.io_density_factor},
              {"routing_density", n.routing_density},
              {"provenance", n.provenance}};
    if (!n.layer_wafer_costs.empty()) j["layer_wafer_costs"] = layer_costs_json(n.layer_wafer_costs);
    nodes.push_back(std::move(j));
  }
  doc["nodes"] = std::move(nodes);
  json panels = json::array();
  for (const auto& p : panels_) {
    json j = {{"name", p.name},
              {"panel_cost", p.panel_cost},
              {"panel_width", p.panel_width},
              {"panel_height", p.panel_height},
              {"panel_base_yield", p.panel_base_yield},
              {"defect_density", p.defect_density},
              {"clustering_alpha", p.clustering_alpha},
              {"routing_density", p.routing_density},
              {"provenance", p.provenance}};
    if (!p.layer_panel_costs.empty()) j["layer_panel_costs"] = layer_costs_json(p.layer_panel_costs);
    panels.push_back(std::move(j));
  }
  doc["panels"] = std::move(panels);
  json bumps = json::array();
  for (const auto& b : bumps_)
    bumps.push_back({{"name", b.name},
                     {"pitch", b.pitch},
                     {"bond_cost_per_die", b.bond_cost_per_die},
                     {"bond_yield", b.bond_yield},
                     {"provenance", b.provenance}});
  doc["bump_techs"] = std::move(bumps);
  json classes = json::array();
  for (const auto& c : classes_) {
    json samples = json::array();
    for (const auto& s : c.samples) samples.push_back({s.substrate_area, s.pin_count, s.cost});
    classes.push_back({{"name", c.name},
                       {"core_layers", c.core_layers},
                       {"buildup_layers", c.buildup_layers},
                       {"samples", std::move(samples)},
                       {"provenance", c.provenance}});
  }
  doc["package_classes"] = std::move(classes);
  doc["defaults"] = {{"silicon_interposer_node", defaults_.silicon_interposer_node},
                     {"organic_panel", defaults_.organic_panel},
                     {"bump_silicon", defaults_.bump_silicon},
                     {"bump_organic", defaults_.bump_organic},
                     {"bump_mcm", defaults_.bump_mcm},
                     {"package_class", defaults_.package_class},
                     {"floorplan_overhead", defaults_.floorplan_overhead},
                     {"package_fanout", defaults_.package_fanout},
                     {"pg_ratio", defaults_.pg_ratio},
                     {"hbm_footprint", defaults_.hbm_footprint},
                     {"hbm_signal_bits", defaults_.hbm_signal_bits}};
  return doc;
}

const TechNode& TechDatabase::node(std::string_view name) const {
  return find_named(nodes_, name, "technology node");
}
const PanelSpec& TechDatabase::panel(std::string_view name) const {
  return find_named(panels_, name, "panel");
}
const BumpTech& TechDatabase::bump(std::string_view name) const {
  return find_named(bumps_, name, "bump technology");
}
const PackageClass& TechDatabase::package_class(std::string_view name) const {
  return find_named(classes_, name, "package class");
}

std::vector<std::string> TechDatabase::node_names() const {
  std::vector<std::string> names;
  names.reserve(nodes_.size());
  for (const auto& n : nodes_) names.push_back(n.name);
  return names;
}

TechDatabase load_dataset(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in)
    throw Error(ErrorKind::io, fmt::format("cannot open dataset '{}'", path.string()));
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::parse, fmt::format("{}: {}", path.string(), e.what()));
  }
  return TechDatabase::from_json(doc, path.string());
}

std::filesystem::path default_dataset_path() {
  if (const char* env = std::getenv("CHIPCOST_DATASET"); env != nullptr && *env != '\0')
    return env;
  return CHIPCOST_DEFAULT_DATASET;
}

const TechNode& lookup_node(const TechDatabase& db, std::string_view name) {
  return db.node(name);
}

}  // namespace chipcost
