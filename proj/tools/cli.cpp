#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "chipcost/error.hpp"
#include "chipcost/explorer.hpp"
#include "chipcost/report_io.hpp"
#include "chipcost/spec_io.hpp"
#include "chipcost/techdb.hpp"

namespace chipcost::cli {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct RunConfig {
  std::string dataset;
  std::string format = "table";
  std::string output;
  std::string plot_data;
  bool bond_yield_from_first_die = false;
  std::optional<std::size_t> max_points;
  std::string spec_path;
};

int exit_code_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::io: return kIo;
    case ErrorKind::parse: return kParse;
    case ErrorKind::validation:
    case ErrorKind::not_found: return kValidation;
    case ErrorKind::domain:
    case ErrorKind::model: return kModel;
    case ErrorKind::limit: return kLimit;
  }
  return kModel;
}

void write_file(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(ErrorKind::io, fmt::format("cannot write '{}'", path.string()));
  f << content;
  if (!f) throw Error(ErrorKind::io, fmt::format("write to '{}' failed", path.string()));
}

class Session {
 public:
  Session(const RunConfig& cfg, std::ostream& out, std::ostream& err)
      : cfg_(cfg), out_(out), err_(err) {}

  int cost();
  int sweep();
  int switchpoint();
  int casestudy_hbm();
  int casestudy_hybrid();
  int dataset_validate();

 private:
  fs::path dataset_path() const {
    return cfg_.dataset.empty() ? default_dataset_path() : fs::path(cfg_.dataset);
  }

  const TechDatabase& db() {
    if (!db_) db_ = load_dataset(dataset_path());
    return *db_;
  }

  ModelOptions options() const { return {cfg_.bond_yield_from_first_die}; }

  Provenance provenance(std::string command, json spec) {
    Provenance p;
    p.command = std::move(command);
    p.dataset_version = db().version();
    p.dataset_path = dataset_path().string();
    p.config = {{"spec", std::move(spec)},
                {"options",
                 {{"bond_yield_from_first_die", cfg_.bond_yield_from_first_die},
                  {"format", cfg_.format}}}};
    return p;
  }

  json spec_doc(bool required) const {
    if (cfg_.spec_path.empty()) {
      if (required) throw Error(ErrorKind::validation, "a spec file is required");
      return json();
    }
    return read_json_file(cfg_.spec_path);
  }

  void emit(const std::string& content) {
    if (cfg_.output.empty())
      out_ << content;
    else
      write_file(cfg_.output, content);
  }

  void plot(const std::string& name, const TextTable& table, const Provenance& prov) {
    if (cfg_.plot_data.empty()) return;
    write_file(fs::path(cfg_.plot_data) / name, render_csv(table, prov));
  }

  void plot_package(const Provenance& prov) {
    if (cfg_.plot_data.empty()) return;
    const Evaluator evaluator(db(), options());
    plot("fig1_package_cost.csv", plot_package_regression(db(), evaluator), prov);
  }

  void warn_dataset() {
    for (const auto& w : db().warnings()) err_ << "warning: " << w << '\n';
  }

  const RunConfig& cfg_;
  std::ostream& out_;
  std::ostream& err_;
  std::optional<TechDatabase> db_;
};

int Session::cost() {
  const auto sys = parse_system_spec(spec_doc(true));
  warn_dataset();
  const auto report = evaluate_system(sys, db(), options());
  const auto prov = provenance("cost", to_json(sys));
  if (report.package.extrapolated)
    err_ << "warning: package (area, pins) lies outside the sample range of class '"
         << report.package.package_class << "'\n";
  emit(render(parse_output_format(cfg_.format), report_to_json(report), report_table(report), prov));
  plot_package(prov);
  return kOk;
}

int Session::sweep() {
  auto spec = parse_sweep_spec(spec_doc(true));
  if (cfg_.max_points) spec.max_points = *cfg_.max_points;
  warn_dataset();
  const auto rows = run_sweep(spec, db(), options(), Execution::parallel);
  std::size_t failed = 0;
  for (const auto& r : rows)
    if (!r.result.ok()) ++failed;
  if (failed) err_ << failed << " of " << rows.size() << " sweep points failed; see error column\n";
  const auto prov = provenance("sweep", to_json(spec));
  emit(render(parse_output_format(cfg_.format), sweep_to_json(rows, spec), sweep_table(rows, spec), prov));
  plot("sweep_cost_components.csv", plot_sweep(rows), prov);
  plot_package(prov);
  return kOk;
}

int Session::switchpoint() {
  const auto doc = spec_doc(false);
  const auto spec = doc.is_null() ? SwitchpointSpec{} : parse_switchpoint_spec(doc);
  warn_dataset();
  for (const auto& n : spec.nodes) db().node(n);
  const auto rows = find_switching_points(spec.nodes, spec.integrations, spec.rule, db(),
                                          spec.search, options(), Execution::parallel);
  for (const auto& r : rows)
    if (!r.point) err_ << "switchpoint " << r.node << "/" << to_string(r.integration) << ": " << r.error << '\n';
  const auto prov = provenance("switchpoint", to_json(spec));
  emit(render(parse_output_format(cfg_.format), switchpoints_to_json(rows), switchpoints_table(rows), prov));
  plot("table1_switching_points.csv", plot_switchpoints(rows), prov);
  plot_package(prov);
  return kOk;
}

int Session::casestudy_hbm() {
  const auto doc = spec_doc(false);
  const auto config = doc.is_null() ? HbmStudyConfig{} : parse_hbm_study(doc);
  warn_dataset();
  const auto result = case_study_hbm(config, db(), options(), Execution::parallel);
  const auto prov = provenance("casestudy hbm", to_json(config));
  emit(render(parse_output_format(cfg_.format), hbm_study_to_json(result), hbm_study_table(result),
              prov, hbm_study_notes(result)));
  plot("fig2_hbm_overhead.csv", plot_hbm_overhead(result), prov);
  plot_package(prov);
  return kOk;
}

int Session::casestudy_hybrid() {
  const auto doc = spec_doc(false);
  const auto config = doc.is_null() ? HybridStudyConfig{} : parse_hybrid_study(doc);
  warn_dataset();
  const auto rows = case_study_hybrid(config, db(), options(), Execution::parallel);
  const auto prov = provenance("casestudy hybrid", to_json(config));
  emit(render(parse_output_format(cfg_.format), hybrid_study_to_json(rows), hybrid_study_table(rows), prov));
  plot("fig3_hybrid_cost.csv", plot_hybrid_costs(rows), prov);
  plot_package(prov);
  return kOk;
}

int Session::dataset_validate() {
  const auto& database = db();
  warn_dataset();
  json summary = {{"valid", true},
                  {"nodes", database.node_names()},
                  {"panels", database.panels().size()},
                  {"bump_techs", database.bumps().size()},
                  {"package_classes", database.package_classes().size()},
                  {"warnings", std::vector<std::string>(database.warnings().begin(),
                                                        database.warnings().end())}};
  TextTable t;
  t.header = {"table", "records"};
  t.rows = {{"nodes", std::to_string(database.nodes().size())},
            {"panels", std::to_string(database.panels().size())},
            {"bump_techs", std::to_string(database.bumps().size())},
            {"package_classes", std::to_string(database.package_classes().size())},
            {"warnings", std::to_string(database.warnings().size())}};
  const auto prov = provenance("dataset validate", json::object());
  emit(render(parse_output_format(cfg_.format), summary, t, prov));
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"Cost model and design-space explorer for 2.5D chiplet systems", "chipcost"};
  app.require_subcommand(1);
  app.option_defaults()->always_capture_default();
  app.add_option("--dataset", cfg.dataset, "Dataset file (default: $CHIPCOST_DATASET or the bundled dataset)");
  app.add_option("--format", cfg.format, "Output format")->check(CLI::IsMember({"json", "csv", "table"}));
  app.add_option("--output,-o", cfg.output, "Write data to this file instead of stdout");
  app.add_option("--plot-data", cfg.plot_data, "Directory for long-format plot data files");
  app.add_flag("--bond-yield-from-first-die", cfg.bond_yield_from_first_die,
               "Include the first die in the bond-yield product");
  app.add_option("--max-points", cfg.max_points, "Cap on sweep cross-product size")->check(CLI::PositiveNumber);

  auto* cost = app.add_subcommand("cost", "Cost one system");
  cost->add_option("spec", cfg.spec_path, "System spec file")->required();
  auto* sweep = app.add_subcommand("sweep", "Evaluate a cross-product sweep");
  sweep->add_option("spec", cfg.spec_path, "Sweep spec file")->required();
  auto* sw = app.add_subcommand("switchpoint", "Monolithic vs chiplet switching points");
  sw->add_option("spec", cfg.spec_path, "Switchpoint spec file (defaults when omitted)");
  auto* cs = app.add_subcommand("casestudy", "Run a case study");
  cs->require_subcommand(1);
  auto* hbm = cs->add_subcommand("hbm", "HBM integration overhead");
  hbm->add_option("spec", cfg.spec_path, "Case study spec file (defaults when omitted)");
  auto* hybrid = cs->add_subcommand("hybrid", "Hybrid-node logic/I/O partitioning");
  hybrid->add_option("spec", cfg.spec_path, "Case study spec file (defaults when omitted)");
  auto* ds = app.add_subcommand("dataset", "Dataset utilities");
  ds->require_subcommand(1);
  auto* validate = ds->add_subcommand("validate", "Load and validate a dataset");
  validate->add_option("path", cfg.dataset, "Dataset file (overrides --dataset)");
  for (auto* sub : {cost, sweep, sw, hbm, hybrid, validate}) sub->fallthrough();
  cs->fallthrough();
  ds->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }

  Session session(cfg, out, err);
  try {
    if (cost->parsed()) return session.cost();
    if (sweep->parsed()) return session.sweep();
    if (sw->parsed()) return session.switchpoint();
    if (hbm->parsed()) return session.casestudy_hbm();
    if (hybrid->parsed()) return session.casestudy_hybrid();
    if (validate->parsed()) return session.dataset_validate();
  } catch (const Error& e) {
    err << "error [" << to_string(e.kind()) << "]: " << e.what() << '\n';
    return exit_code_for(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kModel;
  }
  err << "error: no command given\n";
  return kUsage;
}

}  // namespace chipcost::cli
