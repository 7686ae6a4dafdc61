#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run(std::vector<std::string> args) {
  args.insert(args.begin(), "chipcost");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = chipcost::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string spec(const char* name) { return std::string(CHIPCOST_SPECS_DIR "/") + name; }
std::string fixture(const char* name) { return std::string(CHIPCOST_TEST_DATA_DIR "/") + name; }

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>()};
}

std::size_t data_rows(const std::string& csv) {
  std::istringstream in(csv);
  std::size_t n = 0;
  for (std::string line; std::getline(in, line);)
    if (!line.empty() && line[0] != '#') ++n;
  return n - 1;  // header
}

fs::path scratch(const char* name) {
  auto dir = fs::temp_directory_path() / "chipcost_cli_test" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_CASE("cost command") {
  const auto r = run({"cost", spec("system_mcm_single.json")});
  CHECK(r.code == chipcost::cli::kOk);
  CHECK(r.out.find("grand_total") != std::string::npos);

  const auto bad = run({"cost", fixture("unknown_node_system.json")});
  CHECK(bad.code == chipcost::cli::kValidation);
  CHECK(bad.err.find("3nm") != std::string::npos);
  CHECK(bad.out.empty());

  CHECK(run({"cost", fixture("unknown_key_system.json")}).code == chipcost::cli::kValidation);
  CHECK(run({"cost", fixture("missing.json")}).code == chipcost::cli::kIo);
  CHECK(run({"cost", fixture("truncated.json")}).code == chipcost::cli::kParse);
  CHECK(run({"cost", spec("system_mcm_single.json"), "--dataset", fixture("truncated.json")}).code ==
        chipcost::cli::kParse);
  CHECK(run({"cost"}).code == chipcost::cli::kUsage);
  CHECK(run({"frobnicate"}).code == chipcost::cli::kUsage);
  CHECK(run({"cost", spec("system_mcm_single.json"), "--format", "xml"}).code == chipcost::cli::kUsage);
}

TEST_CASE("output format does not change the numbers") {
  const auto json_out = run({"--format", "json", "cost", spec("system_organic_hbm.json")});
  const auto csv_out = run({"cost", spec("system_organic_hbm.json"), "--format", "csv"});
  REQUIRE(json_out.code == 0);
  REQUIRE(csv_out.code == 0);
  const auto doc = nlohmann::json::parse(json_out.out);
  CHECK(doc.at("dataset_version").is_string());
  const double total = doc.at("result").at("grand_total").get<double>();
  const auto pos = csv_out.out.find("total,,grand_total,");
  REQUIRE(pos != std::string::npos);
  const double csv_total = std::stod(csv_out.out.substr(pos + std::string("total,,grand_total,").size()));
  CHECK(csv_total == total);
}

TEST_CASE("case study and switchpoint shapes") {
  const auto hbm = run({"casestudy", "hbm", "--format", "csv"});
  REQUIRE(hbm.code == 0);
  CHECK(data_rows(hbm.out) == 6);
  CHECK(hbm.out.find("# excluded") != std::string::npos);

  const auto with_spec = run({"casestudy", "hbm", spec("casestudy_hbm.json"), "--format", "csv"});
  CHECK(with_spec.code == 0);
  CHECK(data_rows(with_spec.out) == 6);

  const auto sw = run({"switchpoint", "--format", "csv"});
  REQUIRE(sw.code == 0);
  CHECK(data_rows(sw.out) == 12);

  const auto hy = run({"casestudy", "hybrid", "--format", "csv"});
  REQUIRE(hy.code == 0);
  CHECK(data_rows(hy.out) == 9);
}

TEST_CASE("sweep command and cap") {
  const auto r = run({"sweep", spec("sweep_partition.json"), "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(data_rows(r.out) == 36);
  CHECK(run({"sweep", spec("sweep_partition.json"), "--max-points", "10"}).code == chipcost::cli::kLimit);
}

TEST_CASE("reruns are byte-identical and carry provenance") {
  const auto dir = scratch("determinism");
  const std::vector<std::vector<std::string>> commands{
      {"cost", spec("system_hybrid_mcm.json")},
      {"sweep", spec("sweep_integrations.json")},
      {"switchpoint"},
      {"casestudy", "hbm"},
      {"casestudy", "hybrid"},
      {"dataset", "validate"}};
  int k = 0;
  for (const auto& base : commands) {
    for (const char* format : {"json", "csv", "table"}) {
      std::string outputs[2];
      for (int pass = 0; pass < 2; ++pass) {
        const auto path = dir / (std::to_string(k) + "_" + std::to_string(pass) + "." + format);
        auto args = base;
        args.insert(args.end(), {"--format", format, "--output", path.string()});
        const auto r = run(args);
        REQUIRE(r.code == 0);
        CHECK(r.out.empty());
        outputs[pass] = slurp(path);
      }
      CHECK(!outputs[0].empty());
      CHECK(outputs[0] == outputs[1]);
      CHECK(outputs[0].find("dataset_version") != std::string::npos);
      ++k;
    }
  }
}

TEST_CASE("plot data files") {
  const auto dir = scratch("plots");
  REQUIRE(run({"casestudy", "hbm", "--plot-data", dir.string(), "--output", (dir / "out.csv").string(),
               "--format", "csv"}).code == 0);
  REQUIRE(run({"casestudy", "hybrid", "--plot-data", dir.string()}).code == 0);
  REQUIRE(run({"switchpoint", "--plot-data", dir.string()}).code == 0);
  for (const char* f : {"fig1_package_cost.csv", "fig2_hbm_overhead.csv", "fig3_hybrid_cost.csv",
                        "table1_switching_points.csv"}) {
    const auto text = slurp(dir / f);
    CHECK_MESSAGE(text.find("# dataset_version=") != std::string::npos, f);
    CHECK(data_rows(text) > 0);
  }
}

TEST_CASE("dataset validate") {
  const auto ok = run({"dataset", "validate"});
  CHECK(ok.code == 0);
  CHECK(run({"dataset", "validate", fixture("truncated.json")}).code == chipcost::cli::kParse);
  CHECK(run({"dataset", "validate", fixture("nope.json")}).code == chipcost::cli::kIo);
}

TEST_CASE("bond yield flag changes multi-die totals") {
  const auto lit = run({"--format", "json", "cost", spec("system_hybrid_mcm.json")});
  const auto all = run({"--format", "json", "--bond-yield-from-first-die", "cost", spec("system_hybrid_mcm.json")});
  const double a = nlohmann::json::parse(lit.out)["result"]["grand_total"].get<double>();
  const double b = nlohmann::json::parse(all.out)["result"]["grand_total"].get<double>();
  CHECK(b > a);
}
