#include <doctest.h>

#include "chipcost/error.hpp"
#include "chipcost/system.hpp"
#include "helpers.hpp"

using namespace chipcost;

namespace {

SystemSpec one_die(Integration integration, double area, int hbm = 0) {
  SystemSpec s;
  s.name = "probe";
  s.integration = integration;
  s.dies.push_back({.name = "core", .node = "7nm", .area_mm2 = area, .signal_pins = 1000.0});
  s.hbm.stacks = hbm;
  return s;
}

double sum_of_parts(const CostReport& r) {
  return r.assembly.total + r.package.cost;
}

}  // namespace

TEST_CASE("interface area of a square bump grid") {
  CHECK(interface_area(1024, 197.0) == doctest::Approx(39.740176));
  CHECK(std::abs(interface_area(1024, 197.0) - 5.48 * 7.29) / (5.48 * 7.29) < 0.02);
  CHECK(interface_area(1024, 45.0) == doctest::Approx(2.0736));
  CHECK(interface_area(1, 45.0) == doctest::Approx(0.045 * 0.045));
  CHECK(interface_area(1000, 100.0) == doctest::Approx(interface_area(1024, 100.0)));
  CHECK_THROWS_AS(interface_area(0, 45.0), Error);
  CHECK_THROWS_AS(interface_area(1024, 0.0), Error);
}

TEST_CASE("HBM feasibility by integration") {
  const auto& db = test::default_db();
  const auto mcm = check_integration_feasibility(one_die(Integration::mcm, 200.0, 1), db);
  CHECK_FALSE(mcm.feasible);
  CHECK(mcm.violating == "hbm[0]");
  CHECK(mcm.pitch >= 197.0);
  CHECK(check_integration_feasibility(one_die(Integration::silicon_2p5d, 200.0, 1), db).feasible);
  CHECK(check_integration_feasibility(one_die(Integration::organic_2p5d, 200.0, 1), db).feasible);
  CHECK(check_integration_feasibility(one_die(Integration::mcm, 200.0, 0), db).feasible);

  auto sys = one_die(Integration::mcm, 200.0, 1);
  try {
    evaluate_system(sys, db);
    FAIL("expected infeasible");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::model);
    CHECK(std::string(e.what()).find("hbm[0]") != std::string::npos);
  }
}

TEST_CASE("degenerate system collapses to the die unit cost") {
  auto doc = test::default_db().to_json();
  for (auto& n : doc["nodes"]) n["defect_density"] = 0.0, n["wafer_base_yield"] = 1.0;
  for (auto& b : doc["bump_techs"]) b["bond_cost_per_die"] = 0.0, b["bond_yield"] = 1.0;
  for (auto& c : doc["package_classes"])
    for (auto& s : c["samples"]) s[2] = 0.0;
  // a zero plane is still full rank in the regressors
  const auto db = TechDatabase::from_json(doc);
  const auto r = evaluate_system(one_die(Integration::mcm, 100.0), db);
  CHECK(r.grand_total == doctest::Approx(r.dies[0].cost.unit_cost).epsilon(1e-9));
  CHECK(r.dies[0].cost.unit_cost == doctest::Approx(db.node("7nm").wafer_cost / 640.0));
}

TEST_CASE("report is internally consistent") {
  const auto& db = test::default_db();
  for (auto integration : {Integration::silicon_2p5d, Integration::organic_2p5d, Integration::mcm}) {
    const auto r = evaluate_system(one_die(integration, 300.0, integration == Integration::mcm ? 0 : 2), db);
    CHECK(r.grand_total == doctest::Approx(sum_of_parts(r)).epsilon(1e-9));
    const auto& b = r.relative;
    CHECK(b.core_dies + b.hbm_stacks + b.interposer + b.bond_cost + b.bond_yield_loss ==
          doctest::Approx(r.assembly.total / b.base).epsilon(1e-9));
    CHECK(b.overhead == doctest::Approx(r.assembly.total / b.base - 1.0).epsilon(1e-9));
    if (integration == Integration::mcm) CHECK(r.interposer.yielded_cost == 0.0);
  }
}

TEST_CASE("HBM stacks count as bonded units without silicon cost") {
  const auto& db = test::default_db();
  const auto r = evaluate_system(one_die(Integration::organic_2p5d, 200.0, 2), db);
  REQUIRE(r.dies.size() == 3);
  CHECK(r.dies[1].is_hbm);
  CHECK(r.dies[1].cost.yielded_cost == 0.0);
  CHECK(r.dies[1].bond_cost == db.bump(db.defaults().bump_organic).bond_cost_per_die);
  const auto bare = evaluate_system(one_die(Integration::organic_2p5d, 200.0, 0), db);
  CHECK(r.interposer.area > bare.interposer.area);
}

TEST_CASE("single HBM stack overhead: organic under half, silicon higher") {
  const auto& db = test::default_db();
  const auto org = evaluate_system(one_die(Integration::organic_2p5d, 200.0, 1), db);
  const auto si = evaluate_system(one_die(Integration::silicon_2p5d, 200.0, 1), db);
  CHECK(org.relative.overhead < 0.5);
  CHECK(si.relative.overhead > org.relative.overhead);
}

TEST_CASE("errors name the failing component") {
  const auto& db = test::default_db();
  auto sys = one_die(Integration::mcm, 100.0);
  sys.dies.push_back({.name = "ghost", .node = "3nm", .area_mm2 = 50.0});
  try {
    evaluate_system(sys, db);
    FAIL("expected not_found");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::not_found);
    CHECK(std::string(e.what()).find("die[1] 'ghost'") != std::string::npos);
    CHECK(std::string(e.what()).find("3nm") != std::string::npos);
  }
  auto huge = one_die(Integration::silicon_2p5d, 60000.0);
  CHECK_THROWS_AS(evaluate_system(huge, db), Error);
}

TEST_CASE("evaluation is deterministic") {
  const auto& db = test::default_db();
  const auto sys = one_die(Integration::organic_2p5d, 321.0, 3);
  const auto a = evaluate_system(sys, db);
  const auto b = evaluate_system(sys, db);
  CHECK(a.grand_total == b.grand_total);
  CHECK(a.relative.overhead == b.relative.overhead);
}
