// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <fmt/format.h>

#include "chipcost/assembly.hpp"
#include "chipcost/die.hpp"
#include "chipcost/error.hpp"
#include "chipcost/explorer.hpp"
#include "chipcost/package.hpp"
#include "chipcost/system.hpp"
#include "chipcost/techdb.hpp"
#include "chipcost/yield.hpp"
#include "cli.hpp"

using namespace chipcost;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      if (pass) detail.clear();
      pass = false;
      detail += (detail.empty() ? "" : "; ") + what;
    }
  }
};

const TechDatabase& dataset() {
  static const TechDatabase db = load_dataset(default_dataset_path());
  return db;
}

bool rel_within(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max(std::abs(a), std::abs(b));
}

// 1. Yield closed form, zero-defect limit, Poisson limit.
Verdict yield_formula() {
  Verdict v;
  const double y = negbin_yield(100.0, {1.0, 0.1, 3.0});
  v.require(std::abs(y - 0.90632) <= 1e-4, fmt::format("negbin(100mm2, 0.1, 3) = {}", y));
  for (double a : {0.0, 1.0, 100.0, 5000.0})
    v.require(negbin_yield(a, {0.87, 0.0, 3.0}) == 0.87, fmt::format("D0=0 at {} mm2 not exact", a));
  // The gap to the Poisson form is about (A*D0)^2 / (2*alpha), so the 1e-6
  // bound holds for A*D0 up to ~1.4 at alpha = 1e6.
  for (double a : {10.0, 100.0, 400.0, 800.0}) {
    const double poisson = 0.95 * std::exp(-mm2_to_cm2(a) * 0.1);
    const double nb = negbin_yield(a, {0.95, 0.1, 1e6});
    v.require(rel_within(nb, poisson, 1e-6), fmt::format("Poisson limit off at {} mm2: {} vs {}", a, nb, poisson));
  }
  if (v.pass) v.detail = fmt::format("negbin(100 mm2) = {:.6f}", y);
  return v;
}

AssemblyDie bonded(double cost, double yield, double bond_cost, double bond_yield) {
  AssemblyDie d;
  d.die.unit_cost = cost;
  d.die.yield = yield;
  d.die.yielded_cost = cost / yield;
  d.bump = {"bump", 45.0, bond_cost, bond_yield, ""};
  return d;
}

InterposerCostResult substrate(double cost, double yield) {
  InterposerCostResult r;
  r.kind = InterposerKind::organic;
  r.unit_cost = cost;
  r.yield = yield;
  r.yielded_cost = cost / yield;
  return r;
}

// 2. Assembly examples and the interposer/MCM difference identity.
Verdict assembly_identity() {
  Verdict v;
  const AssemblySpec one{{bonded(50, 0.8, 2, 0.99)}, substrate(10, 0.9)};
  const AssemblySpec two{{bonded(50, 0.8, 2, 0.99), bonded(50, 0.8, 2, 0.99)}, substrate(10, 0.9)};
  AssemblySpec mcm = two;
  mcm.interposer = no_interposer();
  const double a = assemble_interposer_system(one).total;
  const double b = assemble_mcm_system(mcm).total;
  const double c = assemble_interposer_system(two).total;
  v.require(std::abs(a - 75.6111) <= 1e-4, fmt::format("n=1 interposer total {}", a));
  v.require(std::abs(b - 130.3030) <= 1e-4, fmt::format("n=2 MCM total {}", b));
  v.require(std::abs(c - 141.5264) <= 1e-4, fmt::format("n=2 interposer total {}", c));

  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> cost(0.1, 1000.0), yield(0.2, 1.0), bond(0.0, 10.0), byield(0.8, 1.0);
  std::uniform_int_distribution<int> count(1, 16);
  double worst = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    AssemblySpec s;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) s.dies.push_back(bonded(cost(rng), yield(rng), bond(rng), byield(rng)));
    s.interposer = substrate(cost(rng), yield(rng));
    double divisor = 1.0;
    for (int i = 1; i < n; ++i) divisor *= s.dies[i].bump.bond_yield;
    auto bare = s;
    bare.interposer = no_interposer();
    const double diff = assemble_interposer_system(s).total - assemble_mcm_system(bare).total;
    const double expected = s.interposer.yielded_cost / divisor;
    worst = std::max(worst, std::abs(diff - expected) / expected);
  }
  v.require(worst <= 1e-9, fmt::format("difference identity worst relative error {:.3g}", worst));
  if (v.pass)
    v.detail = fmt::format("{:.4f} / {:.4f} / {:.4f}; identity worst rel err {:.2g} over 1000 specs", a, b, c, worst);
  return v;
}

// 3. Package regression: exact plane and residual orthogonality.
Verdict package_regression() {
  Verdict v;
  auto make = [](double noise, unsigned seed) {
    PackageClass c{"synthetic", 2, 5, {}, ""};
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> eps(-noise, noise);
    for (double a = 150.0; a <= 4000.0; a += 350.0)
      for (double n = 300.0; n <= 9000.0; n += 800.0)
        c.samples.push_back({a, n, 0.02 * a + 0.001 * n + 1.5 + eps(rng)});
    return c;
  };
  const auto exact = fit_package_regression(make(0.0, 1));
  v.require(std::abs(exact.mu_area - 0.02) <= 1e-9 && std::abs(exact.mu_pins - 0.001) <= 1e-9 &&
                std::abs(exact.intercept - 1.5) <= 1e-9,
            fmt::format("exact plane recovered as ({}, {}, {})", exact.mu_area, exact.mu_pins, exact.intercept));
  v.require(std::abs(exact.r_squared - 1.0) <= 1e-12, fmt::format("exact plane R2 = {}", exact.r_squared));

  double worst = 0.0;
  for (unsigned seed = 1; seed <= 50; ++seed) {
    const auto c = make(2.0, seed);
    const auto reg = fit_package_regression(c);
    double max_a = 0.0, max_n = 0.0;
    for (const auto& s : c.samples) max_a = std::max(max_a, s.substrate_area), max_n = std::max(max_n, s.pin_count);
    double sum = 0.0, dot_a = 0.0, dot_n = 0.0;
    for (const auto& s : c.samples) {
      const double r = s.cost - (reg.mu_area * s.substrate_area + reg.mu_pins * s.pin_count + reg.intercept);
      sum += r;
      dot_a += r * s.substrate_area / max_a;
      dot_n += r * s.pin_count / max_n;
    }
    worst = std::max({worst, std::abs(sum), std::abs(dot_a), std::abs(dot_n)});
    v.require(reg.r_squared < 1.0, "noisy fit reported R2 = 1");
  }
  v.require(worst <= 1e-8, fmt::format("residual orthogonality worst {:.3g}", worst));
  if (v.pass) v.detail = fmt::format("exact plane recovered; residual orthogonality worst {:.2g} over 50 noisy sets", worst);
  return v;
}

// 4. HBM interface geometry.
Verdict hbm_geometry() {
  Verdict v;
  const auto& db = dataset();
  const double area = interface_area(1024, 197.0);
  const double hbm1 = 5.48 * 7.29;
  v.require(std::abs(area - hbm1) / hbm1 <= 0.02, fmt::format("interface area {} vs {}", area, hbm1));

  SystemSpec sys;
  sys.dies.push_back({.name = "core", .node = "7nm", .area_mm2 = 200.0, .signal_pins = 1000.0});
  sys.hbm.stacks = 1;
  sys.integration = Integration::mcm;
  const auto mcm = check_integration_feasibility(sys, db);
  v.require(!mcm.feasible, "MCM with HBM reported feasible");
  sys.integration = Integration::silicon_2p5d;
  const auto si = check_integration_feasibility(sys, db);
  v.require(si.feasible, "silicon 2.5D with HBM reported infeasible");
  v.require(si.pitch == 45.0, fmt::format("silicon bump pitch is {} um", si.pitch));
  if (v.pass)
    v.detail = fmt::format("1024b at 197um = {:.4f} mm2 ({:+.2f}% of HBM1); MCM at {}um infeasible; silicon at 45um feasible",
                           area, 100.0 * (area - hbm1) / hbm1, mcm.pitch);
  return v;
}

// 5. Case-study trends on the shipped dataset.
Verdict case_study_trends() {
  Verdict v;
  const auto& db = dataset();

  const auto hbm = case_study_hbm(HbmStudyConfig{}, db);
  v.require(hbm.breakdown.size() == 6 && hbm.excluded.size() == 3, "HBM study shape");
  std::string hbm_detail;
  for (std::size_t i = 0; i + 1 < hbm.breakdown.size(); i += 2) {
    const auto& si = hbm.breakdown[i];
    const auto& org = hbm.breakdown[i + 1];
    if (!si.report || !org.report) {
      v.require(false, fmt::format("HBM study row failed at {} mm2", si.scale));
      continue;
    }
    const double o = org.report->relative.overhead, s = si.report->relative.overhead;
    v.require(o < 0.5, fmt::format("(a) organic overhead {:.3f} at {} mm2", o, org.scale));
    v.require(o < s, fmt::format("(a) organic {:.3f} not below silicon {:.3f} at {} mm2", o, s, org.scale));
    hbm_detail += fmt::format("{}{}:{:.0f}%/{:.0f}%", hbm_detail.empty() ? "" : " ", org.scale, 100 * o, 100 * s);
  }

  const auto hybrid = case_study_hybrid(HybridStudyConfig{}, db);
  v.require(hybrid.size() == 9, "hybrid study shape");
  for (const auto& r : hybrid) {
    const bool ok = r.error.empty() && r.monolithic_core_node && r.monolithic_io_node &&
                    r.best_cost < *r.monolithic_core_node && r.best_cost < *r.monolithic_io_node;
    v.require(ok, fmt::format("(b) hybrid does not beat both monolithics at {}B/{}", r.scale, r.io_fraction));
  }
  std::string hybrid_detail;
  if (hybrid.size() == 9) {
    for (std::size_t f = 0; f < 3; ++f) {
      v.require(hybrid[f].best_core_dies <= 2, fmt::format("(b) {} core dies optimal at 5B", hybrid[f].best_core_dies));
      for (std::size_t s = 1; s < 3; ++s) {
        const auto& prev = hybrid[(s - 1) * 3 + f];
        const auto& cur = hybrid[s * 3 + f];
        v.require(cur.improvement > prev.improvement,
                  fmt::format("(b) improvement not increasing {}B->{}B at io {}", prev.scale, cur.scale, cur.io_fraction));
        v.require(cur.best_core_dies >= prev.best_core_dies,
                  fmt::format("(b) optimal die count drops {}B->{}B at io {}", prev.scale, cur.scale, cur.io_fraction));
      }
    }
    for (std::size_t s = 0; s < 3; ++s)
      hybrid_detail += fmt::format("{}{}B:{:.0f}%", s ? " " : "", hybrid[s * 3].scale, 100 * hybrid[s * 3].improvement);
  }

  const std::vector<std::string> nodes{"7nm", "10nm", "12nm", "16nm", "20nm", "28nm"};
  const std::vector<Integration> kinds{Integration::organic_2p5d, Integration::mcm};
  const auto sw = find_switching_points(nodes, kinds, PartitionRule{}, db);
  std::string sw_detail;
  for (std::size_t n = 0; n < nodes.size(); ++n) {
    const auto& org = sw[2 * n];
    const auto& mcm = sw[2 * n + 1];
    if (!org.point || !mcm.point || org.point->verdict != SwitchVerdict::crossover ||
        mcm.point->verdict != SwitchVerdict::crossover) {
      v.require(false, fmt::format("(c) no crossover at {}", nodes[n]));
      continue;
    }
    v.require(mcm.point->area < org.point->area,
              fmt::format("(c) MCM {} not below organic {} at {}", mcm.point->area, org.point->area, nodes[n]));
    if (n > 0 && sw[2 * n - 2].point && sw[2 * n - 1].point) {
      v.require(org.point->area >= sw[2 * n - 2].point->area, fmt::format("(c) organic area drops at {}", nodes[n]));
      v.require(mcm.point->area >= sw[2 * n - 1].point->area, fmt::format("(c) MCM area drops at {}", nodes[n]));
    }
    sw_detail += fmt::format("{}{}:{}/{}", n ? " " : "", nodes[n], org.point->area, mcm.point->area);
  }
  if (v.pass)
    v.detail = fmt::format("org/si overhead {}; io=0.3 improvement {}; org/mcm switch mm2 {}", hbm_detail,
                           hybrid_detail, sw_detail);
  return v;
}

// 6. Splitting a die strictly lowers yielded silicon cost.
Verdict super_linearity() {
  Verdict v;
  std::size_t checked = 0;
  for (const auto& node : dataset().nodes()) {
    if (!(node.defect_density > 0.0)) continue;
    for (int a = 100; a <= 800; ++a) {
      const double whole = die_cost_for_area(a, node).yielded_cost;
      for (int k : {2, 4, 8}) {
        const double parts = k * die_cost_for_area(static_cast<double>(a) / k, node).yielded_cost;
        v.require(parts < whole, fmt::format("{} A={} k={}: {} >= {}", node.name, a, k, parts, whole));
        ++checked;
      }
    }
  }
  if (v.pass) v.detail = fmt::format("{} (node, area, k) cases", checked);
  return v;
}

// 7. CLI reruns produce identical files that carry the dataset version.
Verdict determinism() {
  Verdict v;
  const auto dir = fs::temp_directory_path() / "chipcost_acceptance";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string specs = CHIPCOST_SPECS_DIR;
  const std::vector<std::vector<std::string>> commands{
      {"cost", specs + "/system_organic_hbm.json"},
      {"cost", specs + "/system_hybrid_mcm.json"},
      {"sweep", specs + "/sweep_partition.json"},
      {"switchpoint", specs + "/switchpoint_default.json"},
      {"casestudy", "hbm", specs + "/casestudy_hbm.json"},
      {"casestudy", "hybrid", specs + "/casestudy_hybrid.json"},
      {"dataset", "validate"}};
  const auto slurp = [](const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    return std::string(std::istreambuf_iterator<char>(f), std::istreambuf_iterator<char>());
  };
  std::size_t files = 0;
  for (std::size_t c = 0; c < commands.size(); ++c) {
    for (const char* format : {"json", "csv", "table"}) {
      std::vector<std::string> contents;
      for (int pass = 0; pass < 2; ++pass) {
        const auto out = dir / fmt::format("run{}_{}_{}.{}", c, format, pass, format);
        const auto plots = dir / fmt::format("plots{}_{}_{}", c, format, pass);
        std::vector<std::string> args{"chipcost"};
        args.insert(args.end(), commands[c].begin(), commands[c].end());
        args.insert(args.end(), {"--format", format, "--output", out.string(), "--plot-data", plots.string()});
        std::vector<const char*> argv;
        for (const auto& a : args) argv.push_back(a.c_str());
        std::ostringstream sout, serr;
        const int code = cli::run(static_cast<int>(argv.size()), argv.data(), sout, serr);
        v.require(code == 0, fmt::format("'{}' exited {}: {}", args[1], code, serr.str()));
        std::string all = slurp(out);
        v.require(all.find(dataset().version()) != std::string::npos,
                  fmt::format("{} lacks dataset version", out.filename().string()));
        if (fs::exists(plots)) {
          std::vector<fs::path> names;
          for (const auto& e : fs::directory_iterator(plots)) names.push_back(e.path());
          std::sort(names.begin(), names.end());
          for (const auto& p : names) {
            const auto text = slurp(p);
            v.require(text.find(dataset().version()) != std::string::npos,
                      fmt::format("{} lacks dataset version", p.filename().string()));
            all += p.filename().string() + "\n" + text;
          }
        }
        contents.push_back(std::move(all));
        ++files;
      }
      v.require(contents[0] == contents[1], fmt::format("'{}' --format {} differs between runs", commands[c][0], format));
    }
  }
  if (v.pass) v.detail = fmt::format("{} runs, outputs and plot files identical in pairs", files);
  return v;
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Verdict()> check;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "yield formula fidelity", 0.1, yield_formula},
      {2, "assembly oracles and difference identity", 1.0, assembly_identity},
      {3, "package regression", 1.0, package_regression},
      {4, "HBM geometry consistency", 1.0, hbm_geometry},
      {5, "case-study trends on default dataset", 30.0, case_study_trends},
      {6, "die-splitting super-linearity", 1.0, super_linearity},
      {7, "determinism and provenance", 60.0, determinism},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail = fmt::format("threw: {}", e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > c.budget_s) v.require(false, fmt::format("took {:.3f} s, budget {} s", secs, c.budget_s));
    if (!v.pass) ++failed;
    std::cout << fmt::format("{} [{}] {} ({:.3f} s): {}\n", v.pass ? "PASS" : "FAIL", c.id, c.name, secs, v.detail);
  }
  std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
