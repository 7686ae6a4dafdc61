#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chipcost/assembly.hpp"
#include "chipcost/die.hpp"
#include "chipcost/interposer.hpp"
#include "chipcost/package.hpp"
#include "chipcost/system_spec.hpp"
#include "chipcost/techdb.hpp"

namespace chipcost {

/// Area of a square bump grid carrying `signal_count` signals at `pitch_um`:
/// (ceil(sqrt(signals)) * pitch)², in mm².
double interface_area(double signal_count, double pitch_um);

struct FeasibilityVerdict {
  bool feasible = true;
  std::string violating;        // e.g. "hbm[0]"; empty when feasible
  double interface_area = 0.0;  // mm², of the checked interface
  double footprint = 0.0;       // mm², budget it had to fit in
  double pitch = 0.0;           // µm
  std::string message;
};

/// An HBM interface must fit under its stack footprint at the bump pitch of
/// the chosen integration.
FeasibilityVerdict check_integration_feasibility(const SystemSpec& sys, const TechDatabase& db);

struct DieLine {
  std::string name;
  std::string node;  // empty for HBM stacks
  bool is_hbm = false;
  DieCostResult cost;
  double bond_cost = 0.0;
  double bond_yield = 1.0;
};

struct PackageLine {
  std::string package_class;
  double substrate_area = 0.0;
  double pin_count = 0.0;
  double cost = 0.0;
  bool extrapolated = false;
  PackageRegression regression;
};

/// Everything expressed as a multiple of the yielded manufacturing cost of the
/// logic dies (sum of C_die/Y_die over non-HBM dies). The first six fields add
/// up to assembly total / base.
struct RelativeBreakdown {
  double base = 0.0;
  double core_dies = 1.0;
  double hbm_stacks = 0.0;       // stack purchase cost
  double interposer = 0.0;       // C_int / Y_int
  double bond_cost = 0.0;        // sum of C_bond
  double bond_yield_loss = 0.0;  // assembly total - pre-bond-yield numerator
  double overhead = 0.0;         // (assembly total - base) / base
  double package = 0.0;          // reported alongside, not part of overhead
};

struct CostReport {
  std::string system_name;
  Integration integration = Integration::mcm;
  std::string bump_tech;
  std::vector<DieLine> dies;
  InterposerCostResult interposer;
  AssemblyCostResult assembly;
  double bonding_total = 0.0;
  PackageLine package;
  double grand_total = 0.0;
  RelativeBreakdown relative;
};

/// Evaluates systems against one dataset. Package regressions are fitted once
/// at construction. Immutable; safe to share between threads.
class Evaluator {
 public:
  explicit Evaluator(const TechDatabase& db, ModelOptions options = {});

  CostReport evaluate(const SystemSpec& sys) const;

  const TechDatabase& database() const { return *db_; }
  const ModelOptions& options() const { return options_; }
  const PackageRegression& regression(std::string_view package_class) const;

 private:
  const TechDatabase* db_;
  ModelOptions options_;
  std::map<std::string, PackageRegression, std::less<>> regressions_;
};

CostReport evaluate_system(const SystemSpec& sys, const TechDatabase& db,
                           const ModelOptions& options = {});

}  // namespace chipcost
