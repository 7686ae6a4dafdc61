#pragma once

#include <vector>

#include "chipcost/die.hpp"
#include "chipcost/interposer.hpp"
#include "chipcost/techdb.hpp"
#include "chipcost/types.hpp"

namespace chipcost {

struct AssemblyDie {
  DieCostResult die;
  BumpTech bump;
};

/// Dies in bonding order; index 0 is die 1 of the product in the bond-yield
/// divisor, which by default starts at die 2.
struct AssemblySpec {
  std::vector<AssemblyDie> dies;
  InterposerCostResult interposer;
};

struct AssemblyCostResult {
  double total = 0.0;
  double interposer_term = 0.0;         // C_int / Y_int, 0 for MCM
  std::vector<double> per_die_terms;    // C_die/Y_die + C_bond per die
  double bond_yield_divisor = 1.0;      // product of Y_bond
  double bond_cost_total = 0.0;

  /// interposer_term + sum(per_die_terms), the numerator before bond-yield loss.
  double pre_bond_yield() const;
};

/// Interposer-based 2.5D system:
///   (C_int/Y_int + sum_i (C_die(i)/Y_die(i) + C_bond(i))) / prod_{i=2..n} Y_bond(i)
AssemblyCostResult assemble_interposer_system(const AssemblySpec& spec,
                                              const ModelOptions& options = {});

/// MCM system: the same expression without the interposer term.
AssemblyCostResult assemble_mcm_system(const AssemblySpec& spec,
                                       const ModelOptions& options = {});

/// Dispatches on spec.interposer.kind.
AssemblyCostResult assemble_system(const AssemblySpec& spec, const ModelOptions& options = {});

}  // namespace chipcost
