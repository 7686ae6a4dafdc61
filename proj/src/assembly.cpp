#include "chipcost/assembly.hpp"

#include <fmt/format.h>

#include "chipcost/error.hpp"

namespace chipcost {

double AssemblyCostResult::pre_bond_yield() const {
  double sum = interposer_term;
  for (double t : per_die_terms) sum += t;
  return sum;
}

namespace {

AssemblyCostResult compose(const AssemblySpec& spec, double interposer_term,
                           const ModelOptions& options) {
  if (spec.dies.empty()) throw Error(ErrorKind::domain, "assembly needs at least one die");
  AssemblyCostResult r;
  r.interposer_term = interposer_term;
  r.per_die_terms.reserve(spec.dies.size());
  double numerator = interposer_term;
  const std::size_t first_bond = options.bond_yield_from_first_die ? 0 : 1;
  for (std::size_t i = 0; i < spec.dies.size(); ++i) {
    const auto& d = spec.dies[i];
    if (!(d.bump.bond_yield > 0.0 && d.bump.bond_yield <= 1.0))
      throw Error(ErrorKind::domain,
                  fmt::format("die {}: bond yield must be in (0, 1] (got {})", i + 1,
                              d.bump.bond_yield));
    if (!(d.die.yield > 0.0))
      throw Error(ErrorKind::domain, fmt::format("die {}: die yield must be > 0", i + 1));
    const double term = d.die.unit_cost / d.die.yield + d.bump.bond_cost_per_die;
    r.per_die_terms.push_back(term);
    r.bond_cost_total += d.bump.bond_cost_per_die;
    numerator += term;
    if (i >= first_bond) r.bond_yield_divisor *= d.bump.bond_yield;
  }
  r.total = numerator / r.bond_yield_divisor;
  return r;
}

}  // namespace

AssemblyCostResult assemble_interposer_system(const AssemblySpec& spec,
                                              const ModelOptions& options) {
  const auto& ip = spec.interposer;
  if (ip.kind == InterposerKind::none)
    throw Error(ErrorKind::domain, "interposer system requires a silicon or organic interposer");
  if (!(ip.yield > 0.0)) throw Error(ErrorKind::domain, "interposer yield must be > 0");
  return compose(spec, ip.unit_cost / ip.yield, options);
}

AssemblyCostResult assemble_mcm_system(const AssemblySpec& spec, const ModelOptions& options) {
  if (spec.interposer.kind != InterposerKind::none)
    throw Error(ErrorKind::domain,
                fmt::format("MCM assembly given a {} interposer; use the interposer form",
                            to_string(spec.interposer.kind)));
  return compose(spec, 0.0, options);
}

AssemblyCostResult assemble_system(const AssemblySpec& spec, const ModelOptions& options) {
  return spec.interposer.kind == InterposerKind::none
             ? assemble_mcm_system(spec, options)
             : assemble_interposer_system(spec, options);
}

}  // namespace chipcost
