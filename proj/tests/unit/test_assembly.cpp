#include <doctest.h>

#include <random>

#include "chipcost/assembly.hpp"
#include "chipcost/error.hpp"

using namespace chipcost;

namespace {

AssemblyDie unit(double cost, double yield, double bond_cost, double bond_yield) {
  AssemblyDie d;
  d.die.unit_cost = cost;
  d.die.yield = yield;
  d.die.yielded_cost = cost / yield;
  d.bump = {"b", 45.0, bond_cost, bond_yield, ""};
  return d;
}

InterposerCostResult interposer(double cost, double yield) {
  InterposerCostResult r;
  r.kind = InterposerKind::silicon;
  r.unit_cost = cost;
  r.yield = yield;
  r.yielded_cost = cost / yield;
  return r;
}

}  // namespace

TEST_CASE("hand-computed assembly examples") {
  AssemblySpec one{{unit(50.0, 0.8, 2.0, 0.99)}, interposer(10.0, 0.9)};
  CHECK(assemble_interposer_system(one).total == doctest::Approx(10.0 / 0.9 + 62.5 + 2.0).epsilon(1e-12));
  CHECK(assemble_interposer_system(one).total == doctest::Approx(75.6111).epsilon(1e-6));

  AssemblySpec two{{unit(50.0, 0.8, 2.0, 0.99), unit(50.0, 0.8, 2.0, 0.99)}, interposer(10.0, 0.9)};
  CHECK(assemble_interposer_system(two).total == doctest::Approx(141.5264).epsilon(1e-6));

  AssemblySpec mcm = two;
  mcm.interposer = no_interposer();
  CHECK(assemble_mcm_system(mcm).total == doctest::Approx(130.3030).epsilon(1e-6));
  CHECK(assemble_mcm_system(mcm).total == doctest::Approx(129.0 / 0.99).epsilon(1e-12));

  AssemblySpec single{{unit(50.0, 0.8, 2.0, 0.9)}, no_interposer()};
  CHECK(assemble_mcm_system(single).total == 62.5 + 2.0);
  CHECK(assemble_mcm_system(single).bond_yield_divisor == 1.0);
}

TEST_CASE("perfect yields and free bonding collapse to plain costs") {
  AssemblySpec s{{unit(30.0, 1.0, 0.0, 1.0), unit(20.0, 1.0, 0.0, 1.0)}, interposer(7.0, 1.0)};
  CHECK(assemble_interposer_system(s).total == doctest::Approx(57.0));
}

TEST_CASE("wrong assembly routine is refused") {
  AssemblySpec with{{unit(1.0, 1.0, 0.0, 1.0)}, interposer(1.0, 1.0)};
  AssemblySpec without{{unit(1.0, 1.0, 0.0, 1.0)}, no_interposer()};
  CHECK_THROWS_AS(assemble_mcm_system(with), Error);
  CHECK_THROWS_AS(assemble_interposer_system(without), Error);
  CHECK_THROWS_AS(assemble_mcm_system(AssemblySpec{{}, no_interposer()}), Error);
  CHECK(assemble_system(with).total == assemble_interposer_system(with).total);
  CHECK(assemble_system(without).total == assemble_mcm_system(without).total);
}

TEST_CASE("interposer and MCM totals differ by the interposer term over the bond yield") {
  std::mt19937_64 rng(20221);
  std::uniform_real_distribution<double> cost(0.5, 500.0), yield(0.3, 1.0), bond(0.0, 5.0),
      byield(0.9, 1.0);
  std::uniform_int_distribution<int> count(1, 12);
  for (int trial = 0; trial < 1000; ++trial) {
    AssemblySpec s;
    const int n = count(rng);
    for (int i = 0; i < n; ++i) s.dies.push_back(unit(cost(rng), yield(rng), bond(rng), byield(rng)));
    s.interposer = interposer(cost(rng), yield(rng));
    double divisor = 1.0;
    for (int i = 1; i < n; ++i) divisor *= s.dies[i].bump.bond_yield;
    const auto with = assemble_interposer_system(s);
    auto bare = s;
    bare.interposer = no_interposer();
    const auto without = assemble_mcm_system(bare);
    const double expected = s.interposer.yielded_cost / divisor;
    CHECK((with.total - without.total) == doctest::Approx(expected).epsilon(1e-9));
    CHECK(with.total == doctest::Approx(with.pre_bond_yield() / with.bond_yield_divisor).epsilon(1e-12));
  }
}

TEST_CASE("bond yield product starts at the second die") {
  AssemblySpec s{{unit(40.0, 0.9, 1.0, 0.95), unit(40.0, 0.9, 1.0, 0.97), unit(40.0, 0.9, 1.0, 0.98)},
                 no_interposer()};
  const double base = assemble_mcm_system(s).total;
  auto first = s;
  first.dies[0].bump.bond_yield = 0.5;
  CHECK(assemble_mcm_system(first).total == base);
  auto later = s;
  later.dies[2].bump.bond_yield = 0.9;
  CHECK(assemble_mcm_system(later).total > base);

  ModelOptions all{true};
  CHECK(assemble_mcm_system(s, all).total == doctest::Approx(base / 0.95));
  CHECK(assemble_mcm_system(first, all).total > assemble_mcm_system(s, all).total);
}

TEST_CASE("uniform bond parameters make die order irrelevant") {
  AssemblySpec s{{unit(10.0, 0.9, 1.0, 0.98), unit(70.0, 0.6, 1.0, 0.98), unit(35.0, 0.8, 1.0, 0.98)},
                 interposer(12.0, 0.95)};
  const double ref = assemble_interposer_system(s).total;
  std::swap(s.dies[0], s.dies[2]);
  CHECK(assemble_interposer_system(s).total == doctest::Approx(ref).epsilon(1e-14));
}
