#pragma once

#include <string>
#include <string_view>

namespace chipcost {

enum class Integration { silicon_2p5d, organic_2p5d, mcm };

enum class InterposerKind { silicon, organic, none };

// Canonical spellings: "silicon_2.5d", "organic_2.5d", "mcm".
std::string_view to_string(Integration integration);
Integration parse_integration(std::string_view text);

std::string_view to_string(InterposerKind kind);

InterposerKind interposer_kind_for(Integration integration);

/// Options that change the assembly formula itself rather than its inputs.
struct ModelOptions {
  /// Bond-yield product over all n dies instead of the literal i = 2..n.
  bool bond_yield_from_first_die = false;
};

constexpr double mm2_to_cm2(double area_mm2) { return area_mm2 / 100.0; }

}  // namespace chipcost
