#pragma once

// Synthetic context bundles whose measurements obey
//   DC  = size * dd_base  * (1 + DDIF)
//   Eff = eff_base * (1 + EIF)
// exactly, with DDIF/EIF computed from the known triangles by an inline
// formula that does not go through the library.

#include <cstdint>
#include <cstddef>

#include "hydeep/model.hpp"

namespace hydeep::testing {

struct SyntheticConfig {
  std::uint64_t seed = 1;
  std::size_t releases = 10;
  std::size_t dc_factors = 5;
  std::size_t eff_factors = 2;
  std::size_t experts = 3;
  double dd_base = 0.5;
  double eff_base = 0.5;
  /// D1 carries a large effect, every other DC factor a negligible one.
  bool dominant_first = false;
  /// Every release identical (same size, levels and counts).
  bool constant = false;
  /// Multiplicative lognormal noise sigma on DC; 0 keeps the data exact.
  double noise_sigma = 0.0;
};

ContextBundle make_synthetic_bundle(const SyntheticConfig& config);

/// Ground-truth relative increase: sum_f (level_f / 3) * mean_e (a+m+b)/3.
double true_increase(const ContextBundle& bundle, TargetKind target,
                     const LevelMap& levels);

}  // namespace hydeep::testing
