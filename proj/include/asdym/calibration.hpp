#pragma once

// Frozen sign conventions. They were obtained once from calibrate_* at the
// lowest level (0 -> 1 for the beta relations, l = 1 for the bordered Yang
// matrix) and must not be re-fitted per seed or level. The test suite re-runs
// the calibration and requires it to reproduce these values.

#include <array>

#include "asdym/atiyah_ward.hpp"

namespace asdym {

inline constexpr std::array<int, 6> kBacklundSigns{1, 1, 1, 1, 1, 1};

inline constexpr EquivalenceTransform kBorderedTransform{};

/// Sign of lhs/rhs for each beta relation at level 0 -> 1. Throws Error when a
/// ratio is not within 1e-6 of +-1.
std::array<int, 6> calibrate_backlund_signs(const DeltaChain& chain, const SpacetimePoint& x);

/// The signed-permutation pair (P, Q) minimizing |J_qd - P J Q| at l = 1.
/// Ties go to the earlier candidate; the identity pair comes first.
EquivalenceTransform calibrate_bordered_transform(const DeltaChain& chain, const SpacetimePoint& x);

/// All 64 candidate pairs, identity first.
std::vector<EquivalenceTransform> equivalence_candidates();

}  // namespace asdym
