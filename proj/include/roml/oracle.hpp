#pragma once

#include <vector>

#include "roml/features.hpp"

namespace roml {

// Largest number of candidate permutation tuples brute_force_miap will
// evaluate.
inline constexpr double kMiapEnumerationLimit = 1e6;

struct MiapSolution {
  std::vector<PartialPermutation> ppms;  // canonical
  double optimal_nuclear = 0.0;
  long long evaluated = 0;
};

// Number of permutation tuples modulo a common slot relabelling:
// C(n_0, n) * prod_{k >= 1} n_k! / (n_k - n)!.
double miap_search_size(const std::vector<FeatureSet>& sets, int n);

// Exhaustive minimizer of ||assemble_d(sets, P, mode)||_* over all feasible
// permutation tuples. Image 0 runs over ascending n-subsets only, which
// removes the n! slot relabellings. Candidates are visited in lexicographic
// order and only a strictly smaller objective replaces the incumbent, so
// ties resolve to the lexicographically smallest tuple. Throws OversizeError
// when the search size exceeds kMiapEnumerationLimit.
MiapSolution brute_force_miap(const std::vector<FeatureSet>& sets, int n,
                              StackingMode mode = StackingMode::kDescriptor);

}  // namespace roml
