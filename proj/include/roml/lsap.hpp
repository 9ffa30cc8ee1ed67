#pragma once

#include <vector>

#include "roml/prox.hpp"

namespace roml {

// Rectangular linear sum assignment: cost is n_src x n_tgt with
// n_src >= n_tgt >= 1. Every target column is assigned a distinct source row.
struct AssignmentProblem {
  Matrix cost;
};

struct Assignment {
  // target_to_source[j] is the source row assigned to target column j.
  std::vector<int> target_to_source;
};

struct AssignmentResult {
  Assignment assignment;
  double total_cost = 0.0;
};

// Largest n_src accepted by brute_force_lsap.
inline constexpr int kBruteForceLsapMaxSources = 8;

// Exact minimum-cost injective assignment by the shortest augmenting path
// form of the Hungarian algorithm, run directly on the rectangular matrix
// (targets are the augmented side, so the cost is O(n_tgt^2 * n_src)).
// Column scans go in ascending source order and only strictly smaller
// reduced costs replace the incumbent, so ties resolve toward lower source
// indices and repeated calls are bit-for-bit reproducible.
AssignmentResult solve_lsap(const AssignmentProblem& problem);

// Exhaustive enumeration over all injections, lexicographic order; the
// first (lexicographically smallest) minimizer wins. Test oracle only.
AssignmentResult brute_force_lsap(const AssignmentProblem& problem);

// True when every entry is a valid source index and no index repeats.
bool is_injective(const Assignment& a, int n_sources);

}  // namespace roml
