#pragma once

#include <vector>

#include "roml/features.hpp"
#include "roml/synthetic.hpp"

namespace roml {

struct InlierMask;

// Fraction of ground-truth selections reproduced, sum_k ||P^k o P^k*||_0 /
// sum_k ||P^k*||_0. Slots are matched to ground-truth slots by the
// permutation that maximizes the count, so the result does not depend on the
// slot order of either input.
double recovery_rate(const std::vector<PartialPermutation>& found,
                     const std::vector<PartialPermutation>& truth);

struct MatchRatios {
  double match = 0.0;
  double identification = 0.0;
};

// Pairwise counting over all K(K-1)/2 image pairs: for each pair, n found
// correspondences, n_bar of them ground-truth correspondences and n_star
// ground-truth correspondences available. Returns sum n_bar / sum n and
// sum n_bar / sum n_star.
MatchRatios match_identification_ratios(
    const std::vector<PartialPermutation>& found, const GroundTruth& truth);

struct PrecisionRecall {
  double precision = 0.0;
  double recall = 0.0;
};

// Precision: detected true inliers over detected features. Recall: detected
// true inliers over all true inliers in the K images. With nothing
// detected, precision is 1 and recall 0.
PrecisionRecall detection_precision_recall(
    const InlierMask& mask, const GroundTruth& truth,
    const std::vector<PartialPermutation>& found);

}  // namespace roml
