#pragma once

#include <cstdint>
#include <vector>

#include "roml/features.hpp"

namespace roml {

// Synthetic multi-image feature data: n inlier vectors shared by all K
// groups, independent outliers per group, sparse large-magnitude errors and
// optionally some inliers replaced by fresh outliers.
struct SyntheticSpec {
  int K = 30;
  int n = 10;
  int n_k = 42;
  int d = 50;
  // Fraction of coordinates corrupted in every vector; floor(ratio * d).
  double sparse_error_ratio = 0.0;
  // Fraction of inliers per group replaced by outliers; floor(ratio * n).
  double missing_inlier_ratio = 0.0;
  std::uint64_t seed = 0;
};

struct GroundTruth {
  // Slot j of image k selects the column holding inlier j (or the outlier
  // that replaced it when that inlier is missing from the image).
  std::vector<PartialPermutation> ppms;
  // inlier_ids[k][i] is the shared inlier index of column i of image k, or
  // -1 for an outlier.
  std::vector<std::vector<int>> inlier_ids;

  bool is_inlier(int k, int i) const { return inlier_ids[k][i] >= 0; }
  int total_inliers() const;
};

using CorruptionMask = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct SyntheticData {
  std::vector<FeatureSet> sets;
  GroundTruth truth;
  // Per image, d x n_k: true where a sparse error was added. Empty for
  // coordinate data.
  std::vector<CorruptionMask> corrupted;
};

// floor(ratio * count) with a guard against representation error.
int fraction_count(double ratio, int count);

// Columns are unit l2 norm and shuffled within each group.
SyntheticData generate(const SyntheticSpec& spec);

// Image coordinates of a random rigid 3-D point cloud under K random
// rotations and translations with orthographic projection, plus uniformly
// placed outlier points. The correctly stacked 2K x n coordinate matrix has
// rank at most 4 when noise_sd = 0.
SyntheticData generate_rank4_coords(int K, int n, int n_outliers,
                                    double noise_sd, std::uint64_t seed);

}  // namespace roml
