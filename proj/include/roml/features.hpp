#pragma once

#include <optional>
#include <string>
#include <vector>

#include "roml/lsap.hpp"
#include "roml/prox.hpp"

namespace roml {

// The d x n_k feature matrix of one image; column i is feature f_i.
struct FeatureSet {
  Matrix features;
  std::string image_id;
  // Common l2 norm of every column, set by normalize_features.
  std::optional<double> norm_constant;

  int dim() const { return static_cast<int>(features.rows()); }
  int size() const { return static_cast<int>(features.cols()); }
};

// Dense encoding of an n_k x n partial permutation matrix P: target slot j
// selects source column target_to_source[j]. The binary matrix is only
// built on request.
struct PartialPermutation {
  int n_sources = 0;
  std::vector<int> target_to_source;

  int n_targets() const { return static_cast<int>(target_to_source.size()); }
  // Column sums equal one and row sums are at most one.
  bool is_valid() const;
  Matrix to_matrix() const;

  friend bool operator==(const PartialPermutation&,
                         const PartialPermutation&) = default;
};

enum class StackingMode {
  // D is dn x K; column k is vec(F^k P^k).
  kDescriptor,
  // D is 2K x n; rows 2k, 2k+1 hold the coordinates F^k P^k.
  kCoordinate,
};

const char* to_string(StackingMode mode);
StackingMode parse_stacking_mode(const std::string& name);

// Validates shape and finiteness; throws DimensionError/InvalidInputError.
void validate_feature_set(const FeatureSet& fs);

// Rescales every column to l2 norm `c`. Throws DegenerateFeatureError on a
// zero column.
FeatureSet normalize_features(const FeatureSet& fs, double c);

// Normalizes image 0 to norm factor * c and every other image to c.
std::vector<FeatureSet> emphasize_first(const std::vector<FeatureSet>& sets,
                                        double factor, double c = 1.0);

// Translates each image's coordinates so their centroid is the origin.
FeatureSet center_columns(const FeatureSet& fs);

// F P: the selected columns in slot order.
Matrix select_columns(const FeatureSet& fs, const PartialPermutation& ppm);

// Stacked data matrix for the given selections.
Matrix assemble_d(const std::vector<FeatureSet>& sets,
                  const std::vector<PartialPermutation>& ppms,
                  StackingMode mode);

// Reorders all target slots by one common permutation so that image 0's
// selected source indices ascend. Correspondences across images (which
// sources share a slot) are untouched.
std::vector<PartialPermutation> canonicalize(
    const std::vector<PartialPermutation>& ppms);

// The common slot order used by canonicalize: canonical slot j is original
// slot order[j].
std::vector<int> canonical_slot_order(
    const std::vector<PartialPermutation>& ppms);

// Applies a slot order to a stacked matrix: d-row blocks in descriptor mode,
// columns in coordinate mode.
Matrix permute_slots(const Matrix& stacked, const std::vector<int>& order,
                     StackingMode mode);

// The identity selection of the first n columns.
PartialPermutation first_n(int n_sources, int n);

PartialPermutation from_assignment(const Assignment& a, int n_sources);

}  // namespace roml
