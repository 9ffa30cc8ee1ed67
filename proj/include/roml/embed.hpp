#pragma once

#include <vector>

#include "roml/features.hpp"

namespace roml {

// Interest points of one image: coordinates (2 x n_k) and region
// descriptors (d_raw x n_k).
struct PointSet {
  Matrix coords;
  Matrix descriptors;
  std::string image_id;

  int size() const { return static_cast<int>(coords.cols()); }
};

// Joint affinity over all N = sum n_k points. Rows offsets[k] ..
// offsets[k+1]-1 belong to image k.
struct AffinityMatrix {
  Matrix A;
  std::vector<int> offsets;
};

inline constexpr double kDefaultSigmaSpatial = 10.0;
inline constexpr double kDefaultSigmaDescriptor = 0.2;

// exp(-||x_i - x_j||^2 / (2 sigma^2)) over the image coordinates.
Matrix spatial_affinity(const PointSet& ps, double sigma_spa);

// exp(-||f_i^p - f_j^q||^2 / (2 sigma^2)) over the descriptors.
Matrix descriptor_affinity(const PointSet& p, const PointSet& q,
                           double sigma_des);

// Spatial kernels on the diagonal blocks, descriptor kernels elsewhere.
AffinityMatrix build_affinity(const std::vector<PointSet>& images,
                              double sigma_spa = kDefaultSigmaSpatial,
                              double sigma_des = kDefaultSigmaDescriptor);

struct Embedding {
  // One d x n_k feature set per image.
  std::vector<FeatureSet> sets;
  // Generalized eigenvalues of the selected eigenvectors, ascending.
  Vector eigenvalues;
  // N x d stacked embedding, F^T D F = I.
  Matrix stacked;
};

// Laplacian eigenmaps: the bottom d generalized eigenvectors of
// (D_A - A) f = beta D_A f, skipping eigenvalues at or below 1e-9 beta_max
// (one per connected component). Computed through the symmetric matrix
// D_A^{-1/2} (D_A - A) D_A^{-1/2}. Each eigenvector's largest-magnitude
// entry is made positive. Throws InsufficientSpectrumError when fewer than d
// nontrivial eigenvalues exist and InvalidInputError on an isolated point.
Embedding laplacian_embed(const AffinityMatrix& affinity, int d);

}  // namespace roml
