#pragma once

#include <algorithm>
#include <vector>

#include "roml/features.hpp"
#include "roml/random.hpp"

namespace roml::testing {

inline Matrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols,
                            double scale = 1.0) {
  return scale * rng.normal_matrix(rows, cols);
}

// Entries of a random matrix with Frobenius norm exactly `radius`.
inline Matrix random_direction(Rng& rng, Eigen::Index rows, Eigen::Index cols,
                               double radius) {
  Matrix m = rng.normal_matrix(rows, cols);
  return m * (radius / m.norm());
}

inline PartialPermutation random_ppm(Rng& rng, int n_sources, int n) {
  PartialPermutation p;
  p.n_sources = n_sources;
  p.target_to_source = rng.sample_without_replacement(n_sources, n);
  return p;
}

inline FeatureSet random_set(Rng& rng, int d, int n_k, const std::string& id) {
  FeatureSet fs;
  fs.features = rng.normal_matrix(d, n_k);
  fs.image_id = id;
  return fs;
}

// K unit-norm sets whose first n columns hold the same n vectors (in a
// random order per image) and whose remaining columns are fresh outliers.
struct Planted {
  std::vector<FeatureSet> sets;
  std::vector<PartialPermutation> truth;
};

inline Planted planted_instance(std::uint64_t seed, int K, int n, int n_k,
                                int d) {
  Rng rng(seed);
  const Matrix inliers = rng.normal_matrix(d, n);
  Planted out;
  for (int k = 0; k < K; ++k) {
    FeatureSet fs;
    fs.image_id = "g" + std::to_string(k);
    fs.features = rng.normal_matrix(d, n_k);
    std::vector<int> cols(n_k);
    for (int i = 0; i < n_k; ++i) cols[i] = i;
    rng.shuffle(cols);
    PartialPermutation p;
    p.n_sources = n_k;
    for (int j = 0; j < n; ++j) {
      fs.features.col(cols[j]) = inliers.col(j);
      p.target_to_source.push_back(cols[j]);
    }
    out.sets.push_back(normalize_features(fs, 1.0));
    out.truth.push_back(std::move(p));
  }
  return out;
}

inline std::vector<std::vector<int>> all_injections(int n_sources, int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::vector<char> used(n_sources, 0);
  auto rec = [&](auto&& self) -> void {
    if (static_cast<int>(cur.size()) == n) {
      out.push_back(cur);
      return;
    }
    for (int i = 0; i < n_sources; ++i) {
      if (used[i]) continue;
      used[i] = 1;
      cur.push_back(i);
      self(self);
      cur.pop_back();
      used[i] = 0;
    }
  };
  rec(rec);
  return out;
}

}  // namespace roml::testing
