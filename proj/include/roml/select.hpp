#pragma once

#include <Eigen/Core>
#include <vector>

#include "roml/rpca.hpp"
#include "roml/solver.hpp"

namespace roml {

struct CorrespondenceNuclear {
  // ||D_j||_* for each d x K correspondence block D_j of D.
  std::vector<double> per_slot;
  // max_j per_slot[j].
  double gamma_n = 0.0;
};

CorrespondenceNuclear per_correspondence_nuclear(const Matrix& D, int d,
                                                 int n);

struct InlierCountEstimate {
  int n_hat = 0;
  // False when no n up to n_max triggered the stepping condition; n_hat is
  // then n_max.
  bool found = false;
  // gamma_1, gamma_2, ... for every n that was solved.
  std::vector<double> gamma_series;
  // Running means gamma_bar_n over the same range.
  std::vector<double> gamma_bar_series;
};

inline constexpr double kDefaultStepDelta = 0.05;

// Solves ROML for n = 1, 2, ... (each from scratch) and returns the first n
// with (gamma_{n+1} - gamma_bar_n) / gamma_bar_n > delta, where gamma_bar_n
// is the mean of gamma_1..gamma_n. base_config.n is ignored and lambda is
// re-derived for every n unless base_config.lambda is set. n_max of 0 means
// min_k n_k - 1, the largest n whose test can be evaluated.
InlierCountEstimate estimate_inlier_count(const std::vector<FeatureSet>& sets,
                                          const RomlConfig& base_config,
                                          double delta = kDefaultStepDelta,
                                          int n_max = 0);

inline constexpr double kDefaultInlierXi = 4.0;

struct InlierMask {
  // detected(j, k): slot j of image k is declared a true inlier.
  Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic> detected;
  // l1 norm of the d-block of the RPCA error for slot j, image k.
  Matrix error_l1;
  bool rpca_converged = false;
};

// Decomposes D by principal component pursuit with lambda = 1/sqrt(d n) and
// marks slot j of image k as a true inlier when its error block has l1 norm
// below xi. Assumes unit-norm features.
InlierMask detect_true_inliers(const Matrix& D, int d, int n,
                               double xi = kDefaultInlierXi,
                               const RpcaConfig& rpca = {});

}  // namespace roml
