#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "roml/features.hpp"

namespace roml {

// Fixed-first-frame tracking: image 0's selection is pinned to the labelled
// inliers and only images 1..K-1 are optimized.
struct TrackingOptions {
  PartialPermutation fixed_first;
  // Norm multiplier applied to image 0 by emphasize_first. The solver itself
  // only pins the permutation; callers apply the emphasis to the inputs.
  double emphasis_factor = 2.0;
};

struct RomlConfig {
  // Assumed number of inliers per image.
  int n = 0;
  // Unset means the mode default: 5/sqrt(d n) (descriptor) or 5/sqrt(2K)
  // (coordinate).
  std::optional<double> lambda;
  // Unset means 1e-4 (descriptor) or 1e-6 (coordinate).
  std::optional<double> rho0;
  // Unset means 1.001 (descriptor) or 1.0001 (coordinate).
  std::optional<double> rho_factor;
  double rho_max = 1e10;
  int max_iters = 5000;
  // Stop once ||L + E - D||_F / ||D||_F < primal_tol and the permutations
  // have not changed for stable_iters consecutive iterations.
  double primal_tol = 1e-7;
  int stable_iters = 50;
  StackingMode mode = StackingMode::kDescriptor;
  std::uint64_t seed = 0;
  std::optional<TrackingOptions> tracking;
  // Worker threads for the K independent assignment subproblems.
  int threads = 1;
};

// Parameters after mode defaults have been applied.
struct ResolvedParameters {
  double lambda = 0.0;
  double rho0 = 0.0;
  double rho_factor = 0.0;
};

double default_lambda(StackingMode mode, int d, int n, int k_images);
ResolvedParameters resolve_parameters(const RomlConfig& config, int d,
                                      int k_images);

// ADMM iterate. All four matrices share the shape of D.
struct SolverState {
  Matrix L;
  Matrix E;
  Matrix Y;
  Matrix D;
  double rho = 0.0;
  int iteration = 0;
  std::vector<PartialPermutation> ppms;
};

struct ResidualNorms {
  double primal = 0.0;  // ||L + E - D||_F
  double dual_l = 0.0;  // rho ||(E + D)_prev - (E + D)_curr||_F
  double dual_e = 0.0;  // rho ||D_prev - D_curr||_F
  // primal / ||D||_F, or primal itself when D vanishes.
  double relative_primal = 0.0;
};

struct MatchReport {
  std::vector<PartialPermutation> ppms;  // canonicalized
  Matrix L;
  Matrix E;
  Matrix D;  // assembled from the canonicalized permutations
  std::vector<ResidualNorms> residual_history;
  std::vector<double> objective_history;  // ||L||_* + lambda ||E||_1
  bool converged = false;
  int iterations_used = 0;
  ResolvedParameters parameters;
  double final_rho = 0.0;
};

// L update: singular value thresholding of D - E - Y/rho at 1/rho.
Matrix update_l(const SolverState& state);

// E update: soft thresholding of D - L - Y/rho at lambda/rho.
Matrix update_e(const SolverState& state, double lambda);

// n_k x n assignment cost for image k. With V = Y + rho (L + E):
//   descriptor mode: cost(i, j) = -<v_j, f_i>, v_j the j-th d-block of
//     column k of V. Under equal column norms this is the exact permutation
//     subproblem; the quadratic term is constant.
//   coordinate mode: cost(i, j) = rho/2 ||f_i||^2 - <w_j, f_i>, w_j column j
//     of the 2 x n row block of image k in V. The squared norm is separable
//     over the selection, so the subproblem stays an exact assignment
//     problem without normalization.
Matrix build_ppm_cost(int k, const SolverState& state, const FeatureSet& fs,
                      StackingMode mode = StackingMode::kDescriptor);

// Solves every image's assignment subproblem against the current L, E, Y.
std::vector<PartialPermutation> update_ppms(const SolverState& state,
                                            const std::vector<FeatureSet>& sets,
                                            const RomlConfig& config);

// Dual ascent Y + rho (L + E - D); D must already reflect the new
// permutations.
Matrix update_y(const SolverState& state);

// Residual norms between consecutive iterates, using curr.rho.
ResidualNorms residuals(const SolverState& prev, const SolverState& curr);

// ||L||_* + lambda ||E||_1 + rho/2 ||L + E - D + Y/rho||_F^2.
double augmented_lagrangian(const SolverState& state, double lambda);

// Checks the solver preconditions and builds the iteration-0 state:
// L = E = Y = 0, seeded random feasible permutations, rho = rho0.
SolverState initial_state(const std::vector<FeatureSet>& sets,
                          const RomlConfig& config);

// Runs the full ADMM loop: L, E, permutation and multiplier updates with
// rho growing geometrically (capped at rho_max).
MatchReport solve_roml(const std::vector<FeatureSet>& sets,
                       const RomlConfig& config);

}  // namespace roml
