#pragma once

#include <optional>

#include "roml/prox.hpp"

namespace roml {

struct RpcaConfig {
  // Defaults to 1/sqrt(rows of D).
  std::optional<double> lambda;
  double rho0 = 1e-4;
  double rho_factor = 1.05;
  double rho_max = 1e10;
  int max_iters = 5000;
  // Stop once ||D - L - E||_F / ||D||_F < tol.
  double tol = 1e-7;
};

struct RpcaResult {
  Matrix L;
  Matrix E;
  int iterations = 0;
  bool converged = false;
  double lambda = 0.0;
};

// Principal component pursuit, min ||L||_* + lambda ||E||_1 s.t. D = L + E,
// by the augmented Lagrangian method with a growing penalty. Running out of
// iterations is reported through `converged`, not thrown.
RpcaResult solve_rpca(const Matrix& D, const RpcaConfig& config = {});

}  // namespace roml
