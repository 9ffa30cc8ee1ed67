#include "roml/rpca.hpp"

#include <algorithm>
#include <cmath>

#include "roml/errors.hpp"

namespace roml {

RpcaResult solve_rpca(const Matrix& D, const RpcaConfig& config) {
  require_finite(D, "rpca input");
  if (D.size() == 0) throw DimensionError("rpca input is empty");
  if (!(config.rho0 > 0.0) || !(config.rho_factor >= 1.0) ||
      config.max_iters < 1 || !(config.tol > 0.0)) {
    throw ConfigError("rpca needs rho0 > 0, rho_factor >= 1, max_iters >= 1 "
                      "and tol > 0");
  }
  RpcaResult out;
  out.lambda =
      config.lambda.value_or(1.0 / std::sqrt(static_cast<double>(D.rows())));
  if (!(out.lambda > 0.0)) throw ConfigError("rpca lambda must be positive");

  out.L = Matrix::Zero(D.rows(), D.cols());
  out.E = out.L;
  const double d_norm = D.norm();
  if (d_norm == 0.0) {
    out.converged = true;
    return out;
  }

  Matrix Y = Matrix::Zero(D.rows(), D.cols());
  double rho = config.rho0;
  for (int t = 0; t < config.max_iters; ++t) {
    out.L = svt(D - out.E - Y / rho, 1.0 / rho).low_rank;
    out.E = soft_threshold(D - out.L - Y / rho, out.lambda / rho);
    const Matrix residual = out.L + out.E - D;
    Y += rho * residual;
    out.iterations = t + 1;
    if (!Y.allFinite()) throw NumericError("rpca diverged", t + 1);
    if (residual.norm() / d_norm < config.tol) {
      out.converged = true;
      break;
    }
    rho = std::min(rho * config.rho_factor, config.rho_max);
  }
  return out;
}

}  // namespace roml
