#pragma once

#include <Eigen/Core>

namespace roml {

// Dense matrices are Eigen column-major double matrices throughout the
// library. Column-major storage makes vec(F P) a plain reinterpretation.
using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

// Singular values at or below this are counted as zero for effective rank.
inline constexpr double kRankZeroTolerance = 1e-12;

// Throws InvalidInputError when any entry of `m` is NaN or infinite.
void require_finite(const Matrix& m, const char* what);

// Element-wise shrinkage sign(x) * max(|x| - tau, 0), the proximal map of
// tau * ||.||_1.
Matrix soft_threshold(const Matrix& m, double tau);

struct SvtResult {
  Matrix low_rank;
  int effective_rank = 0;
  // Nuclear norm of low_rank, i.e. the sum of the shrunk singular values.
  double nuclear_norm = 0.0;
};

// Singular value thresholding: the minimizer of
//   tau * ||L||_* + 0.5 * ||L - M||_F^2
// computed from a thin SVD of `m`. effective_rank counts singular values
// strictly greater than tau (and above kRankZeroTolerance).
SvtResult svt(const Matrix& m, double tau);

// Sum of singular values.
double nuclear_norm(const Matrix& m);

// Largest singular value.
double spectral_norm(const Matrix& m);

// Singular values in descending order.
Vector singular_values(const Matrix& m);

}  // namespace roml
