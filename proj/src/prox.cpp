#include "roml/prox.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <sstream>
#include <string>

#include "roml/errors.hpp"

namespace roml {
namespace {

using Svd = Eigen::JacobiSVD<Matrix, Eigen::ColPivHouseholderQRPreconditioner>;

void check_svd(const Svd& svd, const Matrix& m) {
  if (svd.info() != Eigen::Success) {
    std::ostringstream os;
    os << "SVD of a " << m.rows() << "x" << m.cols()
       << " matrix failed to converge (Jacobi sweeps exhausted)";
    throw NumericError(os.str());
  }
}

void check_tau(double tau) {
  if (!(tau >= 0.0) || !std::isfinite(tau)) {
    throw InvalidInputError("threshold must be a finite nonnegative number");
  }
}

}  // namespace

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw InvalidInputError(std::string(what) + " contains NaN or Inf");
  }
}

Matrix soft_threshold(const Matrix& m, double tau) {
  check_tau(tau);
  require_finite(m, "soft_threshold input");
  return m.unaryExpr([tau](double x) {
    const double mag = std::abs(x) - tau;
    if (mag <= 0.0) return 0.0;
    return x > 0.0 ? mag : -mag;
  });
}

SvtResult svt(const Matrix& m, double tau) {
  check_tau(tau);
  require_finite(m, "svt input");
  SvtResult out;
  out.low_rank = Matrix::Zero(m.rows(), m.cols());
  if (m.size() == 0) return out;

  Svd svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  check_svd(svd, m);
  const Vector& s = svd.singularValues();
  int keep = 0;
  while (keep < s.size() && s(keep) > tau && s(keep) > kRankZeroTolerance) {
    ++keep;
  }
  out.effective_rank = keep;
  if (keep == 0) return out;
  const Vector shrunk = (s.head(keep).array() - tau).matrix();
  out.nuclear_norm = shrunk.sum();
  out.low_rank.noalias() = svd.matrixU().leftCols(keep) *
                           shrunk.asDiagonal() *
                           svd.matrixV().leftCols(keep).transpose();
  return out;
}

Vector singular_values(const Matrix& m) {
  require_finite(m, "singular value input");
  if (m.size() == 0) return Vector();
  Svd svd(m);
  check_svd(svd, m);
  return svd.singularValues();
}

double nuclear_norm(const Matrix& m) { return singular_values(m).sum(); }

double spectral_norm(const Matrix& m) {
  const Vector s = singular_values(m);
  return s.size() == 0 ? 0.0 : s(0);
}

}  // namespace roml
