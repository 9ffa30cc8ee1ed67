#include "roml/embed.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

#include "roml/errors.hpp"

namespace roml {
namespace {

constexpr double kTrivialEigenvalueRatio = 1e-9;
constexpr double kSymmetryTolerance = 1e-12;

Matrix gaussian_kernel(const Matrix& x, const Matrix& y, double sigma) {
  const Vector xx = x.colwise().squaredNorm().transpose();
  const Vector yy = y.colwise().squaredNorm().transpose();
  Matrix sq = -2.0 * x.transpose() * y;
  sq.colwise() += xx;
  sq.rowwise() += yy.transpose();
  // Cancellation can leave tiny negative distances.
  sq = sq.cwiseMax(0.0);
  return (-sq / (2.0 * sigma * sigma)).array().exp().matrix();
}

void check_sigma(double sigma, const char* name) {
  if (!(sigma > 0.0) || !std::isfinite(sigma)) {
    throw InvalidInputError(std::string(name) + " must be positive");
  }
}

void check_point_set(const PointSet& ps) {
  if (ps.coords.rows() != 2) {
    throw DimensionError("point set '" + ps.image_id +
                         "' coordinates must be 2 x n_k");
  }
  if (ps.descriptors.cols() != ps.coords.cols()) {
    std::ostringstream os;
    os << "point set '" << ps.image_id << "' has " << ps.coords.cols()
       << " points but " << ps.descriptors.cols() << " descriptors";
    throw DimensionError(os.str());
  }
  require_finite(ps.coords, "point coordinates");
  require_finite(ps.descriptors, "point descriptors");
}

}  // namespace

Matrix spatial_affinity(const PointSet& ps, double sigma_spa) {
  check_sigma(sigma_spa, "sigma_spa");
  check_point_set(ps);
  Matrix a = gaussian_kernel(ps.coords, ps.coords, sigma_spa);
  a.triangularView<Eigen::StrictlyLower>() = a.transpose();
  a.diagonal().setOnes();
  return a;
}

Matrix descriptor_affinity(const PointSet& p, const PointSet& q,
                           double sigma_des) {
  check_sigma(sigma_des, "sigma_des");
  check_point_set(p);
  check_point_set(q);
  if (p.descriptors.rows() != q.descriptors.rows()) {
    std::ostringstream os;
    os << "descriptor dimension mismatch: '" << p.image_id << "' has "
       << p.descriptors.rows() << ", '" << q.image_id << "' has "
       << q.descriptors.rows();
    throw DimensionError(os.str());
  }
  return gaussian_kernel(p.descriptors, q.descriptors, sigma_des);
}

AffinityMatrix build_affinity(const std::vector<PointSet>& images,
                              double sigma_spa, double sigma_des) {
  if (images.empty()) throw InvalidInputError("no images to embed");
  AffinityMatrix out;
  out.offsets.push_back(0);
  for (const auto& ps : images) {
    check_point_set(ps);
    out.offsets.push_back(out.offsets.back() + ps.size());
  }
  const int N = out.offsets.back();
  out.A.resize(N, N);
  for (std::size_t p = 0; p < images.size(); ++p) {
    const int rp = out.offsets[p];
    out.A.block(rp, rp, images[p].size(), images[p].size()) =
        spatial_affinity(images[p], sigma_spa);
    for (std::size_t q = p + 1; q < images.size(); ++q) {
      const int rq = out.offsets[q];
      const Matrix block = descriptor_affinity(images[p], images[q], sigma_des);
      out.A.block(rp, rq, block.rows(), block.cols()) = block;
      out.A.block(rq, rp, block.cols(), block.rows()) = block.transpose();
    }
  }
  return out;
}

Embedding laplacian_embed(const AffinityMatrix& affinity, int d) {
  const Matrix& A = affinity.A;
  const Eigen::Index N = A.rows();
  if (d < 1) throw InvalidInputError("embedding dimension must be positive");
  if (A.cols() != N || affinity.offsets.empty() ||
      affinity.offsets.front() != 0 || affinity.offsets.back() != N) {
    throw DimensionError("affinity matrix and image offsets disagree");
  }
  require_finite(A, "affinity matrix");
  if ((A - A.transpose()).cwiseAbs().maxCoeff() > kSymmetryTolerance) {
    throw InvalidInputError("affinity matrix is not symmetric");
  }
  if (A.minCoeff() < 0.0) {
    throw InvalidInputError("affinity matrix has negative entries");
  }
  const Vector degree = A.rowwise().sum();
  for (Eigen::Index i = 0; i < N; ++i) {
    if (!(degree(i) > 0.0)) {
      std::ostringstream os;
      os << "point " << i << " has no affinity to any point";
      throw InvalidInputError(os.str());
    }
  }

  const Vector inv_sqrt = degree.cwiseSqrt().cwiseInverse();
  // D^{-1/2} (D - A) D^{-1/2} = I - D^{-1/2} A D^{-1/2}.
  Matrix m = -(inv_sqrt.asDiagonal() * A * inv_sqrt.asDiagonal());
  m.diagonal().array() += 1.0;
  m = 0.5 * (m + m.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(m);
  if (solver.info() != Eigen::Success) {
    throw NumericError("generalized eigen-decomposition failed");
  }
  const Vector& beta = solver.eigenvalues();
  const double cutoff = kTrivialEigenvalueRatio * beta.maxCoeff();
  Eigen::Index first = 0;
  while (first < N && beta(first) <= cutoff) ++first;
  if (N - first < d) {
    std::ostringstream os;
    os << "only " << N - first << " nontrivial generalized eigenvalues, "
       << d << " requested";
    throw InsufficientSpectrumError(os.str());
  }

  Embedding out;
  out.eigenvalues = beta.segment(first, d);
  out.stacked = inv_sqrt.asDiagonal() * solver.eigenvectors().middleCols(first, d);
  for (int c = 0; c < d; ++c) {
    Eigen::Index arg = 0;
    out.stacked.col(c).cwiseAbs().maxCoeff(&arg);
    if (out.stacked(arg, c) < 0.0) out.stacked.col(c) *= -1.0;
  }
  for (std::size_t k = 0; k + 1 < affinity.offsets.size(); ++k) {
    FeatureSet fs;
    fs.image_id = "image" + std::to_string(k);
    const int rows = affinity.offsets[k + 1] - affinity.offsets[k];
    fs.features = out.stacked.middleRows(affinity.offsets[k], rows).transpose();
    out.sets.push_back(std::move(fs));
  }
  return out;
}

}  // namespace roml
