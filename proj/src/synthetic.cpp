#include "roml/synthetic.hpp"

#include <Eigen/Geometry>

#include <cmath>
#include <numeric>
#include <sstream>

#include "roml/errors.hpp"
#include "roml/random.hpp"

namespace roml {
namespace {

void validate(const SyntheticSpec& spec) {
  if (spec.K < 1 || spec.n < 1 || spec.d < 1 || spec.n_k < spec.n) {
    std::ostringstream os;
    os << "invalid synthetic spec: K=" << spec.K << " n=" << spec.n
       << " n_k=" << spec.n_k << " d=" << spec.d;
    throw InvalidInputError(os.str());
  }
  for (double r : {spec.sparse_error_ratio, spec.missing_inlier_ratio}) {
    if (!(r >= 0.0 && r <= 1.0)) {
      throw InvalidInputError("synthetic ratios must lie in [0, 1]");
    }
  }
}

// Adds uniform errors in [-2 max|f|, 2 max|f|] to `count` distinct
// coordinates; the bound is taken from the clean vector.
std::vector<int> corrupt(Eigen::Ref<Vector> f, int count, Rng& rng) {
  if (count == 0) return {};
  const double bound = 2.0 * f.cwiseAbs().maxCoeff();
  std::vector<int> picked =
      rng.sample_without_replacement(static_cast<int>(f.size()), count);
  for (int idx : picked) f(idx) += rng.uniform(-bound, bound);
  return picked;
}

// Shuffles columns of `features` in place and returns where each original
// column ended up.
std::vector<int> shuffle_columns(Matrix& features, Rng& rng) {
  const int cols = static_cast<int>(features.cols());
  std::vector<int> order(cols);
  std::iota(order.begin(), order.end(), 0);
  rng.shuffle(order);
  Matrix shuffled(features.rows(), cols);
  std::vector<int> position(cols);
  for (int p = 0; p < cols; ++p) {
    shuffled.col(p) = features.col(order[p]);
    position[order[p]] = p;
  }
  features = std::move(shuffled);
  return position;
}

}  // namespace

int GroundTruth::total_inliers() const {
  int total = 0;
  for (const auto& ids : inlier_ids) {
    for (int id : ids) total += id >= 0 ? 1 : 0;
  }
  return total;
}

int fraction_count(double ratio, int count) {
  return static_cast<int>(std::floor(ratio * count + 1e-9));
}

SyntheticData generate(const SyntheticSpec& spec) {
  validate(spec);
  Rng rng(spec.seed);
  const Matrix inliers = rng.normal_matrix(spec.d, spec.n);
  const int corrupted = fraction_count(spec.sparse_error_ratio, spec.d);
  const int missing = fraction_count(spec.missing_inlier_ratio, spec.n);

  SyntheticData data;
  data.sets.reserve(spec.K);
  for (int k = 0; k < spec.K; ++k) {
    Matrix f(spec.d, spec.n_k);
    std::vector<int> ids(spec.n_k, -1);
    f.leftCols(spec.n) = inliers;
    std::iota(ids.begin(), ids.begin() + spec.n, 0);
    f.rightCols(spec.n_k - spec.n) =
        rng.normal_matrix(spec.d, spec.n_k - spec.n);
    for (int slot : rng.sample_without_replacement(spec.n, missing)) {
      for (int r = 0; r < spec.d; ++r) f(r, slot) = rng.normal();
      ids[slot] = -1;
    }
    CorruptionMask mask = CorruptionMask::Zero(spec.d, spec.n_k);
    for (int c = 0; c < spec.n_k; ++c) {
      for (int r : corrupt(f.col(c), corrupted, rng)) mask(r, c) = true;
    }

    FeatureSet fs;
    fs.image_id = "g" + std::to_string(k);
    const std::vector<int> position = shuffle_columns(f, rng);
    CorruptionMask shuffled_mask(spec.d, spec.n_k);
    for (int c = 0; c < spec.n_k; ++c) {
      shuffled_mask.col(position[c]) = mask.col(c);
    }
    data.corrupted.push_back(std::move(shuffled_mask));
    fs.features = std::move(f);
    data.sets.push_back(normalize_features(fs, 1.0));

    PartialPermutation truth;
    truth.n_sources = spec.n_k;
    std::vector<int> shuffled_ids(spec.n_k, -1);
    for (int c = 0; c < spec.n_k; ++c) shuffled_ids[position[c]] = ids[c];
    for (int j = 0; j < spec.n; ++j) {
      truth.target_to_source.push_back(position[j]);
    }
    data.truth.ppms.push_back(std::move(truth));
    data.truth.inlier_ids.push_back(std::move(shuffled_ids));
  }
  return data;
}

SyntheticData generate_rank4_coords(int K, int n, int n_outliers,
                                    double noise_sd, std::uint64_t seed) {
  if (K < 1 || n < 4 || n_outliers < 0 || !(noise_sd >= 0.0)) {
    throw InvalidInputError(
        "generate_rank4_coords needs K >= 1, n >= 4, n_outliers >= 0 and "
        "noise_sd >= 0");
  }
  constexpr double kShapeScale = 50.0;
  constexpr double kTranslation = 20.0;
  Rng rng(seed);
  const Eigen::Matrix3Xd shape = kShapeScale * rng.normal_matrix(3, n);

  SyntheticData data;
  for (int k = 0; k < K; ++k) {
    // Uniform random rotation from a normalized Gaussian quaternion.
    Eigen::Quaterniond q(rng.normal(), rng.normal(), rng.normal(),
                         rng.normal());
    q.normalize();
    const Eigen::Matrix<double, 2, 3> proj =
        q.toRotationMatrix().topRows<2>();
    const Eigen::Vector2d shift(rng.uniform(-kTranslation, kTranslation),
                                rng.uniform(-kTranslation, kTranslation));

    Matrix f(2, n + n_outliers);
    f.leftCols(n) = (proj * shape).colwise() + shift;
    for (int c = 0; c < n; ++c) {
      for (int r = 0; r < 2; ++r) f(r, c) += noise_sd * rng.normal();
    }
    const Eigen::Vector2d lo = f.leftCols(n).rowwise().minCoeff();
    const Eigen::Vector2d hi = f.leftCols(n).rowwise().maxCoeff();
    for (int c = n; c < n + n_outliers; ++c) {
      f(0, c) = rng.uniform(lo(0), hi(0));
      f(1, c) = rng.uniform(lo(1), hi(1));
    }

    std::vector<int> ids(n + n_outliers, -1);
    std::iota(ids.begin(), ids.begin() + n, 0);
    const std::vector<int> position = shuffle_columns(f, rng);
    FeatureSet fs;
    fs.image_id = "frame" + std::to_string(k);
    fs.features = std::move(f);
    data.sets.push_back(std::move(fs));

    PartialPermutation truth;
    truth.n_sources = n + n_outliers;
    std::vector<int> shuffled_ids(n + n_outliers, -1);
    for (std::size_t c = 0; c < ids.size(); ++c) {
      shuffled_ids[position[c]] = ids[c];
    }
    for (int j = 0; j < n; ++j) truth.target_to_source.push_back(position[j]);
    data.truth.ppms.push_back(std::move(truth));
    data.truth.inlier_ids.push_back(std::move(shuffled_ids));
  }
  return data;
}

}  // namespace roml
