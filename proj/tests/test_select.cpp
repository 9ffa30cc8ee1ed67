#include <gtest/gtest.h>

#include <cmath>

#include "roml/errors.hpp"
#include "roml/rpca.hpp"
#include "roml/select.hpp"
#include "support.hpp"

namespace roml {
namespace {

using testing::planted_instance;
using testing::random_direction;

double pcp_objective(const Matrix& L, const Matrix& E, double lambda) {
  return nuclear_norm(L) + lambda * E.cwiseAbs().sum();
}

Matrix low_rank(Rng& rng, int rows, int cols, int rank) {
  return rng.normal_matrix(rows, rank) * rng.normal_matrix(rank, cols);
}

TEST(Rpca, LowRankInputHasNoSparsePart) {
  Rng rng(41);
  const Matrix D = low_rank(rng, 20, 15, 1);
  const RpcaResult r = solve_rpca(D);
  ASSERT_TRUE(r.converged);
  EXPECT_LT(r.E.norm(), 1e-3 * D.norm());
  EXPECT_LT((r.L - D).norm(), 1e-3 * D.norm());
  EXPECT_DOUBLE_EQ(r.lambda, 1.0 / std::sqrt(20.0));
}

TEST(Rpca, SeparatesRankTwoFromSparseCorruption) {
  Rng rng(42);
  const Matrix L0 = low_rank(rng, 50, 30, 2);
  Matrix S0 = Matrix::Zero(50, 30);
  for (int idx : rng.sample_without_replacement(50 * 30, 75)) {
    S0(idx % 50, idx / 50) = rng.uniform(-10.0, 10.0);
  }
  const RpcaResult r = solve_rpca(L0 + S0);
  ASSERT_TRUE(r.converged);
  EXPECT_LT((r.L - L0).norm() / L0.norm(), 1e-3);
  EXPECT_LT((r.E - S0).norm() / S0.norm(), 1e-3);
}

TEST(Rpca, ZeroInput) {
  const RpcaResult r = solve_rpca(Matrix::Zero(4, 3));
  EXPECT_TRUE(r.converged);
  EXPECT_TRUE(r.L.isZero(0.0));
  EXPECT_TRUE(r.E.isZero(0.0));
}

TEST(Rpca, BeatsTrivialAndPerturbedSplits) {
  Rng rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    Matrix D = low_rank(rng, 12, 10, 2);
    D(rng.uniform_int(12), rng.uniform_int(10)) += 5.0;
    const RpcaResult r = solve_rpca(D);
    ASSERT_TRUE(r.converged);
    EXPECT_LT((r.L + r.E - D).norm(), 1e-6 * D.norm());
    const double obj = pcp_objective(r.L, r.E, r.lambda);
    EXPECT_LE(obj, nuclear_norm(D) + 1e-5);
    EXPECT_LE(obj, r.lambda * D.cwiseAbs().sum() + 1e-5);
    for (int p = 0; p < 200; ++p) {
      const Matrix delta = random_direction(rng, 12, 10, rng.uniform(0.0, 0.1));
      EXPECT_LE(obj, pcp_objective(r.L + delta, r.E - delta, r.lambda) + 1e-5);
    }
  }
}

TEST(Rpca, ReportsIterationBudget) {
  Rng rng(44);
  RpcaConfig config;
  config.max_iters = 3;
  const RpcaResult r = solve_rpca(low_rank(rng, 10, 10, 3), config);
  EXPECT_FALSE(r.converged);
  EXPECT_EQ(r.iterations, 3);
  config.rho0 = 0.0;
  EXPECT_THROW(solve_rpca(Matrix::Ones(2, 2), config), ConfigError);
  EXPECT_THROW(solve_rpca(Matrix(0, 0)), DimensionError);
}

TEST(PerCorrespondenceNuclear, Examples) {
  Rng rng(45);
  const Matrix D = rng.normal_matrix(4, 6);
  const auto one = per_correspondence_nuclear(D, 4, 1);
  ASSERT_EQ(one.per_slot.size(), 1u);
  EXPECT_NEAR(one.per_slot[0], nuclear_norm(D), 1e-12);
  EXPECT_EQ(one.gamma_n, one.per_slot[0]);

  // K copies of one unit vector form a rank-one block of norm sqrt(K).
  Vector u = rng.normal_matrix(3, 1);
  u.normalize();
  Matrix blocks(6, 5);
  for (int k = 0; k < 5; ++k) {
    blocks.col(k).head(3) = u;
    blocks.col(k).tail(3) = rng.normal_matrix(3, 1).normalized();
  }
  const auto two = per_correspondence_nuclear(blocks, 3, 2);
  EXPECT_NEAR(two.per_slot[0], std::sqrt(5.0), 1e-12);
  EXPECT_GT(two.per_slot[1], two.per_slot[0]);
  EXPECT_EQ(two.gamma_n, two.per_slot[1]);
  EXPECT_THROW(per_correspondence_nuclear(blocks, 4, 2), DimensionError);
}

RomlConfig estimation_config() {
  RomlConfig config;
  config.rho0 = 0.1;
  return config;
}

TEST(EstimateInlierCount, FindsPlantedCount) {
  const auto inst = planted_instance(300, 6, 3, 8, 20);
  const auto est = estimate_inlier_count(inst.sets, estimation_config(), 0.05, 6);
  EXPECT_TRUE(est.found);
  EXPECT_EQ(est.n_hat, 3);
  ASSERT_EQ(est.gamma_series.size(), 4u);
  for (int n = 1; n <= 3; ++n) {
    EXPECT_NEAR(est.gamma_series[n - 1], std::sqrt(6.0), 1e-6);
  }
  EXPECT_GT(est.gamma_series[3], 1.05 * std::sqrt(6.0));
}

// The first n whose successor steps above the running mean by delta.
int stepping_rule(const std::vector<double>& gamma, double delta) {
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < gamma.size(); ++i) {
    sum += gamma[i];
    const double bar = sum / static_cast<double>(i + 1);
    if ((gamma[i + 1] - bar) / bar > delta) return static_cast<int>(i + 1);
  }
  return -1;
}

TEST(EstimateInlierCount, StopsAtFirstStep) {
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const auto inst = planted_instance(340 + seed, 5, 2 + seed % 3, 6, 12);
    for (double delta : {0.01, 0.05, 0.2}) {
      const auto est = estimate_inlier_count(inst.sets, estimation_config(), delta);
      const int rule = stepping_rule(est.gamma_series, delta);
      if (est.found) {
        EXPECT_EQ(rule, est.n_hat);
        EXPECT_EQ(static_cast<int>(est.gamma_series.size()), est.n_hat + 1);
      } else {
        EXPECT_EQ(rule, -1);
        EXPECT_EQ(est.n_hat, 5);
        EXPECT_EQ(est.gamma_series.size(), 6u);
      }
    }
  }
}

TEST(EstimateInlierCount, RunningMeans) {
  const auto inst = planted_instance(310, 4, 2, 6, 10);
  const auto est = estimate_inlier_count(inst.sets, estimation_config(), 0.05, 5);
  ASSERT_EQ(est.gamma_series.size(), est.gamma_bar_series.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < est.gamma_series.size(); ++i) {
    sum += est.gamma_series[i];
    EXPECT_NEAR(est.gamma_bar_series[i], sum / static_cast<double>(i + 1),
                1e-12);
  }
}

TEST(EstimateInlierCount, ScaleInvariantWithMatchedPenalty) {
  const auto inst = planted_instance(320, 5, 3, 7, 12);
  std::vector<FeatureSet> scaled = inst.sets;
  for (auto& fs : scaled) {
    fs.features *= 4.0;
    fs.norm_constant = 4.0;
  }
  RomlConfig config = estimation_config();
  const auto a = estimate_inlier_count(inst.sets, config, 0.05, 5);
  config.rho0 = *config.rho0 / 4.0;
  const auto b = estimate_inlier_count(scaled, config, 0.05, 5);
  EXPECT_EQ(a.n_hat, b.n_hat);
  EXPECT_EQ(a.found, b.found);
  ASSERT_EQ(a.gamma_series.size(), b.gamma_series.size());
  for (std::size_t i = 0; i < a.gamma_series.size(); ++i) {
    EXPECT_NEAR(b.gamma_series[i], 4.0 * a.gamma_series[i],
                1e-9 * b.gamma_series[i]);
  }
  EXPECT_EQ(a.n_hat, 3);
}

TEST(EstimateInlierCount, ConfigErrors) {
  const auto inst = planted_instance(330, 3, 2, 4, 5);
  EXPECT_THROW(estimate_inlier_count(inst.sets, {}, 0.0), ConfigError);
  EXPECT_THROW(estimate_inlier_count(inst.sets, {}, 0.05, 5), ConfigError);
  EXPECT_THROW(estimate_inlier_count({}, {}), ConfigError);
  RomlConfig coord;
  coord.mode = StackingMode::kCoordinate;
  EXPECT_THROW(estimate_inlier_count(inst.sets, coord), ConfigError);
}

// d x K blocks, n of them, every block K copies of one unit vector.
Matrix consistent_d(Rng& rng, int d, int n, int K) {
  Matrix D(d * n, K);
  for (int j = 0; j < n; ++j) {
    Vector u = rng.normal_matrix(d, 1);
    u.normalize();
    for (int k = 0; k < K; ++k) D.block(j * d, k, d, 1) = u;
  }
  return D;
}

TEST(DetectTrueInliers, NoiselessInliersAllDetected) {
  Rng rng(46);
  const Matrix D = consistent_d(rng, 16, 4, 12);
  const InlierMask mask = detect_true_inliers(D, 16, 4);
  EXPECT_TRUE(mask.rpca_converged);
  EXPECT_TRUE(mask.detected.all());
  EXPECT_LT(mask.error_l1.maxCoeff(), 1e-3);
}

TEST(DetectTrueInliers, FlagsReplacedColumn) {
  Rng rng(47);
  Matrix D = consistent_d(rng, 64, 3, 20);
  Vector v = rng.normal_matrix(64, 1);
  D.block(64, 7, 64, 1) = v.normalized();
  const InlierMask mask = detect_true_inliers(D, 64, 3);
  for (int k = 0; k < 20; ++k) {
    for (int j = 0; j < 3; ++j) {
      EXPECT_EQ(mask.detected(j, k), !(j == 1 && k == 7)) << j << "," << k;
    }
  }
}

TEST(DetectTrueInliers, MonotoneInThreshold) {
  Rng rng(48);
  for (int trial = 0; trial < 5; ++trial) {
    Matrix D = consistent_d(rng, 20, 3, 10);
    D += 0.3 * rng.normal_matrix(60, 10);
    const InlierMask lo = detect_true_inliers(D, 20, 3, 1.0);
    const InlierMask hi = detect_true_inliers(D, 20, 3, 3.0);
    EXPECT_EQ(lo.error_l1, hi.error_l1);
    for (int k = 0; k < 10; ++k) {
      for (int j = 0; j < 3; ++j) {
        if (lo.detected(j, k)) {
          EXPECT_TRUE(hi.detected(j, k));
        }
      }
    }
  }
  EXPECT_THROW(detect_true_inliers(Matrix::Ones(6, 2), 3, 2, 0.0), ConfigError);
  EXPECT_THROW(detect_true_inliers(Matrix::Ones(6, 2), 4, 2), DimensionError);
}

}  // namespace
}  // namespace roml
