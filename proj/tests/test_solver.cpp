#include <gtest/gtest.h>

#include <cmath>
#include <limits>

#include "roml/errors.hpp"
#include "roml/metrics.hpp"
#include "roml/oracle.hpp"
#include "roml/solver.hpp"
#include "support.hpp"

namespace roml {
namespace {

using testing::all_injections;
using testing::planted_instance;
using testing::random_direction;
using testing::random_matrix;
using testing::random_ppm;
using testing::random_set;

SolverState random_state(Rng& rng, Eigen::Index rows, Eigen::Index cols,
                         double rho) {
  SolverState s;
  s.L = random_matrix(rng, rows, cols);
  s.E = random_matrix(rng, rows, cols);
  s.Y = random_matrix(rng, rows, cols);
  s.D = random_matrix(rng, rows, cols);
  s.rho = rho;
  return s;
}

TEST(Parameters, ModeDefaults) {
  RomlConfig c;
  c.n = 10;
  const ResolvedParameters p = resolve_parameters(c, 50, 30);
  EXPECT_DOUBLE_EQ(p.lambda, 5.0 / std::sqrt(500.0));
  EXPECT_EQ(p.rho0, 1e-4);
  EXPECT_EQ(p.rho_factor, 1.001);

  c.mode = StackingMode::kCoordinate;
  const ResolvedParameters q = resolve_parameters(c, 2, 30);
  EXPECT_DOUBLE_EQ(q.lambda, 5.0 / std::sqrt(60.0));
  EXPECT_EQ(q.rho0, 1e-6);
  EXPECT_EQ(q.rho_factor, 1.0001);

  EXPECT_EQ(RomlConfig{}.max_iters, 5000);
  EXPECT_EQ(RomlConfig{}.primal_tol, 1e-7);
  EXPECT_EQ(RomlConfig{}.rho_max, 1e10);
  EXPECT_EQ(TrackingOptions{}.emphasis_factor, 2.0);

  c.lambda = -1.0;
  EXPECT_THROW(resolve_parameters(c, 2, 3), ConfigError);
}

TEST(UpdateL, RankOneShrinks) {
  Rng rng(41);
  Vector u = rng.normal_matrix(6, 1);
  Vector v = rng.normal_matrix(3, 1);
  u.normalize();
  v.normalize();
  SolverState s;
  s.D = 50.0 * u * v.transpose();
  s.E = Matrix::Zero(6, 3);
  s.Y = s.E;
  s.L = s.E;
  s.rho = 2.0;
  const Matrix L = update_l(s);
  EXPECT_LE((L - 49.5 * u * v.transpose()).norm(), 1e-10);
}

TEST(UpdateL, VanishesWhenDEqualsE) {
  Rng rng(42);
  SolverState s = random_state(rng, 4, 3, 0.5);
  s.E = s.D;
  s.Y.setZero();
  EXPECT_TRUE(update_l(s).isZero(0.0));
}

TEST(UpdateL, MinimizesLagrangianInL) {
  Rng rng(43);
  for (int inst = 0; inst < 10; ++inst) {
    SolverState s = random_state(rng, 6, 4, rng.uniform(0.2, 3.0));
    const double lambda = 0.3;
    s.L = update_l(s);
    const double best = augmented_lagrangian(s, lambda);
    for (int p = 0; p < 200; ++p) {
      SolverState alt = s;
      alt.L += random_direction(rng, 6, 4, rng.uniform(0.0, 0.5));
      ASSERT_LE(best, augmented_lagrangian(alt, lambda) + 1e-10);
    }
  }
}

TEST(UpdateE, Examples) {
  SolverState s;
  s.D = Matrix::Constant(2, 2, 1.5);
  s.L = s.D;
  s.E = Matrix::Zero(2, 2);
  s.Y = s.E;
  s.rho = 1.0;
  EXPECT_TRUE(update_e(s, 0.3).isZero(0.0));

  s.L = Matrix::Zero(2, 2);
  s.D = Matrix::Constant(2, 2, 0.9);
  s.rho = 2.0;
  const Matrix E = update_e(s, 0.8);
  EXPECT_NEAR(E(0, 0), 0.5, 1e-15);
}

TEST(UpdateE, MinimizesLagrangianInE) {
  Rng rng(44);
  for (int inst = 0; inst < 10; ++inst) {
    SolverState s = random_state(rng, 5, 4, rng.uniform(0.2, 3.0));
    const double lambda = rng.uniform(0.1, 1.0);
    s.E = update_e(s, lambda);
    const double best = augmented_lagrangian(s, lambda);
    for (int p = 0; p < 200; ++p) {
      SolverState alt = s;
      alt.E += random_direction(rng, 5, 4, rng.uniform(0.0, 0.5));
      ASSERT_LE(best, augmented_lagrangian(alt, lambda) + 1e-10);
    }
  }
}

TEST(UpdateY, Examples) {
  SolverState s;
  s.L = Matrix::Constant(2, 3, 0.25);
  s.E = Matrix::Constant(2, 3, 0.75);
  s.D = Matrix::Ones(2, 3);
  s.Y = Matrix::Constant(2, 3, -1.0);
  s.rho = 3.0;
  EXPECT_EQ(update_y(s), s.Y);

  s.Y.setZero();
  s.D.setZero();
  s.rho = 2.0;
  EXPECT_EQ(update_y(s), Matrix::Constant(2, 3, 2.0));
}

TEST(Residuals, Examples) {
  SolverState a;
  a.L = Matrix::Identity(2, 2);
  a.E = Matrix::Zero(2, 2);
  a.D = Matrix::Zero(2, 2);
  a.Y = Matrix::Zero(2, 2);
  a.rho = 1.0;
  const ResidualNorms r = residuals(a, a);
  EXPECT_NEAR(r.primal, std::sqrt(2.0), 1e-15);
  EXPECT_EQ(r.dual_e, 0.0);
  EXPECT_EQ(r.dual_l, 0.0);

  SolverState b = a;
  b.L = Matrix::Ones(2, 2);
  b.E = -Matrix::Ones(2, 2) + Matrix::Ones(2, 2);
  b.D = Matrix::Ones(2, 2);
  const ResidualNorms z = residuals(b, b);
  EXPECT_EQ(z.primal, 0.0);
  EXPECT_EQ(z.dual_l, 0.0);
  EXPECT_EQ(z.dual_e, 0.0);

  SolverState c = b;
  c.D = 2.0 * Matrix::Ones(2, 2);
  c.rho = 3.0;
  const ResidualNorms m = residuals(b, c);
  EXPECT_NEAR(m.dual_e, 3.0 * 2.0, 1e-15);
  EXPECT_NEAR(m.dual_l, 3.0 * 2.0, 1e-15);
}

TEST(BuildPpmCost, RecoversPlantedColumns) {
  Rng rng(45);
  const int d = 4, n = 3, n_k = 6;
  const FeatureSet fs = normalize_features(random_set(rng, d, n_k, "p"), 1.0);
  SolverState s;
  s.D = Matrix::Zero(d * n, 2);
  s.L = s.D;
  s.E = s.D;
  s.Y = s.D;
  s.rho = 1.0;
  s.L.col(1) = fs.features.leftCols(n).reshaped();
  const Matrix cost = build_ppm_cost(1, s, fs);
  ASSERT_EQ(cost.rows(), n_k);
  ASSERT_EQ(cost.cols(), n);
  const auto best = brute_force_lsap({cost});
  EXPECT_EQ(best.assignment.target_to_source, (std::vector<int>{0, 1, 2}));
  EXPECT_EQ(solve_lsap({cost}).assignment.target_to_source,
            (std::vector<int>{0, 1, 2}));
}

TEST(BuildPpmCost, ZeroTargetAndScaling) {
  Rng rng(46);
  const FeatureSet fs = normalize_features(random_set(rng, 3, 5, "z"), 1.0);
  SolverState s;
  s.D = Matrix::Zero(6, 2);
  s.L = s.D;
  s.E = s.D;
  s.Y = s.D;
  s.rho = 1.7;
  EXPECT_TRUE(build_ppm_cost(0, s, fs).isZero(0.0));

  s = random_state(rng, 6, 2, 1.0);
  const Matrix base = build_ppm_cost(1, s, fs);
  SolverState scaled = s;
  scaled.L *= 3.0;
  scaled.E *= 3.0;
  scaled.Y *= 3.0;
  EXPECT_LE((build_ppm_cost(1, scaled, fs) - 3.0 * base).norm(),
            1e-12 * base.norm());
  EXPECT_EQ(solve_lsap({3.0 * base}).assignment.target_to_source,
            solve_lsap({base}).assignment.target_to_source);
}

// ||target - vec(F P)||^2 for image k: the part of the augmented Lagrangian
// that depends on P^k.
double iqp_objective(const Vector& target, const FeatureSet& fs,
                     const std::vector<int>& sel) {
  const Matrix chosen = select_columns(fs, {fs.size(), sel});
  return (target - chosen.reshaped()).squaredNorm();
}

TEST(UpdatePpms, SolvesQuadraticSubproblemExactly) {
  Rng rng(47);
  for (int inst = 0; inst < 40; ++inst) {
    const int K = 3;
    const int d = 1 + static_cast<int>(rng.uniform_int(4));
    const int n = 1 + static_cast<int>(rng.uniform_int(3));
    std::vector<FeatureSet> sets;
    for (int k = 0; k < K; ++k) {
      const int n_k = n + static_cast<int>(rng.uniform_int(7 - n));
      sets.push_back(normalize_features(random_set(rng, d, n_k, "q"),
                                        rng.uniform(0.5, 2.0)));
    }
    SolverState s = random_state(rng, d * n, K, rng.uniform(0.1, 4.0));
    RomlConfig config;
    config.n = n;
    const auto ppms = update_ppms(s, sets, config);
    for (int k = 0; k < K; ++k) {
      ASSERT_TRUE(ppms[k].is_valid());
      const Vector target =
          s.L.col(k) + s.E.col(k) + s.Y.col(k) / s.rho;
      double best = std::numeric_limits<double>::infinity();
      for (const auto& sel : all_injections(sets[k].size(), n)) {
        best = std::min(best, iqp_objective(target, sets[k], sel));
      }
      EXPECT_NEAR(iqp_objective(target, sets[k], ppms[k].target_to_source),
                  best, 1e-9 * (1.0 + best));
    }
  }
}

TEST(UpdatePpms, CoordinateModeSolvesSubproblemWithoutNormalization) {
  Rng rng(48);
  for (int inst = 0; inst < 40; ++inst) {
    const int K = 3;
    const int n = 1 + static_cast<int>(rng.uniform_int(4));
    std::vector<FeatureSet> sets;
    for (int k = 0; k < K; ++k) {
      sets.push_back(random_set(rng, 2, n + static_cast<int>(rng.uniform_int(3)),
                                "c"));
    }
    SolverState s = random_state(rng, 2 * K, n, rng.uniform(0.1, 4.0));
    RomlConfig config;
    config.n = n;
    config.mode = StackingMode::kCoordinate;
    const auto ppms = update_ppms(s, sets, config);
    for (int k = 0; k < K; ++k) {
      const Matrix target = s.L.middleRows(2 * k, 2) + s.E.middleRows(2 * k, 2) +
                            s.Y.middleRows(2 * k, 2) / s.rho;
      double best = std::numeric_limits<double>::infinity();
      for (const auto& sel : all_injections(sets[k].size(), n)) {
        best = std::min(best, iqp_objective(target.reshaped(), sets[k], sel));
      }
      EXPECT_NEAR(iqp_objective(target.reshaped(), sets[k],
                                ppms[k].target_to_source),
                  best, 1e-9 * (1.0 + best));
    }
  }
}

TEST(UpdatePpms, ConvergedStateGivesTruth) {
  const auto inst = planted_instance(49, 3, 2, 3, 6);
  SolverState s;
  s.D = assemble_d(inst.sets, inst.truth, StackingMode::kDescriptor);
  s.L = s.D;
  s.E = Matrix::Zero(s.D.rows(), s.D.cols());
  s.Y = s.E;
  s.rho = 1.0;
  RomlConfig config;
  config.n = 2;
  EXPECT_EQ(update_ppms(s, inst.sets, config), inst.truth);
}

TEST(UpdatePpms, TrackingKeepsFirstPermutation) {
  Rng rng(50);
  const auto inst = planted_instance(50, 4, 2, 5, 3);
  SolverState s = random_state(rng, 6, 4, 1.0);
  RomlConfig config;
  config.n = 2;
  config.tracking = TrackingOptions{PartialPermutation{5, {4, 1}}, 2.0};
  EXPECT_EQ(update_ppms(s, inst.sets, config)[0],
            (PartialPermutation{5, {4, 1}}));
}

TEST(UpdatePpms, RequiresNormalizationWhenOutliersExist) {
  Rng rng(51);
  std::vector<FeatureSet> sets{random_set(rng, 3, 4, "a"),
                               random_set(rng, 3, 4, "b")};
  SolverState s = random_state(rng, 6, 2, 1.0);
  RomlConfig config;
  config.n = 2;
  EXPECT_THROW(update_ppms(s, sets, config), PreconditionError);
  config.n = 4;
  s = random_state(rng, 12, 2, 1.0);
  EXPECT_NO_THROW(update_ppms(s, sets, config));
}

TEST(UpdatePpms, ThreadCountDoesNotChangeResult) {
  Rng rng(52);
  const auto inst = planted_instance(52, 7, 3, 8, 5);
  const SolverState s = random_state(rng, 15, 7, 0.7);
  RomlConfig config;
  config.n = 3;
  const auto serial = update_ppms(s, inst.sets, config);
  for (int threads : {2, 3, 16}) {
    config.threads = threads;
    EXPECT_EQ(update_ppms(s, inst.sets, config), serial);
  }
}

TEST(InitialState, ZeroIteratesAndSeededPermutations) {
  const auto inst = planted_instance(53, 4, 3, 7, 5);
  RomlConfig config;
  config.n = 3;
  config.seed = 99;
  const SolverState a = initial_state(inst.sets, config);
  EXPECT_TRUE(a.L.isZero(0.0));
  EXPECT_TRUE(a.E.isZero(0.0));
  EXPECT_TRUE(a.Y.isZero(0.0));
  EXPECT_EQ(a.rho, 1e-4);
  EXPECT_EQ(a.D, assemble_d(inst.sets, a.ppms, StackingMode::kDescriptor));
  for (const auto& p : a.ppms) EXPECT_TRUE(p.is_valid());
  EXPECT_EQ(initial_state(inst.sets, config).ppms, a.ppms);
  config.seed = 100;
  EXPECT_NE(initial_state(inst.sets, config).ppms, a.ppms);
}

TEST(SolveRoml, InputErrors) {
  const auto inst = planted_instance(54, 3, 2, 4, 3);
  RomlConfig config;
  config.n = 5;
  EXPECT_THROW(solve_roml(inst.sets, config), ConfigError);
  config.n = 2;
  EXPECT_THROW(solve_roml({inst.sets[0]}, config), ConfigError);
  auto raw = inst.sets;
  raw[1].norm_constant.reset();
  EXPECT_THROW(solve_roml(raw, config), PreconditionError);
  raw = inst.sets;
  raw[1].features(0, 0) *= 2.0;
  EXPECT_THROW(solve_roml(raw, config), InvalidInputError);
  config.mode = StackingMode::kCoordinate;
  EXPECT_THROW(solve_roml(inst.sets, config), ConfigError);
  config.mode = StackingMode::kDescriptor;
  config.tracking = TrackingOptions{PartialPermutation{4, {0, 0}}, 2.0};
  EXPECT_THROW(solve_roml(inst.sets, config), ConfigError);
}

TEST(SolveRoml, RecoversDuplicatedInliers) {
  const auto inst = planted_instance(55, 5, 4, 6, 8);
  RomlConfig config;
  config.n = 4;
  config.rho0 = 0.1;
  const MatchReport r = solve_roml(inst.sets, config);
  EXPECT_EQ(recovery_rate(r.ppms, inst.truth), 1.0);
  EXPECT_TRUE(r.converged);
  ASSERT_FALSE(r.residual_history.empty());
  EXPECT_LT(r.residual_history.back().relative_primal, 1e-6);
}

TEST(SolveRoml, ReportInvariants) {
  const auto inst = planted_instance(56, 4, 3, 6, 5);
  RomlConfig config;
  config.n = 3;
  config.max_iters = 300;
  const MatchReport r = solve_roml(inst.sets, config);
  EXPECT_EQ(static_cast<int>(r.residual_history.size()), r.iterations_used);
  EXPECT_EQ(r.objective_history.size(), r.residual_history.size());
  EXPECT_LE(r.iterations_used, 300);
  EXPECT_EQ(r.ppms, canonicalize(r.ppms));
  EXPECT_EQ(r.D, assemble_d(inst.sets, r.ppms, StackingMode::kDescriptor));
  for (const auto& p : r.ppms) EXPECT_TRUE(p.is_valid());
  for (double v : r.objective_history) EXPECT_TRUE(std::isfinite(v));
  EXPECT_EQ(r.L.rows(), r.D.rows());
  EXPECT_EQ(r.E.cols(), r.D.cols());
}

TEST(SolveRoml, DeterministicAndThreadIndependent) {
  const auto inst = planted_instance(57, 6, 3, 7, 6);
  RomlConfig config;
  config.n = 3;
  config.seed = 5;
  config.max_iters = 400;
  const MatchReport a = solve_roml(inst.sets, config);
  const MatchReport b = solve_roml(inst.sets, config);
  EXPECT_EQ(a.ppms, b.ppms);
  EXPECT_EQ(a.L, b.L);
  EXPECT_EQ(a.objective_history, b.objective_history);
  config.threads = 3;
  const MatchReport c = solve_roml(inst.sets, config);
  EXPECT_EQ(a.ppms, c.ppms);
  EXPECT_EQ(a.L, c.L);
}

TEST(SolveRoml, ScaledFeaturesMatchScaledPenalty) {
  const auto inst = planted_instance(58, 5, 3, 6, 4);
  const double c = 4.0;
  std::vector<FeatureSet> scaled;
  for (const auto& fs : inst.sets) scaled.push_back(normalize_features(fs, c));
  RomlConfig unit;
  unit.n = 3;
  unit.max_iters = 500;
  unit.rho0 = 0.02;
  unit.lambda = 0.4;
  RomlConfig big = unit;
  big.rho0 = 0.02 / c;
  const MatchReport a = solve_roml(inst.sets, unit);
  const MatchReport b = solve_roml(scaled, big);
  EXPECT_EQ(a.ppms, b.ppms);
  EXPECT_EQ(a.iterations_used, b.iterations_used);
  EXPECT_LE((b.L - c * a.L).norm(), 1e-9 * (1.0 + c * a.L.norm()));
  EXPECT_LE((b.E - c * a.E).norm(), 1e-9 * (1.0 + c * a.E.norm()));
}

TEST(SolveRoml, TrackingPinsFirstImage) {
  const auto inst = planted_instance(59, 4, 3, 6, 6);
  RomlConfig config;
  config.n = 3;
  config.max_iters = 300;
  config.tracking = TrackingOptions{inst.truth[0], 2.0};
  const auto sets = emphasize_first(inst.sets, 2.0);
  const MatchReport r = solve_roml(sets, config);
  const auto canon_first = canonicalize(inst.truth)[0];
  EXPECT_EQ(r.ppms[0], canon_first);
}

TEST(SolveRoml, MatchesOracleOnTinyInstance) {
  const auto inst = planted_instance(60, 3, 2, 3, 4);
  RomlConfig config;
  config.n = 2;
  config.rho0 = 0.1;
  const MatchReport r = solve_roml(inst.sets, config);
  const MiapSolution best = brute_force_miap(inst.sets, 2);
  EXPECT_NEAR(nuclear_norm(r.D), best.optimal_nuclear, 1e-6);
}

}  // namespace
}  // namespace roml
