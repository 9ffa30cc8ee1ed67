#include "roml/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

#include "roml/errors.hpp"
#include "roml/random.hpp"

namespace roml {
namespace {

constexpr double kNormTolerance = 1e-9;

void check_state_shapes(const SolverState& s) {
  const auto r = s.D.rows();
  const auto c = s.D.cols();
  if (s.L.rows() != r || s.L.cols() != c || s.E.rows() != r ||
      s.E.cols() != c || s.Y.rows() != r || s.Y.cols() != c) {
    throw DimensionError("solver state matrices must share the shape of D");
  }
  if (!(s.rho > 0.0)) {
    throw PreconditionError("rho must be positive");
  }
}

// Column norms of a normalized set must agree with its recorded constant.
void check_norm_constant(const FeatureSet& fs) {
  if (!fs.norm_constant) return;
  const double c = *fs.norm_constant;
  for (int i = 0; i < fs.size(); ++i) {
    const double norm = fs.features.col(i).norm();
    if (std::abs(norm - c) > kNormTolerance * std::max(1.0, c)) {
      std::ostringstream os;
      os << "feature set '" << fs.image_id << "' claims norm " << c
         << " but column " << i << " has norm " << norm;
      throw InvalidInputError(os.str());
    }
  }
}

// The descriptor-mode assignment reduction drops the quadratic term, which
// is only constant when all columns share one norm (or nothing is dropped).
void check_reduction_applies(const FeatureSet& fs, int n) {
  if (fs.size() > n && !fs.norm_constant) {
    throw PreconditionError(
        "feature set '" + fs.image_id +
        "' has outliers but is not normalized; the permutation subproblem is "
        "only an assignment problem when all columns share one l2 norm "
        "(normalize_features first)");
  }
}

void validate_inputs(const std::vector<FeatureSet>& sets,
                     const RomlConfig& config) {
  if (sets.size() < 2) {
    throw ConfigError("at least two feature sets are required, got " +
                      std::to_string(sets.size()));
  }
  if (config.n < 1) throw ConfigError("n must be at least 1");
  const int d = sets[0].dim();
  for (const auto& fs : sets) {
    validate_feature_set(fs);
    if (fs.dim() != d) {
      std::ostringstream os;
      os << "feature dimension mismatch: '" << sets[0].image_id << "' has d="
         << d << ", '" << fs.image_id << "' has d=" << fs.dim();
      throw DimensionError(os.str());
    }
    if (fs.size() < config.n) {
      std::ostringstream os;
      os << "n=" << config.n << " exceeds the " << fs.size()
         << " features of '" << fs.image_id << "'";
      throw ConfigError(os.str());
    }
    check_norm_constant(fs);
    if (config.mode == StackingMode::kDescriptor) {
      check_reduction_applies(fs, config.n);
    }
  }
  if (config.mode == StackingMode::kCoordinate && d != 2) {
    throw ConfigError("coordinate mode requires 2-D features");
  }
  if (config.max_iters < 1) throw ConfigError("max_iters must be positive");
  if (config.tracking) {
    const auto& fixed = config.tracking->fixed_first;
    if (fixed.n_sources != sets[0].size() || fixed.n_targets() != config.n ||
        !fixed.is_valid()) {
      throw ConfigError(
          "tracking permutation must select n distinct features of image 0");
    }
  }
}

PartialPermutation solve_one(int k, const SolverState& state,
                             const FeatureSet& fs, StackingMode mode) {
  AssignmentProblem problem{build_ppm_cost(k, state, fs, mode)};
  return from_assignment(solve_lsap(problem).assignment, fs.size());
}

}  // namespace

double default_lambda(StackingMode mode, int d, int n, int k_images) {
  if (mode == StackingMode::kDescriptor) {
    return 5.0 / std::sqrt(static_cast<double>(d) * n);
  }
  return 5.0 / std::sqrt(2.0 * k_images);
}

ResolvedParameters resolve_parameters(const RomlConfig& config, int d,
                                      int k_images) {
  const bool descriptor = config.mode == StackingMode::kDescriptor;
  ResolvedParameters p;
  p.lambda = config.lambda.value_or(
      default_lambda(config.mode, d, config.n, k_images));
  p.rho0 = config.rho0.value_or(descriptor ? 1e-4 : 1e-6);
  p.rho_factor = config.rho_factor.value_or(descriptor ? 1.001 : 1.0001);
  if (!(p.lambda > 0.0)) throw ConfigError("lambda must be positive");
  if (!(p.rho0 > 0.0)) throw ConfigError("rho0 must be positive");
  if (!(p.rho_factor >= 1.0)) throw ConfigError("rho factor must be >= 1");
  return p;
}

Matrix update_l(const SolverState& state) {
  check_state_shapes(state);
  return svt(state.D - state.E - state.Y / state.rho, 1.0 / state.rho)
      .low_rank;
}

Matrix update_e(const SolverState& state, double lambda) {
  check_state_shapes(state);
  return soft_threshold(state.D - state.L - state.Y / state.rho,
                        lambda / state.rho);
}

Matrix build_ppm_cost(int k, const SolverState& state, const FeatureSet& fs,
                      StackingMode mode) {
  const int d = fs.dim();
  if (mode == StackingMode::kDescriptor) {
    if (state.D.rows() % d != 0 || k < 0 || k >= state.D.cols()) {
      throw DimensionError("state does not match the feature set shape");
    }
    const Eigen::Index n = state.D.rows() / d;
    const Vector target = state.Y.col(k) +
                          state.rho * (state.L.col(k) + state.E.col(k));
    const auto blocks = target.reshaped(d, n);
    return -(fs.features.transpose() * blocks);
  }
  if (d != 2 || k < 0 || 2 * k + 1 >= state.D.rows()) {
    throw DimensionError("state does not match the coordinate feature set");
  }
  const Matrix target =
      state.Y.middleRows(2 * k, 2) +
      state.rho * (state.L.middleRows(2 * k, 2) + state.E.middleRows(2 * k, 2));
  Matrix cost = -(fs.features.transpose() * target);
  const Vector half_sq =
      0.5 * state.rho * fs.features.colwise().squaredNorm().transpose();
  cost.colwise() += half_sq;
  return cost;
}

std::vector<PartialPermutation> update_ppms(const SolverState& state,
                                            const std::vector<FeatureSet>& sets,
                                            const RomlConfig& config) {
  check_state_shapes(state);
  const int k_images = static_cast<int>(sets.size());
  if (config.mode == StackingMode::kDescriptor) {
    for (const auto& fs : sets) check_reduction_applies(fs, config.n);
  }
  std::vector<PartialPermutation> out(k_images);
  const int first = config.tracking ? 1 : 0;
  if (config.tracking) out[0] = config.tracking->fixed_first;

  const int workers = std::clamp(config.threads, 1, k_images - first);
  if (workers <= 1) {
    for (int k = first; k < k_images; ++k) {
      out[k] = solve_one(k, state, sets[k], config.mode);
    }
    return out;
  }
  std::vector<std::exception_ptr> errors(workers);
  {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (int k = first + w; k < k_images; k += workers) {
            out[k] = solve_one(k, state, sets[k], config.mode);
          }
        } catch (...) {
          errors[w] = std::current_exception();
        }
      });
    }
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  return out;
}

Matrix update_y(const SolverState& state) {
  check_state_shapes(state);
  return state.Y + state.rho * (state.L + state.E - state.D);
}

ResidualNorms residuals(const SolverState& prev, const SolverState& curr) {
  check_state_shapes(prev);
  check_state_shapes(curr);
  if (prev.D.rows() != curr.D.rows() || prev.D.cols() != curr.D.cols()) {
    throw DimensionError("residuals: iterates have different shapes");
  }
  ResidualNorms r;
  r.primal = (curr.L + curr.E - curr.D).norm();
  r.dual_l = curr.rho * ((prev.E + prev.D) - (curr.E + curr.D)).norm();
  r.dual_e = curr.rho * (prev.D - curr.D).norm();
  const double d_norm = curr.D.norm();
  r.relative_primal = d_norm > 0.0 ? r.primal / d_norm : r.primal;
  return r;
}

double augmented_lagrangian(const SolverState& state, double lambda) {
  check_state_shapes(state);
  const double coupling =
      (state.L + state.E - state.D + state.Y / state.rho).squaredNorm();
  return nuclear_norm(state.L) + lambda * state.E.cwiseAbs().sum() +
         0.5 * state.rho * coupling;
}

SolverState initial_state(const std::vector<FeatureSet>& sets,
                          const RomlConfig& config) {
  validate_inputs(sets, config);
  const ResolvedParameters params =
      resolve_parameters(config, sets[0].dim(), static_cast<int>(sets.size()));
  Rng rng(config.seed);
  SolverState state;
  state.ppms.reserve(sets.size());
  for (std::size_t k = 0; k < sets.size(); ++k) {
    PartialPermutation p;
    p.n_sources = sets[k].size();
    p.target_to_source = rng.sample_without_replacement(p.n_sources, config.n);
    state.ppms.push_back(std::move(p));
  }
  if (config.tracking) state.ppms[0] = config.tracking->fixed_first;
  state.D = assemble_d(sets, state.ppms, config.mode);
  state.L = Matrix::Zero(state.D.rows(), state.D.cols());
  state.E = state.L;
  state.Y = state.L;
  state.rho = params.rho0;
  return state;
}

MatchReport solve_roml(const std::vector<FeatureSet>& sets,
                       const RomlConfig& config) {
  SolverState state = initial_state(sets, config);
  const ResolvedParameters params =
      resolve_parameters(config, sets[0].dim(), static_cast<int>(sets.size()));

  MatchReport report;
  report.parameters = params;
  report.residual_history.reserve(config.max_iters);
  report.objective_history.reserve(config.max_iters);
  int stable = 0;

  for (int t = 0; t < config.max_iters; ++t) {
    SolverState next;
    next.rho = state.rho;
    next.iteration = t + 1;

    const SvtResult l_step =
        svt(state.D - state.E - state.Y / state.rho, 1.0 / state.rho);
    next.L = l_step.low_rank;
    next.E = soft_threshold(state.D - next.L - state.Y / state.rho,
                            params.lambda / state.rho);

    // Permutation subproblems see L_{t+1}, E_{t+1} and Y_t.
    SolverState probe{next.L, next.E, state.Y, state.D, state.rho, t,
                      state.ppms};
    next.ppms = update_ppms(probe, sets, config);
    next.D = assemble_d(sets, next.ppms, config.mode);
    next.Y = state.Y;
    next.Y = update_y(next);

    if (!next.L.allFinite() || !next.E.allFinite() || !next.Y.allFinite()) {
      throw NumericError("non-finite iterate", t + 1);
    }

    const ResidualNorms r = residuals(state, next);
    report.residual_history.push_back(r);
    report.objective_history.push_back(l_step.nuclear_norm +
                                       params.lambda * next.E.cwiseAbs().sum());

    stable = next.ppms == state.ppms ? stable + 1 : 0;
    next.rho = std::min(state.rho * params.rho_factor, config.rho_max);
    state = std::move(next);

    if (r.relative_primal < config.primal_tol &&
        stable >= config.stable_iters) {
      report.converged = true;
      break;
    }
  }

  report.iterations_used = static_cast<int>(report.residual_history.size());
  report.final_rho = state.rho;
  const std::vector<int> order = canonical_slot_order(state.ppms);
  report.ppms = canonicalize(state.ppms);
  report.L = permute_slots(state.L, order, config.mode);
  report.E = permute_slots(state.E, order, config.mode);
  report.D = assemble_d(sets, report.ppms, config.mode);
  return report;
}

}  // namespace roml
