#include "roml/cli.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "roml/embed.hpp"
#include "roml/errors.hpp"
#include "roml/metrics.hpp"
#include "roml/oracle.hpp"
#include "roml/select.hpp"
#include "roml/solver.hpp"
#include "roml/synthetic.hpp"

namespace roml::cli {
namespace {

using json = nlohmann::ordered_json;

struct SolverFlags {
  std::string lambda = "auto";
  std::optional<double> rho0;
  std::optional<double> rho_factor;
  int max_iters = RomlConfig{}.max_iters;
  double tol = RomlConfig{}.primal_tol;
  std::string mode;
};

struct CommonFlags {
  std::uint64_t seed = 0;
  int parallel = 1;
  std::string out = "-";
  bool no_timing = false;
};

void add_common(CLI::App* cmd, CommonFlags& c) {
  cmd->add_option("--seed", c.seed, "Seed for every random choice")
      ->capture_default_str();
  cmd->add_option("--parallel", c.parallel,
                  "Worker threads for the per-image assignment subproblems")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--out", c.out, "Report file, '-' for standard output")
      ->capture_default_str();
  cmd->add_flag("--no-timing", c.no_timing,
                "Omit wall-clock time so reports are byte-reproducible");
}

void add_solver(CLI::App* cmd, SolverFlags& s) {
  cmd->add_option("--lambda", s.lambda,
                  "Sparsity weight, or 'auto' for the mode default")
      ->capture_default_str();
  cmd->add_option("--rho0", s.rho0, "Initial penalty (default by mode)");
  cmd->add_option("--rho-factor", s.rho_factor,
                  "Penalty growth factor (default by mode)");
  cmd->add_option("--max-iters", s.max_iters, "Iteration limit")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--tol", s.tol, "Relative primal residual tolerance")
      ->capture_default_str();
  cmd->add_option("--mode", s.mode,
                  "descriptor or coordinate (default: the manifest's mode)");
}

RomlConfig make_config(const SolverFlags& s, const CommonFlags& c, int n,
                       StackingMode mode) {
  RomlConfig config;
  config.n = n;
  config.mode = mode;
  if (s.lambda != "auto") {
    double v = 0.0;
    std::istringstream is(s.lambda);
    if (!(is >> v) || !is.eof() || !(v > 0.0)) {
      throw ConfigError("--lambda must be 'auto' or a positive number, got '" +
                        s.lambda + "'");
    }
    config.lambda = v;
  }
  config.rho0 = s.rho0;
  config.rho_factor = s.rho_factor;
  config.max_iters = s.max_iters;
  config.primal_tol = s.tol;
  config.seed = c.seed;
  config.threads = c.parallel;
  return config;
}

json config_echo(const std::string& command, const RomlConfig& config,
                 const ResolvedParameters& p, const CommonFlags& c) {
  json j;
  j["command"] = command;
  j["mode"] = to_string(config.mode);
  j["n"] = config.n;
  j["lambda"] = p.lambda;
  j["lambda_source"] = config.lambda ? "user" : "auto";
  j["rho0"] = p.rho0;
  j["rho_factor"] = p.rho_factor;
  j["rho_max"] = config.rho_max;
  j["max_iters"] = config.max_iters;
  j["primal_tol"] = config.primal_tol;
  j["stable_iters"] = config.stable_iters;
  j["seed"] = c.seed;
  j["parallel"] = c.parallel;
  return j;
}

json ppms_json(const std::vector<PartialPermutation>& ppms) {
  json j = json::array();
  for (const auto& p : ppms) j.push_back(p.target_to_source);
  return j;
}

json histories_json(const MatchReport& r) {
  json primal = json::array(), dual_l = json::array(), dual_e = json::array(),
       rel = json::array();
  for (const auto& h : r.residual_history) {
    primal.push_back(h.primal);
    dual_l.push_back(h.dual_l);
    dual_e.push_back(h.dual_e);
    rel.push_back(h.relative_primal);
  }
  json j;
  j["primal"] = std::move(primal);
  j["dual_l"] = std::move(dual_l);
  j["dual_e"] = std::move(dual_e);
  j["relative_primal"] = std::move(rel);
  return j;
}

json solve_json(const MatchReport& r) {
  json j;
  j["ppms"] = ppms_json(r.ppms);
  j["iterations"] = r.iterations_used;
  j["converged"] = r.converged;
  j["final_rho"] = r.final_rho;
  j["final_relative_primal"] =
      r.residual_history.empty() ? 0.0 : r.residual_history.back().relative_primal;
  j["nuclear_norm_d"] = nuclear_norm(r.D);
  j["objective_history"] = r.objective_history;
  j["residual_history"] = histories_json(r);
  return j;
}

json truth_metrics(const std::vector<PartialPermutation>& found,
                   const GroundTruth& truth) {
  json j;
  if (!truth.ppms.empty() &&
      truth.ppms[0].n_targets() == found[0].n_targets()) {
    j["recovery_rate"] = recovery_rate(found, truth.ppms);
  }
  const MatchRatios m = match_identification_ratios(found, truth);
  j["match_ratio"] = m.match;
  j["identification_ratio"] = m.identification;
  return j;
}

StackingMode pick_mode(const std::string& flag, StackingMode manifest) {
  return flag.empty() ? manifest : parse_stacking_mode(flag);
}

// Unit-norm descriptors, or coordinates centered per image.
std::vector<FeatureSet> prepare(const std::vector<FeatureSet>& sets,
                                StackingMode mode, bool normalize) {
  if (!normalize) return sets;
  std::vector<FeatureSet> out;
  for (const auto& fs : sets) {
    out.push_back(mode == StackingMode::kDescriptor ? normalize_features(fs, 1.0)
                                                    : center_columns(fs));
  }
  return out;
}

std::string fmt(double v, int digits = 4) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(digits) << v;
  return os.str();
}

// Shared tail of every command: wall time, report file and summary line.
struct Emitter {
  const CommonFlags& common;
  std::ostream& out;
  std::ostream& err;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  void emit(json report, const std::string& summary) const {
    if (!common.no_timing) {
      const std::chrono::duration<double> dt =
          std::chrono::steady_clock::now() - start;
      report["wall_time_seconds"] = dt.count();
    }
    const std::string text = report.dump(2) + "\n";
    if (common.out == "-") {
      out << text;
      err << summary << "\n";
    } else {
      std::ofstream f(common.out, std::ios::binary);
      if (!f) throw IoError("cannot write '" + common.out + "'");
      f << text;
      if (!f) throw IoError("write to '" + common.out + "' failed");
      out << summary << "\n";
    }
  }
};

json report_header(const std::string& command) {
  json j;
  j["format_version"] = kFormatVersion;
  j["command"] = command;
  return j;
}

}  // namespace

FeatureSet augment_box_features(const FeatureSet& fs, const BoxInfo& boxes,
                                double kappa_r, double kappa_n, Rng& rng) {
  validate_feature_set(fs);
  const auto nk = static_cast<std::size_t>(fs.size());
  if (boxes.aspect_ratios.size() != nk || boxes.objectness.size() != nk) {
    throw DimensionError("'" + fs.image_id +
                         "' needs one aspect ratio and objectness per column");
  }
  FeatureSet out;
  out.image_id = fs.image_id;
  out.features.resize(fs.dim() + 1, fs.size());
  for (int i = 0; i < fs.size(); ++i) {
    const double r = boxes.aspect_ratios[i];
    const double s = boxes.objectness[i];
    if (!std::isfinite(r) || !(s >= 0.0 && s <= 1.0)) {
      throw InvalidInputError("'" + fs.image_id + "' box " +
                              std::to_string(i) +
                              ": aspect ratio must be finite and objectness "
                              "in [0, 1]");
    }
    out.features.col(i).head(fs.dim()) = fs.features.col(i);
    out.features(fs.dim(), i) = kappa_r * r;
    const double sd = 1.0 - s;
    for (int row = 0; row <= fs.dim(); ++row) {
      out.features(row, i) += kappa_n * sd * rng.normal();
    }
  }
  return out;
}

int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err) {
  CLI::App app{"Robust multi-image feature matching"};
  app.require_subcommand(1);

  CommonFlags common;
  SolverFlags solver;
  std::string manifest;
  int n = 0;
  bool no_normalize = false;

  // solve
  auto* solve = app.add_subcommand("solve", "Match n inliers across all images");
  bool col = false;
  double kappa_r = kDefaultKappaR;
  double kappa_n = kDefaultKappaN;
  solve->add_option("--manifest", manifest, "Dataset manifest")->required();
  solve->add_option("--n", n, "Inliers per image")->check(CLI::PositiveNumber);
  solve->add_flag("--no-normalize", no_normalize,
                  "Skip descriptor normalization and coordinate centering");
  solve->add_flag("--col", col,
                  "Augment box descriptors with aspect ratio and objectness "
                  "noise, then select one box per image");
  solve->add_option("--kappa-r", kappa_r, "Aspect ratio weight")
      ->capture_default_str();
  solve->add_option("--kappa-n", kappa_n, "Objectness noise weight")
      ->capture_default_str();
  add_solver(solve, solver);
  add_common(solve, common);

  // simulate
  auto* simulate =
      app.add_subcommand("simulate", "Run seeded synthetic recovery trials");
  SyntheticSpec spec;
  int outliers = 32;
  int trials = 5;
  double noise = 0.0;
  std::string export_to;
  simulate->add_option("--K", spec.K, "Images")->capture_default_str();
  simulate->add_option("--d", spec.d, "Feature dimension")->capture_default_str();
  simulate->add_option("--n", spec.n, "Inliers per image")->capture_default_str();
  simulate->add_option("--outliers", outliers, "Outliers per image")
      ->check(CLI::NonNegativeNumber)
      ->capture_default_str();
  simulate->add_option("--err", spec.sparse_error_ratio,
                       "Fraction of corrupted coordinates per vector")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  simulate->add_option("--missing", spec.missing_inlier_ratio,
                       "Fraction of inliers replaced by outliers")
      ->check(CLI::Range(0.0, 1.0))
      ->capture_default_str();
  simulate->add_option("--noise", noise,
                       "Coordinate noise standard deviation (coordinate mode)")
      ->capture_default_str();
  simulate->add_option("--trials", trials, "Independent trials")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  simulate->add_option("--export", export_to,
                       "Write the first trial's data as a manifest here");
  add_solver(simulate, solver);
  add_common(simulate, common);

  // estimate-n
  auto* estimate =
      app.add_subcommand("estimate-n", "Estimate the number of inliers");
  double delta = kDefaultStepDelta;
  int n_max = 0;
  estimate->add_option("--manifest", manifest, "Dataset manifest")->required();
  estimate->add_option("--delta", delta, "Relative step threshold")
      ->capture_default_str();
  estimate->add_option("--n-max", n_max,
                       "Largest n to test (default: min n_k - 1)");
  estimate->add_flag("--no-normalize", no_normalize,
                     "Skip descriptor normalization and coordinate centering");
  add_solver(estimate, solver);
  add_common(estimate, common);

  // detect-inliers
  auto* detect = app.add_subcommand(
      "detect-inliers", "Match, then flag which matched features are inliers");
  double xi = kDefaultInlierXi;
  detect->add_option("--manifest", manifest, "Dataset manifest")->required();
  detect->add_option("--n", n, "Inliers per image")
      ->check(CLI::PositiveNumber)
      ->required();
  detect->add_option("--xi", xi, "Error l1 threshold")->capture_default_str();
  detect->add_flag("--no-normalize", no_normalize,
                   "Skip descriptor normalization and coordinate centering");
  add_solver(detect, solver);
  add_common(detect, common);

  // embed
  auto* embed = app.add_subcommand(
      "embed", "Joint spectral embedding of coordinates and descriptors");
  int dim = 0;
  double sigma_spa = kDefaultSigmaSpatial;
  double sigma_des = kDefaultSigmaDescriptor;
  std::string out_manifest;
  embed->add_option("--manifest", manifest,
                    "Manifest with coord_file per image; feature_file holds "
                    "the descriptors")
      ->required();
  embed->add_option("--d", dim, "Embedding dimension")
      ->check(CLI::PositiveNumber)
      ->required();
  embed->add_option("--sigma-spa", sigma_spa, "Spatial kernel width")
      ->capture_default_str();
  embed->add_option("--sigma-des", sigma_des, "Descriptor kernel width")
      ->capture_default_str();
  embed->add_option("--out-manifest", out_manifest,
                    "Write the embedded features as a new dataset");
  add_common(embed, common);

  // oracle
  auto* oracle = app.add_subcommand(
      "oracle", "Exhaustive minimum of the nuclear norm on tiny instances");
  bool compare = false;
  oracle->add_option("--manifest", manifest, "Dataset manifest")->required();
  oracle->add_option("--n", n, "Inliers per image")
      ->check(CLI::PositiveNumber)
      ->required();
  oracle->add_flag("--compare", compare,
                   "Also run the iterative solver and report the gap");
  oracle->add_flag("--no-normalize", no_normalize,
                   "Skip descriptor normalization and coordinate centering");
  add_solver(oracle, solver);
  add_common(oracle, common);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto subs = app.get_subcommands();
    out << (subs.empty() ? app.help() : subs.front()->help());
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    const auto subs = app.get_subcommands();
    err << "error: " << e.what() << "\n\n"
        << (subs.empty() ? app.help() : subs.front()->help());
    return kExitUsage;
  }

  const Emitter emitter{common, out, err};
  try {
    if (*solve) {
      Dataset ds = load_dataset(manifest);
      const StackingMode mode = pick_mode(solver.mode, ds.mode);
      std::vector<FeatureSet> sets = ds.sets;
      if (col) {
        if (n != 0 && n != 1) throw ConfigError("--col selects one box, so --n must be 1");
        n = 1;
        if (mode != StackingMode::kDescriptor) {
          throw ConfigError("--col requires descriptor mode");
        }
        Rng rng(common.seed);
        for (std::size_t k = 0; k < sets.size(); ++k) {
          if (!ds.boxes[k]) {
            throw ConfigError("--col needs aspect_ratios and objectness for '" +
                              sets[k].image_id + "'");
          }
          sets[k] = augment_box_features(sets[k], *ds.boxes[k], kappa_r, kappa_n, rng);
        }
      }
      if (n < 1) throw ConfigError("--n is required");
      sets = prepare(sets, mode, !no_normalize);
      const RomlConfig config = make_config(solver, common, n, mode);
      const MatchReport r = solve_roml(sets, config);

      json report = report_header("solve");
      json echo = config_echo("solve", config, r.parameters, common);
      echo["normalize"] = !no_normalize;
      echo["col"] = col;
      echo["kappa_r"] = kappa_r;
      echo["kappa_n"] = kappa_n;
      report["config"] = std::move(echo);
      report["image_ids"] = json::array();
      for (const auto& fs : sets) report["image_ids"].push_back(fs.image_id);
      report["result"] = solve_json(r);
      std::string summary = "solve: " + std::to_string(r.iterations_used) +
                            " iterations, " +
                            (r.converged ? "converged" : "not converged") +
                            ", lambda " + fmt(r.parameters.lambda, 6);
      if (ds.truth) {
        report["metrics"] = truth_metrics(r.ppms, *ds.truth);
        if (report["metrics"].contains("recovery_rate")) {
          summary += ", recovery rate " +
                     fmt(report["metrics"]["recovery_rate"].get<double>());
        }
      }
      emitter.emit(std::move(report), summary);
    } else if (*simulate) {
      const bool coords = !solver.mode.empty() &&
                          parse_stacking_mode(solver.mode) == StackingMode::kCoordinate;
      const StackingMode mode = coords ? StackingMode::kCoordinate : StackingMode::kDescriptor;
      spec.n_k = spec.n + outliers;
      RomlConfig config = make_config(solver, common, spec.n, mode);
      const int d_eff = coords ? 2 : spec.d;
      json trials_json = json::array();
      double sum_recovery = 0.0;
      const ResolvedParameters params = resolve_parameters(config, d_eff, spec.K);
      for (int t = 0; t < trials; ++t) {
        const std::uint64_t trial_seed = Rng::derive_seed(common.seed, t);
        SyntheticData data;
        if (coords) {
          data = generate_rank4_coords(spec.K, spec.n, outliers, noise, trial_seed);
        } else {
          SyntheticSpec s = spec;
          s.seed = trial_seed;
          data = generate(s);
        }
        if (t == 0 && !export_to.empty()) {
          Dataset ds;
          ds.mode = mode;
          ds.sets = data.sets;
          ds.truth = data.truth;
          save_dataset(std::filesystem::path(export_to) / "manifest.json", ds);
        }
        config.seed = trial_seed;
        const MatchReport r = solve_roml(prepare(data.sets, mode, true), config);
        json tj;
        tj["seed"] = trial_seed;
        tj["iterations"] = r.iterations_used;
        tj["converged"] = r.converged;
        tj["final_relative_primal"] = r.residual_history.empty()
                                          ? 0.0
                                          : r.residual_history.back().relative_primal;
        const json metrics = truth_metrics(r.ppms, data.truth);
        for (const auto& [key, value] : metrics.items()) {
          tj[key] = value;
        }
        sum_recovery += tj["recovery_rate"].get<double>();
        tj["ppms"] = ppms_json(r.ppms);
        trials_json.push_back(std::move(tj));
      }

      json report = report_header("simulate");
      json echo = config_echo("simulate", config, params, common);
      echo["K"] = spec.K;
      echo["d"] = d_eff;
      echo["outliers"] = outliers;
      echo["sparse_error_ratio"] = spec.sparse_error_ratio;
      echo["missing_inlier_ratio"] = spec.missing_inlier_ratio;
      echo["noise"] = noise;
      echo["trials"] = trials;
      report["config"] = std::move(echo);
      const double mean = sum_recovery / trials;
      report["mean_recovery_rate"] = mean;
      report["trials"] = std::move(trials_json);
      emitter.emit(std::move(report),
                   "simulate: mean recovery rate " + fmt(mean) + " over " +
                       std::to_string(trials) + " trials");
    } else if (*estimate) {
      Dataset ds = load_dataset(manifest);
      const StackingMode mode = pick_mode(solver.mode, ds.mode);
      const auto sets = prepare(ds.sets, mode, !no_normalize);
      RomlConfig config = make_config(solver, common, 1, mode);
      const InlierCountEstimate est = estimate_inlier_count(sets, config, delta, n_max);

      json report = report_header("estimate-n");
      ResolvedParameters p = resolve_parameters(config, sets[0].dim(),
                                                static_cast<int>(sets.size()));
      json echo = config_echo("estimate-n", config, p, common);
      echo.erase("n");
      echo["lambda"] = config.lambda ? json(*config.lambda) : json("5/sqrt(d n) per n");
      echo["delta"] = delta;
      echo["n_max"] = n_max;
      echo["normalize"] = !no_normalize;
      report["config"] = std::move(echo);
      report["n_hat"] = est.n_hat;
      report["found"] = est.found;
      report["gamma_series"] = est.gamma_series;
      report["gamma_bar_series"] = est.gamma_bar_series;
      emitter.emit(std::move(report),
                   "estimate-n: n_hat " + std::to_string(est.n_hat) +
                       (est.found ? "" : " (no step found, n_max)"));
    } else if (*detect) {
      Dataset ds = load_dataset(manifest);
      const StackingMode mode = pick_mode(solver.mode, ds.mode);
      if (mode != StackingMode::kDescriptor) {
        throw ConfigError("detect-inliers uses descriptor stacking");
      }
      const auto sets = prepare(ds.sets, mode, !no_normalize);
      const RomlConfig config = make_config(solver, common, n, mode);
      const MatchReport r = solve_roml(sets, config);
      const int d = sets[0].dim();
      const InlierMask mask = detect_true_inliers(r.D, d, n, xi);

      json report = report_header("detect-inliers");
      json echo = config_echo("detect-inliers", config, r.parameters, common);
      echo["xi"] = xi;
      echo["rpca_lambda"] = 1.0 / std::sqrt(static_cast<double>(d) * n);
      echo["normalize"] = !no_normalize;
      report["config"] = std::move(echo);
      json detected = json::array();
      json l1 = json::array();
      std::size_t count = 0;
      for (std::size_t k = 0; k < sets.size(); ++k) {
        json dk = json::array();
        json lk = json::array();
        for (int j = 0; j < n; ++j) {
          lk.push_back(mask.error_l1(j, k));
          if (mask.detected(j, k)) {
            dk.push_back(r.ppms[k].target_to_source[j]);
            ++count;
          }
        }
        detected.push_back(std::move(dk));
        l1.push_back(std::move(lk));
      }
      report["result"] = solve_json(r);
      report["rpca_converged"] = mask.rpca_converged;
      report["detected_sources"] = std::move(detected);
      report["error_l1"] = std::move(l1);
      std::string summary = "detect-inliers: " + std::to_string(count) +
                            " of " + std::to_string(n * sets.size()) +
                            " matched features flagged as inliers";
      if (ds.truth) {
        const PrecisionRecall pr = detection_precision_recall(mask, *ds.truth, r.ppms);
        report["metrics"] = truth_metrics(r.ppms, *ds.truth);
        report["metrics"]["precision"] = pr.precision;
        report["metrics"]["recall"] = pr.recall;
        summary += ", precision " + fmt(pr.precision) + ", recall " + fmt(pr.recall);
      }
      emitter.emit(std::move(report), summary);
    } else if (*embed) {
      Dataset ds = load_dataset(manifest);
      if (ds.coords.size() != ds.sets.size()) {
        throw ConfigError("embed needs a coord_file for every image");
      }
      std::vector<PointSet> points;
      for (std::size_t k = 0; k < ds.sets.size(); ++k) {
        points.push_back({ds.coords[k], ds.sets[k].features, ds.sets[k].image_id});
      }
      const AffinityMatrix a = build_affinity(points, sigma_spa, sigma_des);
      Embedding e = laplacian_embed(a, dim);
      for (std::size_t k = 0; k < e.sets.size(); ++k) {
        e.sets[k].image_id = ds.sets[k].image_id;
      }
      if (!out_manifest.empty()) {
        Dataset emb;
        emb.mode = StackingMode::kDescriptor;
        emb.sets = e.sets;
        emb.truth = ds.truth;
        save_dataset(out_manifest, emb);
      }
      json report = report_header("embed");
      json echo;
      echo["command"] = "embed";
      echo["d"] = dim;
      echo["sigma_spa"] = sigma_spa;
      echo["sigma_des"] = sigma_des;
      report["config"] = std::move(echo);
      report["points"] = a.A.rows();
      report["eigenvalues"] =
          std::vector<double>(e.eigenvalues.data(), e.eigenvalues.data() + e.eigenvalues.size());
      if (!out_manifest.empty()) report["manifest"] = out_manifest;
      emitter.emit(std::move(report),
                   "embed: " + std::to_string(a.A.rows()) + " points in " +
                       std::to_string(dim) + " dimensions");
    } else if (*oracle) {
      Dataset ds = load_dataset(manifest);
      const StackingMode mode = pick_mode(solver.mode, ds.mode);
      const auto sets = prepare(ds.sets, mode, !no_normalize);
      const MiapSolution best = brute_force_miap(sets, n, mode);
      json report = report_header("oracle");
      const RomlConfig config = make_config(solver, common, n, mode);
      json echo = config_echo("oracle", config,
                              resolve_parameters(config, sets[0].dim(),
                                                 static_cast<int>(sets.size())),
                              common);
      echo["normalize"] = !no_normalize;
      echo["compare"] = compare;
      report["config"] = std::move(echo);
      report["ppms"] = ppms_json(best.ppms);
      report["optimal_nuclear"] = best.optimal_nuclear;
      report["evaluated"] = best.evaluated;
      std::string summary = "oracle: optimum " + fmt(best.optimal_nuclear, 6) +
                            " over " + std::to_string(best.evaluated) +
                            " candidates";
      if (compare) {
        const MatchReport r = solve_roml(sets, config);
        const double value = nuclear_norm(r.D);
        report["solver"] = {{"ppms", ppms_json(r.ppms)},
                            {"nuclear_norm_d", value},
                            {"gap", value - best.optimal_nuclear},
                            {"iterations", r.iterations_used},
                            {"converged", r.converged}};
        summary += ", solver gap " + fmt(value - best.optimal_nuclear, 6);
      }
      emitter.emit(std::move(report), summary);
    }
  } catch (const NumericError& e) {
    err << "numeric failure: " << e.what() << "\n";
    return kExitNumeric;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitOk;
}

}  // namespace roml::cli
