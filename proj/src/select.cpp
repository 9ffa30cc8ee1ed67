#include "roml/select.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "roml/errors.hpp"

namespace roml {
namespace {

void check_blocks(const Matrix& D, int d, int n) {
  if (d < 1 || n < 1 || D.rows() != static_cast<Eigen::Index>(d) * n) {
    std::ostringstream os;
    os << "D has " << D.rows() << " rows, expected d*n = " << d << "*" << n;
    throw DimensionError(os.str());
  }
}

}  // namespace

CorrespondenceNuclear per_correspondence_nuclear(const Matrix& D, int d,
                                                 int n) {
  check_blocks(D, d, n);
  CorrespondenceNuclear out;
  out.per_slot.reserve(n);
  for (int j = 0; j < n; ++j) {
    out.per_slot.push_back(nuclear_norm(D.middleRows(j * d, d)));
  }
  out.gamma_n = *std::max_element(out.per_slot.begin(), out.per_slot.end());
  return out;
}

InlierCountEstimate estimate_inlier_count(const std::vector<FeatureSet>& sets,
                                          const RomlConfig& base_config,
                                          double delta, int n_max) {
  if (!(delta > 0.0)) throw ConfigError("delta must be positive");
  if (sets.empty()) throw ConfigError("no feature sets given");
  int min_nk = sets[0].size();
  for (const auto& fs : sets) min_nk = std::min(min_nk, fs.size());
  if (n_max == 0) n_max = min_nk - 1;
  if (n_max < 1 || n_max > min_nk) {
    std::ostringstream os;
    os << "n_max must lie in [1, " << min_nk << "], got " << n_max;
    throw ConfigError(os.str());
  }
  if (base_config.mode != StackingMode::kDescriptor) {
    throw ConfigError("inlier-count estimation uses descriptor stacking");
  }

  InlierCountEstimate est;
  double gamma_sum = 0.0;
  const int last_n = std::min(n_max + 1, min_nk);
  for (int n = 1; n <= last_n; ++n) {
    RomlConfig config = base_config;
    config.n = n;
    config.tracking.reset();
    MatchReport report;
    try {
      report = solve_roml(sets, config);
    } catch (const NumericError& e) {
      throw NumericError("inlier-count estimation failed at n=" +
                             std::to_string(n) + ": " + e.what(),
                         e.iteration());
    }
    const double gamma =
        per_correspondence_nuclear(report.D, sets[0].dim(), n).gamma_n;
    if (n >= 2) {
      const double bar = est.gamma_bar_series.back();
      if (bar > 0.0 && (gamma - bar) / bar > delta) {
        est.gamma_series.push_back(gamma);
        est.gamma_bar_series.push_back((gamma_sum + gamma) / n);
        est.n_hat = n - 1;
        est.found = true;
        return est;
      }
    }
    gamma_sum += gamma;
    est.gamma_series.push_back(gamma);
    est.gamma_bar_series.push_back(gamma_sum / n);
  }
  est.n_hat = n_max;
  return est;
}

InlierMask detect_true_inliers(const Matrix& D, int d, int n, double xi,
                               const RpcaConfig& rpca) {
  check_blocks(D, d, n);
  if (!(xi > 0.0)) throw ConfigError("xi must be positive");
  RpcaConfig config = rpca;
  if (!config.lambda) {
    config.lambda = 1.0 / std::sqrt(static_cast<double>(d) * n);
  }
  const RpcaResult result = solve_rpca(D, config);

  InlierMask mask;
  mask.rpca_converged = result.converged;
  const auto K = D.cols();
  mask.error_l1.resize(n, K);
  mask.detected.resize(n, K);
  for (Eigen::Index k = 0; k < K; ++k) {
    for (int j = 0; j < n; ++j) {
      const double l1 = result.E.col(k).segment(j * d, d).cwiseAbs().sum();
      mask.error_l1(j, k) = l1;
      mask.detected(j, k) = l1 < xi;
    }
  }
  return mask;
}

}  // namespace roml
