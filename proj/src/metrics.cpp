#include "roml/metrics.hpp"

#include <sstream>

#include "roml/errors.hpp"
#include "roml/lsap.hpp"
#include "roml/select.hpp"

namespace roml {
namespace {

void check_shapes(const std::vector<PartialPermutation>& a,
                  const std::vector<PartialPermutation>& b) {
  if (a.size() != b.size() || a.empty()) {
    std::ostringstream os;
    os << "expected matching permutation lists, got " << a.size() << " and "
       << b.size();
    throw DimensionError(os.str());
  }
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (a[k].n_sources != b[k].n_sources ||
        a[k].n_targets() != b[k].n_targets()) {
      throw DimensionError("permutation shapes differ for image " +
                           std::to_string(k));
    }
  }
}

void check_truth(const std::vector<PartialPermutation>& found,
                 const GroundTruth& truth) {
  if (truth.inlier_ids.size() != found.size()) {
    throw DimensionError("ground truth covers a different number of images");
  }
  for (std::size_t k = 0; k < found.size(); ++k) {
    if (static_cast<int>(truth.inlier_ids[k].size()) != found[k].n_sources) {
      throw DimensionError("ground truth size differs for image " +
                           std::to_string(k));
    }
  }
}

}  // namespace

double recovery_rate(const std::vector<PartialPermutation>& found,
                     const std::vector<PartialPermutation>& truth) {
  check_shapes(found, truth);
  const int n = truth[0].n_targets();
  for (const auto& p : truth) {
    if (p.n_targets() != n) {
      throw DimensionError("recovery_rate: permutations disagree on n");
    }
  }
  if (n == 0) return 1.0;
  // overlap(a, b): images where found slot a equals truth slot b.
  Matrix overlap = Matrix::Zero(n, n);
  for (std::size_t k = 0; k < found.size(); ++k) {
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        if (found[k].target_to_source[a] == truth[k].target_to_source[b]) {
          overlap(a, b) += 1.0;
        }
      }
    }
  }
  const AssignmentResult best = solve_lsap({-overlap});
  const double hits = -best.total_cost;
  return hits / (static_cast<double>(n) * static_cast<double>(found.size()));
}

MatchRatios match_identification_ratios(
    const std::vector<PartialPermutation>& found, const GroundTruth& truth) {
  check_truth(found, truth);
  const std::size_t K = found.size();
  double n_bar = 0.0;
  double n_found = 0.0;
  double n_star = 0.0;
  for (std::size_t a = 0; a < K; ++a) {
    for (std::size_t b = a + 1; b < K; ++b) {
      const auto& pa = found[a].target_to_source;
      const auto& pb = found[b].target_to_source;
      if (pa.size() != pb.size()) {
        throw DimensionError("match ratios: permutations disagree on n");
      }
      n_found += static_cast<double>(pa.size());
      for (std::size_t j = 0; j < pa.size(); ++j) {
        const int ia = truth.inlier_ids[a][pa[j]];
        if (ia >= 0 && ia == truth.inlier_ids[b][pb[j]]) n_bar += 1.0;
      }
      std::vector<char> present;
      for (int id : truth.inlier_ids[a]) {
        if (id < 0) continue;
        if (id >= static_cast<int>(present.size())) present.resize(id + 1, 0);
        present[id] = 1;
      }
      for (int id : truth.inlier_ids[b]) {
        if (id >= 0 && id < static_cast<int>(present.size()) && present[id]) {
          n_star += 1.0;
        }
      }
    }
  }
  MatchRatios r;
  r.match = n_found > 0.0 ? n_bar / n_found : 0.0;
  r.identification = n_star > 0.0 ? n_bar / n_star : 0.0;
  return r;
}

PrecisionRecall detection_precision_recall(
    const InlierMask& mask, const GroundTruth& truth,
    const std::vector<PartialPermutation>& found) {
  check_truth(found, truth);
  const auto K = static_cast<Eigen::Index>(found.size());
  const auto n = static_cast<Eigen::Index>(found[0].n_targets());
  if (mask.detected.rows() != n || mask.detected.cols() != K) {
    throw DimensionError("inlier mask must be n x K");
  }
  double detected = 0.0;
  double detected_true = 0.0;
  for (Eigen::Index k = 0; k < K; ++k) {
    for (Eigen::Index j = 0; j < n; ++j) {
      if (!mask.detected(j, k)) continue;
      detected += 1.0;
      if (truth.is_inlier(static_cast<int>(k),
                          found[k].target_to_source[j])) {
        detected_true += 1.0;
      }
    }
  }
  PrecisionRecall pr;
  pr.precision = detected > 0.0 ? detected_true / detected : 1.0;
  const int total = truth.total_inliers();
  pr.recall = total > 0 ? detected_true / total : 0.0;
  return pr;
}

}  // namespace roml
