#include "roml/features.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "roml/errors.hpp"

namespace roml {

bool PartialPermutation::is_valid() const {
  return is_injective(Assignment{target_to_source}, n_sources);
}

Matrix PartialPermutation::to_matrix() const {
  Matrix p = Matrix::Zero(n_sources, n_targets());
  for (int j = 0; j < n_targets(); ++j) p(target_to_source[j], j) = 1.0;
  return p;
}

const char* to_string(StackingMode mode) {
  return mode == StackingMode::kDescriptor ? "descriptor" : "coordinate";
}

StackingMode parse_stacking_mode(const std::string& name) {
  if (name == "descriptor") return StackingMode::kDescriptor;
  if (name == "coordinate") return StackingMode::kCoordinate;
  throw InvalidInputError("unknown stacking mode '" + name +
                          "' (expected descriptor or coordinate)");
}

void validate_feature_set(const FeatureSet& fs) {
  if (fs.dim() < 1 || fs.size() < 1) {
    std::ostringstream os;
    os << "feature set '" << fs.image_id << "' is empty (" << fs.dim() << "x"
       << fs.size() << ")";
    throw DimensionError(os.str());
  }
  require_finite(fs.features, "feature matrix");
}

FeatureSet normalize_features(const FeatureSet& fs, double c) {
  if (!(c > 0.0) || !std::isfinite(c)) {
    throw InvalidInputError("normalization constant must be positive");
  }
  validate_feature_set(fs);
  FeatureSet out = fs;
  for (int i = 0; i < fs.size(); ++i) {
    const double norm = fs.features.col(i).norm();
    if (norm == 0.0) {
      std::ostringstream os;
      os << "feature set '" << fs.image_id << "' has a zero column at index "
         << i;
      throw DegenerateFeatureError(os.str(), i);
    }
    out.features.col(i) *= c / norm;
  }
  out.norm_constant = c;
  return out;
}

std::vector<FeatureSet> emphasize_first(const std::vector<FeatureSet>& sets,
                                        double factor, double c) {
  if (!(factor > 0.0)) {
    throw InvalidInputError("emphasis factor must be positive");
  }
  std::vector<FeatureSet> out;
  out.reserve(sets.size());
  for (std::size_t k = 0; k < sets.size(); ++k) {
    out.push_back(normalize_features(sets[k], k == 0 ? factor * c : c));
  }
  return out;
}

FeatureSet center_columns(const FeatureSet& fs) {
  validate_feature_set(fs);
  FeatureSet out = fs;
  const Vector mean = fs.features.rowwise().mean();
  out.features.colwise() -= mean;
  out.norm_constant.reset();
  return out;
}

Matrix select_columns(const FeatureSet& fs, const PartialPermutation& ppm) {
  if (ppm.n_sources != fs.size()) {
    std::ostringstream os;
    os << "permutation expects " << ppm.n_sources << " sources but '"
       << fs.image_id << "' has " << fs.size();
    throw DimensionError(os.str());
  }
  Matrix out(fs.dim(), ppm.n_targets());
  for (int j = 0; j < ppm.n_targets(); ++j) {
    out.col(j) = fs.features.col(ppm.target_to_source[j]);
  }
  return out;
}

Matrix assemble_d(const std::vector<FeatureSet>& sets,
                  const std::vector<PartialPermutation>& ppms,
                  StackingMode mode) {
  if (sets.empty() || sets.size() != ppms.size()) {
    std::ostringstream os;
    os << "assemble_d needs one permutation per feature set (" << sets.size()
       << " sets, " << ppms.size() << " permutations)";
    throw DimensionError(os.str());
  }
  const int k_images = static_cast<int>(sets.size());
  const int d = sets[0].dim();
  const int n = ppms[0].n_targets();
  for (int k = 0; k < k_images; ++k) {
    if (sets[k].dim() != d) {
      std::ostringstream os;
      os << "feature dimension mismatch: '" << sets[0].image_id << "' has d="
         << d << ", '" << sets[k].image_id << "' has d=" << sets[k].dim();
      throw DimensionError(os.str());
    }
    if (ppms[k].n_targets() != n) {
      throw DimensionError("permutations disagree on the number of slots");
    }
    if (!ppms[k].is_valid()) {
      throw InvalidInputError("permutation for image " + std::to_string(k) +
                              " is not a valid partial permutation");
    }
  }
  if (mode == StackingMode::kCoordinate && d != 2) {
    throw DimensionError("coordinate stacking requires d = 2, got d = " +
                         std::to_string(d));
  }

  if (mode == StackingMode::kDescriptor) {
    Matrix out(static_cast<Eigen::Index>(d) * n, k_images);
    for (int k = 0; k < k_images; ++k) {
      const Matrix selected = select_columns(sets[k], ppms[k]);
      out.col(k) = selected.reshaped();
    }
    return out;
  }
  Matrix out(2 * k_images, n);
  for (int k = 0; k < k_images; ++k) {
    out.middleRows(2 * k, 2) = select_columns(sets[k], ppms[k]);
  }
  return out;
}

std::vector<int> canonical_slot_order(
    const std::vector<PartialPermutation>& ppms) {
  if (ppms.empty()) return {};
  const int n = ppms[0].n_targets();
  for (const auto& p : ppms) {
    if (p.n_targets() != n) {
      throw DimensionError("canonicalize: permutations disagree on n");
    }
  }
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  const auto& first = ppms[0].target_to_source;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return first[a] < first[b]; });
  return order;
}

std::vector<PartialPermutation> canonicalize(
    const std::vector<PartialPermutation>& ppms) {
  const std::vector<int> order = canonical_slot_order(ppms);
  std::vector<PartialPermutation> out = ppms;
  for (std::size_t k = 0; k < ppms.size(); ++k) {
    for (std::size_t j = 0; j < order.size(); ++j) {
      out[k].target_to_source[j] = ppms[k].target_to_source[order[j]];
    }
  }
  return out;
}

Matrix permute_slots(const Matrix& stacked, const std::vector<int>& order,
                     StackingMode mode) {
  const auto n = static_cast<Eigen::Index>(order.size());
  Matrix out(stacked.rows(), stacked.cols());
  if (mode == StackingMode::kCoordinate) {
    if (stacked.cols() != n) throw DimensionError("permute_slots: bad width");
    for (Eigen::Index j = 0; j < n; ++j) out.col(j) = stacked.col(order[j]);
    return out;
  }
  if (n == 0 || stacked.rows() % n != 0) {
    throw DimensionError("permute_slots: rows not a multiple of n");
  }
  const Eigen::Index d = stacked.rows() / n;
  for (Eigen::Index j = 0; j < n; ++j) {
    out.middleRows(j * d, d) = stacked.middleRows(order[j] * d, d);
  }
  return out;
}

PartialPermutation first_n(int n_sources, int n) {
  PartialPermutation p;
  p.n_sources = n_sources;
  p.target_to_source.resize(n);
  std::iota(p.target_to_source.begin(), p.target_to_source.end(), 0);
  return p;
}

PartialPermutation from_assignment(const Assignment& a, int n_sources) {
  return PartialPermutation{n_sources, a.target_to_source};
}

}  // namespace roml
