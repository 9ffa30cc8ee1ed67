#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "roml/features.hpp"
#include "roml/synthetic.hpp"

namespace roml {

// Matrix text format: a "rows,cols" header line, then one line per row of
// comma-separated decimal values. Values are written in the shortest form
// that parses back to the same double.
std::string format_matrix_csv(const Matrix& m);

// `source` names the input in error messages ("<source>:<line>:<column>").
Matrix parse_matrix_csv(const std::string& text, const std::string& source);

Matrix read_matrix_csv(const std::filesystem::path& path);
void write_matrix_csv(const std::filesystem::path& path, const Matrix& m);

inline constexpr int kManifestVersion = 1;

// Per-box side information for the bounding-box feature augmentation.
struct BoxInfo {
  std::vector<double> aspect_ratios;
  std::vector<double> objectness;
};

struct Dataset {
  StackingMode mode = StackingMode::kDescriptor;
  std::vector<FeatureSet> sets;
  // Coordinates (2 x n_k) per image, present when every image lists a
  // coord_file.
  std::vector<Matrix> coords;
  std::optional<GroundTruth> truth;
  std::vector<std::optional<BoxInfo>> boxes;
};

// JSON manifest:
//   {"version": 1, "mode": "descriptor" | "coordinate",
//    "images": [{"id": ..., "feature_file": ..., "coord_file": ...,
//                "ground_truth": [source indices per slot],
//                "aspect_ratios": [...], "objectness": [...]}]}
// Ground truth must be given for all images or none; the truth then treats
// the listed columns as the inliers.
Dataset load_dataset(const std::filesystem::path& manifest_path);

// Writes one CSV per image next to the manifest and the manifest itself.
void save_dataset(const std::filesystem::path& manifest_path,
                  const Dataset& dataset);

// Ground truth whose slot j of image k is ppms[k][j] and whose inliers are
// exactly the selected columns.
GroundTruth truth_from_selections(const std::vector<PartialPermutation>& ppms);

}  // namespace roml
