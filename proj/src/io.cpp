#include "roml/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "roml/errors.hpp"

namespace roml {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

[[noreturn]] void fail_at(const std::string& source, std::size_t line,
                          std::size_t column, const std::string& what) {
  std::ostringstream os;
  os << source << ":" << line << ":" << column << ": " << what;
  throw IoError(os.str());
}

// Splits on '\n'; a single trailing newline does not open another line.
std::vector<std::string_view> split_lines(std::string_view text) {
  std::vector<std::string_view> lines;
  std::size_t start = 0;
  while (start < text.size()) {
    const std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) {
      lines.push_back(text.substr(start));
      break;
    }
    lines.push_back(text.substr(start, end - start));
    start = end + 1;
  }
  return lines;
}

template <typename T>
T parse_number(std::string_view field, const std::string& source,
               std::size_t line, std::size_t column) {
  T value{};
  const char* first = field.data();
  const char* last = field.data() + field.size();
  if (!field.empty() && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc() || ptr != last) {
    fail_at(source, line, column,
            "cannot parse '" + std::string(field) + "' as a number");
  }
  return value;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

template <typename T>
std::vector<T> json_array(const json& j, const char* key,
                          const std::string& where) {
  if (!j.is_array()) {
    throw IoError(where + ": '" + key + "' must be an array");
  }
  std::vector<T> out;
  for (const auto& v : j) {
    if (!v.is_number()) {
      throw IoError(where + ": '" + key + "' must hold numbers");
    }
    out.push_back(v.get<T>());
  }
  return out;
}

std::string json_string(const json& obj, const char* key,
                        const std::string& where) {
  if (!obj.contains(key) || !obj[key].is_string()) {
    throw IoError(where + ": missing string field '" + key + "'");
  }
  return obj[key].get<std::string>();
}

}  // namespace

std::string format_matrix_csv(const Matrix& m) {
  std::string out = std::to_string(m.rows()) + "," + std::to_string(m.cols());
  out += '\n';
  char buf[64];
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      if (c > 0) out += ',';
      const auto res = std::to_chars(buf, buf + sizeof(buf), m(r, c));
      out.append(buf, res.ptr);
    }
    out += '\n';
  }
  return out;
}

Matrix parse_matrix_csv(const std::string& text, const std::string& source) {
  const auto lines = split_lines(text);
  if (lines.empty()) fail_at(source, 1, 1, "empty file, expected 'rows,cols'");

  const std::string_view header = lines[0];
  const std::size_t comma = header.find(',');
  if (comma == std::string_view::npos) {
    fail_at(source, 1, 1, "header must be 'rows,cols'");
  }
  const auto rows = parse_number<long>(header.substr(0, comma), source, 1, 1);
  const auto cols =
      parse_number<long>(header.substr(comma + 1), source, 1, comma + 2);
  if (rows < 0 || cols < 0) fail_at(source, 1, 1, "negative dimension");
  if (static_cast<long>(lines.size()) - 1 != rows) {
    std::ostringstream os;
    os << "header declares " << rows << " rows, found "
       << lines.size() - 1;
    fail_at(source, lines.size(), 1, os.str());
  }

  Matrix m(rows, cols);
  for (long r = 0; r < rows; ++r) {
    const std::string_view line = lines[r + 1];
    const std::size_t line_no = r + 2;
    std::size_t pos = 0;
    for (long c = 0; c < cols; ++c) {
      if (pos > line.size()) {
        std::ostringstream os;
        os << "expected " << cols << " values, found " << c;
        fail_at(source, line_no, line.size() + 1, os.str());
      }
      std::size_t end = line.find(',', pos);
      if (end == std::string_view::npos) end = line.size();
      m(r, c) = parse_number<double>(line.substr(pos, end - pos), source,
                                     line_no, pos + 1);
      pos = end + 1;
    }
    if (cols > 0 ? pos <= line.size() : !line.empty()) {
      std::ostringstream os;
      os << "more than " << cols << " values";
      fail_at(source, line_no, pos + 1, os.str());
    }
  }
  return m;
}

Matrix read_matrix_csv(const fs::path& path) {
  return parse_matrix_csv(read_file(path), path.string());
}

void write_matrix_csv(const fs::path& path, const Matrix& m) {
  write_file(path, format_matrix_csv(m));
}

GroundTruth truth_from_selections(const std::vector<PartialPermutation>& ppms) {
  GroundTruth truth;
  truth.ppms = ppms;
  for (const auto& p : ppms) {
    std::vector<int> ids(p.n_sources, -1);
    for (int j = 0; j < p.n_targets(); ++j) ids[p.target_to_source[j]] = j;
    truth.inlier_ids.push_back(std::move(ids));
  }
  return truth;
}

Dataset load_dataset(const fs::path& manifest_path) {
  const std::string where = manifest_path.string();
  json manifest;
  try {
    manifest = json::parse(read_file(manifest_path));
  } catch (const json::parse_error& e) {
    throw IoError(where + ": " + e.what());
  }
  if (!manifest.is_object()) throw IoError(where + ": expected an object");
  if (!manifest.contains("version") || !manifest["version"].is_number_integer() ||
      manifest["version"].get<int>() != kManifestVersion) {
    throw IoError(where + ": unsupported or missing 'version' (expected " +
                  std::to_string(kManifestVersion) + ")");
  }

  Dataset ds;
  if (manifest.contains("mode")) {
    try {
      ds.mode = parse_stacking_mode(json_string(manifest, "mode", where));
    } catch (const InvalidInputError& e) {
      throw IoError(where + ": " + e.what());
    }
  }
  if (!manifest.contains("images") || !manifest["images"].is_array() ||
      manifest["images"].empty()) {
    throw IoError(where + ": 'images' must be a non-empty array");
  }

  const fs::path base = manifest_path.parent_path();
  std::vector<PartialPermutation> truth;
  std::string first_file;
  int n_with_truth = 0;
  int n_with_coords = 0;
  for (std::size_t k = 0; k < manifest["images"].size(); ++k) {
    const json& img = manifest["images"][k];
    const std::string at = where + ": images[" + std::to_string(k) + "]";
    if (!img.is_object()) throw IoError(at + ": expected an object");
    const std::string feature_file = json_string(img, "feature_file", at);

    FeatureSet set;
    set.image_id = img.contains("id") ? json_string(img, "id", at)
                                     : "image" + std::to_string(k);
    const fs::path fpath = base / feature_file;
    set.features = read_matrix_csv(fpath);
    if (k == 0) {
      first_file = fpath.string();
    } else if (set.dim() != ds.sets[0].dim()) {
      std::ostringstream os;
      os << "feature dimension mismatch: '" << first_file << "' has d="
         << ds.sets[0].dim() << ", '" << fpath.string() << "' has d="
         << set.dim();
      throw DimensionError(os.str());
    }

    if (img.contains("coord_file")) {
      const fs::path cpath = base / json_string(img, "coord_file", at);
      Matrix coords = read_matrix_csv(cpath);
      if (coords.rows() != 2 || coords.cols() != set.size()) {
        std::ostringstream os;
        os << "'" << cpath.string() << "' is " << coords.rows() << "x"
           << coords.cols() << ", expected 2x" << set.size();
        throw DimensionError(os.str());
      }
      ds.coords.push_back(std::move(coords));
      ++n_with_coords;
    }

    if (img.contains("ground_truth")) {
      PartialPermutation p;
      p.n_sources = set.size();
      p.target_to_source = json_array<int>(img["ground_truth"], "ground_truth", at);
      if (!p.is_valid()) {
        throw IoError(at + ": 'ground_truth' must list distinct column "
                      "indices below " + std::to_string(set.size()));
      }
      if (!truth.empty() && p.n_targets() != truth[0].n_targets()) {
        throw IoError(at + ": 'ground_truth' length differs from image 0");
      }
      truth.push_back(std::move(p));
      ++n_with_truth;
    }

    std::optional<BoxInfo> boxes;
    if (img.contains("aspect_ratios") || img.contains("objectness")) {
      if (!img.contains("aspect_ratios") || !img.contains("objectness")) {
        throw IoError(at + ": 'aspect_ratios' and 'objectness' go together");
      }
      BoxInfo b;
      b.aspect_ratios = json_array<double>(img["aspect_ratios"], "aspect_ratios", at);
      b.objectness = json_array<double>(img["objectness"], "objectness", at);
      const auto nk = static_cast<std::size_t>(set.size());
      if (b.aspect_ratios.size() != nk || b.objectness.size() != nk) {
        throw DimensionError(at + ": box lists must have one entry per column");
      }
      boxes = std::move(b);
    }
    ds.boxes.push_back(std::move(boxes));
    ds.sets.push_back(std::move(set));
  }

  const auto K = static_cast<int>(ds.sets.size());
  if (n_with_truth != 0 && n_with_truth != K) {
    throw IoError(where + ": 'ground_truth' must be given for all images or none");
  }
  if (n_with_coords != 0 && n_with_coords != K) {
    throw IoError(where + ": 'coord_file' must be given for all images or none");
  }
  if (n_with_truth == K) ds.truth = truth_from_selections(truth);
  return ds;
}

void save_dataset(const fs::path& manifest_path, const Dataset& dataset) {
  const fs::path base = manifest_path.parent_path();
  if (!base.empty()) fs::create_directories(base);
  json manifest;
  manifest["version"] = kManifestVersion;
  manifest["mode"] = to_string(dataset.mode);
  json images = json::array();
  for (std::size_t k = 0; k < dataset.sets.size(); ++k) {
    const FeatureSet& set = dataset.sets[k];
    json img;
    img["id"] = set.image_id;
    const std::string ffile = set.image_id + ".features.csv";
    write_matrix_csv(base / ffile, set.features);
    img["feature_file"] = ffile;
    if (k < dataset.coords.size()) {
      const std::string cfile = set.image_id + ".coords.csv";
      write_matrix_csv(base / cfile, dataset.coords[k]);
      img["coord_file"] = cfile;
    }
    if (dataset.truth) img["ground_truth"] = dataset.truth->ppms[k].target_to_source;
    if (k < dataset.boxes.size() && dataset.boxes[k]) {
      img["aspect_ratios"] = dataset.boxes[k]->aspect_ratios;
      img["objectness"] = dataset.boxes[k]->objectness;
    }
    images.push_back(std::move(img));
  }
  manifest["images"] = std::move(images);
  write_file(manifest_path, manifest.dump(2) + "\n");
}

}  // namespace roml
