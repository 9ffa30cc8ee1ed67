#include "roml/oracle.hpp"

#include <sstream>

#include "roml/errors.hpp"

namespace roml {
namespace {

// Advances `c` to the next ascending k-subset of [0, n); false at the end.
bool next_combination(std::vector<int>& c, int n) {
  const int k = static_cast<int>(c.size());
  int i = k - 1;
  while (i >= 0 && c[i] == n - k + i) --i;
  if (i < 0) return false;
  ++c[i];
  for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
  return true;
}

// Advances `p` to the next injective k-tuple over [0, n) in lexicographic
// order; false at the end.
bool next_injection(std::vector<int>& p, int n) {
  const int k = static_cast<int>(p.size());
  std::vector<char> used(n, 0);
  for (int v : p) used[v] = 1;
  for (int i = k - 1; i >= 0; --i) {
    used[p[i]] = 0;
    int v = p[i] + 1;
    while (v < n && used[v]) ++v;
    if (v == n) continue;
    p[i] = v;
    used[v] = 1;
    // Fill the tail with the smallest unused values.
    int next = 0;
    for (int j = i + 1; j < k; ++j) {
      while (used[next]) ++next;
      p[j] = next;
      used[next] = 1;
    }
    return true;
  }
  return false;
}

std::vector<int> iota_vec(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

}  // namespace

double miap_search_size(const std::vector<FeatureSet>& sets, int n) {
  if (sets.empty() || n < 1) return 0.0;
  double count = 1.0;
  const int n0 = sets[0].size();
  for (int i = 0; i < n; ++i) {
    count *= static_cast<double>(n0 - i) / static_cast<double>(i + 1);
  }
  for (std::size_t k = 1; k < sets.size(); ++k) {
    for (int i = 0; i < n; ++i) count *= sets[k].size() - i;
  }
  return count;
}

MiapSolution brute_force_miap(const std::vector<FeatureSet>& sets, int n,
                              StackingMode mode) {
  if (sets.size() < 2) throw ConfigError("need at least two feature sets");
  if (n < 1) throw ConfigError("n must be at least 1");
  for (const auto& fs : sets) {
    validate_feature_set(fs);
    if (fs.size() < n) {
      throw ConfigError("n=" + std::to_string(n) + " exceeds the " +
                        std::to_string(fs.size()) + " features of '" +
                        fs.image_id + "'");
    }
  }
  const double size = miap_search_size(sets, n);
  if (size > kMiapEnumerationLimit) {
    std::ostringstream os;
    os << "brute_force_miap would enumerate " << size
       << " permutation tuples (limit " << kMiapEnumerationLimit << ")";
    throw OversizeError(os.str());
  }

  const std::size_t K = sets.size();
  std::vector<PartialPermutation> current(K);
  for (std::size_t k = 0; k < K; ++k) current[k] = first_n(sets[k].size(), n);

  MiapSolution best;
  bool have_best = false;
  while (true) {
    const double value = nuclear_norm(assemble_d(sets, current, mode));
    ++best.evaluated;
    if (!have_best || value < best.optimal_nuclear) {
      best.optimal_nuclear = value;
      best.ppms = current;
      have_best = true;
    }
    // Odometer: the last image varies fastest, image 0 slowest.
    std::size_t k = K;
    bool advanced = false;
    while (k-- > 0) {
      auto& sel = current[k].target_to_source;
      const bool ok = k == 0 ? next_combination(sel, sets[0].size())
                             : next_injection(sel, sets[k].size());
      if (ok) {
        advanced = true;
        break;
      }
      sel = iota_vec(n);
    }
    if (!advanced) break;
  }
  return best;
}

}  // namespace roml
