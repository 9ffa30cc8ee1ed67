#pragma once

#include <cstdint>
#include <vector>

#include "roml/prox.hpp"

namespace roml {

// SplitMix64 (Steele, Lea and Flood, 2014): a counter-based generator where
// the state advances by the golden-ratio gamma 0x9E3779B97F4A7C15 and each
// output is a fixed bit-mixing of the counter. All derived distributions
// are implemented here rather than with <random> distributions, whose
// algorithms are implementation defined, so seeded streams are identical
// across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next_u64();
  // Uniform on [0, 1) with 53 random bits.
  double uniform01();
  double uniform(double lo, double hi);
  // Uniform integer in [0, bound); bound must be positive.
  std::uint64_t uniform_int(std::uint64_t bound);
  // Standard normal via the Box-Muller transform (pairs are cached).
  double normal();

  // Fisher-Yates shuffle.
  template <typename T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(uniform_int(i));
      std::swap(v[i - 1], v[j]);
    }
  }

  // Random k-subset of [0, n) in random order.
  std::vector<int> sample_without_replacement(int n, int k);

  Matrix normal_matrix(Eigen::Index rows, Eigen::Index cols);

  // Seed of an independent stream, e.g. one per trial or per image.
  static std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream);

 private:
  std::uint64_t state_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace roml
