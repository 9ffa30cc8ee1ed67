#include "roml/random.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

#include "roml/errors.hpp"

namespace roml {
namespace {

constexpr std::uint64_t kGamma = 0x9E3779B97F4A7C15ULL;

std::uint64_t mix(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

std::uint64_t Rng::next_u64() {
  state_ += kGamma;
  return mix(state_);
}

double Rng::uniform01() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi) {
  return lo + (hi - lo) * uniform01();
}

std::uint64_t Rng::uniform_int(std::uint64_t bound) {
  if (bound == 0) throw InvalidInputError("uniform_int bound must be positive");
  // Rejection keeps the result unbiased: discard the partial top bucket.
  const std::uint64_t limit = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r >= limit) return r % bound;
  }
}

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  // 1 - uniform01() lies in (0, 1], keeping the logarithm finite.
  const double u1 = 1.0 - uniform01();
  const double u2 = uniform01();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_ = radius * std::sin(angle);
  has_spare_ = true;
  return radius * std::cos(angle);
}

std::vector<int> Rng::sample_without_replacement(int n, int k) {
  if (k < 0 || k > n) {
    throw InvalidInputError("cannot sample " + std::to_string(k) + " of " +
                            std::to_string(n));
  }
  std::vector<int> pool(n);
  std::iota(pool.begin(), pool.end(), 0);
  // Partial Fisher-Yates from the front.
  for (int i = 0; i < k; ++i) {
    const auto j = i + static_cast<int>(uniform_int(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  return pool;
}

Matrix Rng::normal_matrix(Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  // Fill column by column so the stream order is independent of storage.
  for (Eigen::Index c = 0; c < cols; ++c) {
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = normal();
  }
  return m;
}

std::uint64_t Rng::derive_seed(std::uint64_t seed, std::uint64_t stream) {
  return mix(seed + kGamma * (stream + 1)) ^ mix(stream * 0xD1B54A32D192ED03ULL);
}

}  // namespace roml
