#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "roml/io.hpp"
#include "roml/random.hpp"

namespace roml::cli {

inline constexpr int kFormatVersion = 1;

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitNumeric = 2;

inline constexpr double kDefaultKappaR = 0.08;
inline constexpr double kDefaultKappaN = 0.015;

// Bounding-box feature augmentation: each column f becomes
// [f; kappa_r * r] + kappa_n * e, where r is the box aspect ratio and e has
// independent normal entries with standard deviation 1 - objectness.
FeatureSet augment_box_features(const FeatureSet& fs, const BoxInfo& boxes,
                                double kappa_r, double kappa_n, Rng& rng);

// Entry point of the command-line tool. args excludes the program name.
// Reports go to the --out file, or to `out` when --out is "-" (then the
// one-line summary goes to `err`). Returns kExitOk, kExitUsage for usage,
// input and configuration errors, or kExitNumeric for numeric failures.
int run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace roml::cli
