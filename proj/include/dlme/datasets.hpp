#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dlme/matrix.hpp"

namespace dlme {

struct Dataset {
  std::string name;
  Matrix X;
  std::vector<int> labels;  // empty when unlabeled
  std::map<std::string, double> params;  // generator provenance

  bool has_labels() const { return !labels.empty(); }
  int num_classes() const;
};

// Classic swiss roll: (t cos t, h, t sin t), t uniform in [1.5pi, 4.5pi],
// h uniform in [0, 20], isotropic Gaussian noise. Labels quantize t into
// kSwissRollLabelBins bands.
inline constexpr int kSwissRollLabelBins = 6;
Dataset gen_swiss_roll(int n, double noise, std::uint64_t seed);

// Two interleaved swiss rolls. The second is the first rotated 180 degrees
// about the h axis with its radius shifted so that, at any azimuth,
// neighboring sheets of the two rolls sit `gap` apart radially (gap = pi
// reproduces the pure rotation). Binary labels; generation fails if the gap
// cannot keep the rolls disjoint against the noise level.
inline constexpr double kTwainDefaultGap = 3.14159265358979323846;
Dataset gen_twain_swiss_roll(int n, double gap, double noise, std::uint64_t seed);

// Star-polar cylinder r(phi) = R (1 + eps cos(lobes * phi)) extruded along z;
// a locally curved single-sheet surface with `lobes` ridge lines. Labels
// quantize phi into one band per lobe.
Dataset gen_starfruit(int n, int lobes, double eps, std::uint64_t seed);

// Per-feature zero mean, unit variance (variance floor 1e-12).
Dataset standardize(const Dataset& ds);
Matrix standardize(const Matrix& x);

// Center and divide by one global scale; preserves angles, so curvature and
// neighbor ordering are untouched.
Matrix isotropic_scale(const Matrix& x);

}  // namespace dlme
