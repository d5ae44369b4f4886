#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <span>
#include <vector>

#include "blockscan/imaging.hpp"

namespace blockscan {

inline constexpr std::size_t kFeatureDims = 6;

// Six per-block features: HSV color of the block average plus the RMS energy
// of the three Haar detail bands. Member order is the canonical sort order.
struct FeatureVector {
  double h = 0.0;
  double s = 0.0;
  double v = 0.0;
  double hl = 0.0;
  double lh = 0.0;
  double hh = 0.0;

  std::array<double, kFeatureDims> to_array() const {
    return {h, s, v, hl, lh, hh};
  }
  static FeatureVector from_array(std::span<const double, kFeatureDims> a) {
    return {a[0], a[1], a[2], a[3], a[4], a[5]};
  }

  friend auto operator<=>(const FeatureVector&, const FeatureVector&) = default;
};

struct Hsv {
  double h = 0.0;
  double s = 0.0;
  double v = 0.0;
};

using Band2x2 = std::array<std::array<double, 2>, 2>;

// One-level Haar decomposition of a 4x4 block. hl is horizontal-high /
// vertical-low (responds to vertical edges); lh the transpose.
struct HaarBands {
  Band2x2 ll{};
  Band2x2 hl{};
  Band2x2 lh{};
  Band2x2 hh{};
};

// V of HSV for a single pixel: max(r, g, b) / 255.
double pixel_value(const std::array<double, 3>& rgb);

// Hexcone conversion. Hue is scaled to [0, 1) and is 0 for achromatic input.
Hsv rgb_to_hsv(const std::array<double, 3>& rgb);

// Inverse hexcone map back to [0, 255] channels.
std::array<double, 3> hsv_to_rgb(const Hsv& hsv);

// Separable transform with averaging pairs: low = (a + b) / 2,
// high = (a - b) / 2, rows first, then columns.
HaarBands haar_transform_block(const Intensity4x4& intensity);

// sqrt((c00^2 + c01^2 + c10^2 + c11^2) / 4)
double band_energy(const Band2x2& band);

FeatureVector extract_features(const Block& block);

std::vector<FeatureVector> feature_matrix(const BlockGrid& grid);

}  // namespace blockscan
