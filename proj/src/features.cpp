#include "blockscan/features.hpp"

#include <algorithm>
#include <cmath>

namespace blockscan {

double pixel_value(const std::array<double, 3>& rgb) {
  return std::max({rgb[0], rgb[1], rgb[2]}) / 255.0;
}

Hsv rgb_to_hsv(const std::array<double, 3>& rgb) {
  const double r = rgb[0];
  const double g = rgb[1];
  const double b = rgb[2];
  const double max = std::max({r, g, b});
  const double min = std::min({r, g, b});
  const double delta = max - min;

  Hsv out;
  out.v = max / 255.0;
  out.s = max > 0.0 ? delta / max : 0.0;
  if (delta == 0.0) return out;  // achromatic: h = 0

  double sector;
  if (max == r) {
    sector = (g - b) / delta;
  } else if (max == g) {
    sector = (b - r) / delta + 2.0;
  } else {
    sector = (r - g) / delta + 4.0;
  }
  double h = sector / 6.0;
  if (h < 0.0) h += 1.0;
  if (h >= 1.0) h -= 1.0;
  out.h = h;
  return out;
}

std::array<double, 3> hsv_to_rgb(const Hsv& hsv) {
  const double v = hsv.v * 255.0;
  if (hsv.s == 0.0) return {v, v, v};
  const double h6 = hsv.h * 6.0;
  const double sector = std::floor(h6);
  const double f = h6 - sector;
  const double p = v * (1.0 - hsv.s);
  const double q = v * (1.0 - hsv.s * f);
  const double t = v * (1.0 - hsv.s * (1.0 - f));
  switch (static_cast<int>(sector) % 6) {
    case 0: return {v, t, p};
    case 1: return {q, v, p};
    case 2: return {p, v, t};
    case 3: return {p, q, v};
    case 4: return {t, p, v};
    default: return {v, p, q};
  }
}

HaarBands haar_transform_block(const Intensity4x4& px) {
  // Row pass: each row splits into two low and two high coefficients.
  double low[4][2];
  double high[4][2];
  for (int r = 0; r < 4; ++r) {
    for (int m = 0; m < 2; ++m) {
      low[r][m] = (px[r][2 * m] + px[r][2 * m + 1]) / 2.0;
      high[r][m] = (px[r][2 * m] - px[r][2 * m + 1]) / 2.0;
    }
  }
  // Column pass over both halves.
  HaarBands bands;
  for (int n = 0; n < 2; ++n) {
    for (int m = 0; m < 2; ++m) {
      bands.ll[n][m] = (low[2 * n][m] + low[2 * n + 1][m]) / 2.0;
      bands.lh[n][m] = (low[2 * n][m] - low[2 * n + 1][m]) / 2.0;
      bands.hl[n][m] = (high[2 * n][m] + high[2 * n + 1][m]) / 2.0;
      bands.hh[n][m] = (high[2 * n][m] - high[2 * n + 1][m]) / 2.0;
    }
  }
  return bands;
}

double band_energy(const Band2x2& band) {
  double sum = 0.0;
  for (const auto& row : band) {
    for (double c : row) sum += c * c;
  }
  return std::sqrt(sum / 4.0);
}

FeatureVector extract_features(const Block& block) {
  const Hsv hsv = rgb_to_hsv(block.avg_rgb);
  const HaarBands bands = haar_transform_block(block.intensity);
  return {hsv.h,
          hsv.s,
          hsv.v,
          band_energy(bands.hl),
          band_energy(bands.lh),
          band_energy(bands.hh)};
}

std::vector<FeatureVector> feature_matrix(const BlockGrid& grid) {
  std::vector<FeatureVector> rows;
  rows.reserve(grid.blocks.size());
  for (const Block& block : grid.blocks) rows.push_back(extract_features(block));
  return rows;
}

}  // namespace blockscan
