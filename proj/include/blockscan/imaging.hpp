#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

namespace blockscan {

inline constexpr int kBlockSize = 4;

struct Rgb8 {
  std::uint8_t r = 0;
  std::uint8_t g = 0;
  std::uint8_t b = 0;

  friend bool operator==(const Rgb8&, const Rgb8&) = default;
};

// Decoded 8-bit RGB raster, row-major, top-left first.
class RasterImage {
 public:
  RasterImage() = default;
  // Throws std::invalid_argument unless pixels.size() == width * height and
  // both dimensions are positive.
  RasterImage(int width, int height, std::vector<Rgb8> pixels);

  int width() const { return width_; }
  int height() const { return height_; }
  const std::vector<Rgb8>& pixels() const { return pixels_; }

  const Rgb8& at(int x, int y) const {
    return pixels_[static_cast<std::size_t>(y) * width_ + x];
  }

  friend bool operator==(const RasterImage&, const RasterImage&) = default;

 private:
  int width_ = 0;
  int height_ = 0;
  std::vector<Rgb8> pixels_;
};

using Intensity4x4 = std::array<std::array<double, 4>, 4>;

struct Block {
  // Per-channel arithmetic mean of the 16 source pixels, in [0, 255].
  std::array<double, 3> avg_rgb{};
  // Per-pixel HSV value (max channel / 255) of the source pixels, [row][col].
  Intensity4x4 intensity{};
};

struct BlockGrid {
  int block_cols = 0;
  int block_rows = 0;
  std::vector<Block> blocks;  // row-major
  // Dimensions of the source image; pixels beyond the last full block are
  // dropped.
  int source_width = 0;
  int source_height = 0;

  bool truncated() const {
    return source_width % kBlockSize != 0 || source_height % kBlockSize != 0;
  }
};

// Parses binary (P6) or ASCII (P3) PPM with maxval 255. Throws DecodeError.
RasterImage decode_ppm(std::span<const std::uint8_t> bytes);
RasterImage decode_ppm(std::string_view bytes);

// Binary P6 with the canonical header "P6\n<w> <h>\n255\n".
std::vector<std::uint8_t> encode_ppm(const RasterImage& image);

// Splits the image into 4x4 blocks, dropping trailing rows/columns that do
// not fill a block. Throws DimensionError for images under 4x4.
BlockGrid partition_blocks(const RasterImage& image);

}  // namespace blockscan
