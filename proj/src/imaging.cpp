#include "blockscan/imaging.hpp"

#include <algorithm>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "blockscan/error.hpp"
#include "blockscan/features.hpp"

namespace blockscan {

RasterImage::RasterImage(int width, int height, std::vector<Rgb8> pixels)
    : width_(width), height_(height), pixels_(std::move(pixels)) {
  if (width <= 0 || height <= 0) {
    throw std::invalid_argument("RasterImage dimensions must be positive");
  }
  if (pixels_.size() !=
      static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
    throw std::invalid_argument("RasterImage pixel count != width * height");
  }
}

namespace {

bool is_space(std::uint8_t c) {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\v' ||
         c == '\f';
}

class PpmReader {
 public:
  explicit PpmReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }
  const std::uint8_t* cursor() const { return bytes_.data() + pos_; }
  void advance(std::size_t n) { pos_ += n; }

  // Whitespace and '#' comments running to end of line.
  void skip_separators() {
    while (pos_ < bytes_.size()) {
      if (is_space(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  // Returns nullopt when no digits are present at the cursor.
  std::optional<unsigned long> read_unsigned(std::size_t max_digits) {
    const std::size_t start = pos_;
    unsigned long value = 0;
    while (pos_ < bytes_.size() && bytes_[pos_] >= '0' && bytes_[pos_] <= '9') {
      if (pos_ - start >= max_digits) return std::nullopt;
      value = value * 10 + (bytes_[pos_] - '0');
      ++pos_;
    }
    if (pos_ == start) return std::nullopt;
    return value;
  }

  bool at_end() const { return pos_ >= bytes_.size(); }
  std::uint8_t peek() const { return bytes_[pos_]; }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

unsigned long read_header_field(PpmReader& reader, const char* field) {
  const std::size_t before = reader.pos();
  reader.skip_separators();
  if (reader.pos() == before) {
    throw DecodeError(DecodeErrorKind::kMalformedHeader, reader.pos(),
                      std::string("missing separator before ") + field +
                          " at offset " + std::to_string(reader.pos()));
  }
  const std::size_t start = reader.pos();
  auto value = reader.read_unsigned(9);
  if (!value || (!reader.at_end() && !is_space(reader.peek()) &&
                 reader.peek() != '#')) {
    throw DecodeError(DecodeErrorKind::kMalformedHeader, start,
                      std::string("malformed ") + field + " at offset " +
                          std::to_string(start));
  }
  return *value;
}

}  // namespace

RasterImage decode_ppm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '6' && bytes[1] != '3')) {
    throw DecodeError(DecodeErrorKind::kMalformedHeader, 0,
                      "bad magic at offset 0 (expected P6 or P3)");
  }
  const bool binary = bytes[1] == '6';
  PpmReader reader(bytes);
  reader.advance(2);

  const auto width = read_header_field(reader, "width");
  const auto height = read_header_field(reader, "height");
  const std::size_t maxval_offset = reader.pos();
  const auto maxval = read_header_field(reader, "maxval");
  if (width == 0 || height == 0) {
    throw DecodeError(DecodeErrorKind::kZeroDimension, maxval_offset,
                      width == 0 ? "width is zero" : "height is zero");
  }
  if (maxval != 255) {
    throw DecodeError(DecodeErrorKind::kUnsupportedMaxval, maxval_offset,
                      "maxval " + std::to_string(maxval) +
                          " unsupported (only 255)");
  }
  if (width > static_cast<unsigned long>(std::numeric_limits<int>::max()) ||
      height > static_cast<unsigned long>(std::numeric_limits<int>::max())) {
    throw DecodeError(DecodeErrorKind::kMalformedHeader, 0,
                      "image dimensions exceed supported range");
  }
  const std::size_t pixel_count = static_cast<std::size_t>(width) * height;
  const std::size_t sample_count = pixel_count * 3;

  std::vector<Rgb8> pixels;
  if (binary) {
    // Exactly one whitespace byte separates maxval from the raster.
    if (reader.at_end() || !is_space(reader.peek())) {
      throw DecodeError(DecodeErrorKind::kTruncatedData, reader.pos(),
                        "missing raster separator at offset " +
                            std::to_string(reader.pos()));
    }
    reader.advance(1);
    if (reader.remaining() < sample_count) {
      throw DecodeError(DecodeErrorKind::kTruncatedData, reader.pos(),
                        "pixel data truncated at offset " +
                            std::to_string(reader.pos()) + ": expected " +
                            std::to_string(sample_count) + " bytes, found " +
                            std::to_string(reader.remaining()));
    }
    pixels.resize(pixel_count);
    const std::uint8_t* p = reader.cursor();
    for (std::size_t i = 0; i < pixel_count; ++i) {
      pixels[i] = {p[3 * i], p[3 * i + 1], p[3 * i + 2]};
    }
  } else {
    // Each sample needs at least two bytes (digit + separator).
    if (reader.remaining() < sample_count) {
      throw DecodeError(DecodeErrorKind::kTruncatedData, bytes.size(),
                        "ASCII pixel data truncated: expected " +
                            std::to_string(sample_count) + " samples");
    }
    pixels.resize(pixel_count);
    for (std::size_t i = 0; i < sample_count; ++i) {
      reader.skip_separators();
      if (reader.at_end()) {
        throw DecodeError(DecodeErrorKind::kTruncatedData, reader.pos(),
                          "ASCII pixel data truncated at offset " +
                              std::to_string(reader.pos()) + " after " +
                              std::to_string(i) + " samples");
      }
      const std::size_t start = reader.pos();
      auto value = reader.read_unsigned(3);
      if (!value || *value > 255 ||
          (!reader.at_end() && !is_space(reader.peek()) && reader.peek() != '#')) {
        throw DecodeError(DecodeErrorKind::kBadSample, start,
                          "bad sample at offset " + std::to_string(start));
      }
      auto& px = pixels[i / 3];
      const auto sample = static_cast<std::uint8_t>(*value);
      switch (i % 3) {
        case 0: px.r = sample; break;
        case 1: px.g = sample; break;
        default: px.b = sample; break;
      }
    }
  }
  return RasterImage(static_cast<int>(width), static_cast<int>(height),
                     std::move(pixels));
}

RasterImage decode_ppm(std::string_view bytes) {
  return decode_ppm(std::span<const std::uint8_t>(
      reinterpret_cast<const std::uint8_t*>(bytes.data()), bytes.size()));
}

std::vector<std::uint8_t> encode_ppm(const RasterImage& image) {
  const std::string header = "P6\n" + std::to_string(image.width()) + " " +
                             std::to_string(image.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(header.size() + image.pixels().size() * 3);
  for (const Rgb8& px : image.pixels()) {
    out.push_back(px.r);
    out.push_back(px.g);
    out.push_back(px.b);
  }
  return out;
}

BlockGrid partition_blocks(const RasterImage& image) {
  if (image.width() < kBlockSize || image.height() < kBlockSize) {
    throw DimensionError("image " + std::to_string(image.width()) + "x" +
                         std::to_string(image.height()) +
                         " is smaller than one 4x4 block");
  }
  BlockGrid grid;
  grid.block_cols = image.width() / kBlockSize;
  grid.block_rows = image.height() / kBlockSize;
  grid.source_width = image.width();
  grid.source_height = image.height();
  grid.blocks.reserve(static_cast<std::size_t>(grid.block_cols) * grid.block_rows);

  for (int by = 0; by < grid.block_rows; ++by) {
    for (int bx = 0; bx < grid.block_cols; ++bx) {
      Block block;
      // Integer sums are exact, so the mean is a single rounding.
      std::array<int, 3> sum{};
      for (int y = 0; y < kBlockSize; ++y) {
        for (int x = 0; x < kBlockSize; ++x) {
          const Rgb8& px = image.at(bx * kBlockSize + x, by * kBlockSize + y);
          sum[0] += px.r;
          sum[1] += px.g;
          sum[2] += px.b;
          block.intensity[y][x] = pixel_value({static_cast<double>(px.r),
                                               static_cast<double>(px.g),
                                               static_cast<double>(px.b)});
        }
      }
      for (int c = 0; c < 3; ++c) {
        block.avg_rgb[c] = sum[c] / static_cast<double>(kBlockSize * kBlockSize);
      }
      grid.blocks.push_back(block);
    }
  }
  return grid;
}

}  // namespace blockscan
