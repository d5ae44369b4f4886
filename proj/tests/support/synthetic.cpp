#include "synthetic.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <iterator>
#include <numbers>
#include <stdexcept>
#include <vector>

#include <unistd.h>

#include "blockscan/random.hpp"

namespace blockscan::testing {

RasterImage synthetic_image(std::uint64_t seed, int width, int height) {
  SplitMix64 rng(seed);
  auto uniform = [&](double lo, double hi) { return lo + (hi - lo) * rng.next_double(); };

  std::array<double, 3> from{}, to{};
  for (int c = 0; c < 3; ++c) {
    from[c] = uniform(0, 255);
    to[c] = uniform(0, 255);
  }
  const double angle = uniform(0, 2 * std::numbers::pi);
  const double dx = std::cos(angle);
  const double dy = std::sin(angle);
  const double period = uniform(2.0, 12.0);
  const double amplitude = uniform(0.0, 60.0);
  const double noise = uniform(0.0, 25.0);
  const bool checker = rng.next() & 1u;

  std::vector<Rgb8> pixels;
  pixels.reserve(static_cast<std::size_t>(width) * height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const double u = std::clamp(
          0.5 + ((x - width / 2.0) * dx + (y - height / 2.0) * dy) / (width + height), 0.0, 1.0);
      double wave = std::sin(2 * std::numbers::pi * (x * dx - y * dy) / period);
      if (checker) wave *= std::sin(2 * std::numbers::pi * (x * dy + y * dx) / period);
      Rgb8 px;
      std::array<std::uint8_t*, 3> out{&px.r, &px.g, &px.b};
      for (int c = 0; c < 3; ++c) {
        const double base = from[c] + (to[c] - from[c]) * u;
        const double value = base + amplitude * wave + uniform(-noise, noise);
        *out[c] = static_cast<std::uint8_t>(std::clamp(std::lround(value), 0L, 255L));
      }
      pixels.push_back(px);
    }
  }
  return RasterImage(width, height, std::move(pixels));
}

void write_synthetic_corpus(const std::filesystem::path& dir, int count,
                            std::uint64_t base_seed) {
  std::filesystem::create_directories(dir);
  for (int i = 0; i < count; ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "img_%03d.ppm", i);
    const auto bytes = encode_ppm(synthetic_image(base_seed + i));
    write_bytes(dir / name, std::string(bytes.begin(), bytes.end()));
  }
}

TempDir::TempDir(const std::string& tag) {
  static std::atomic<int> counter{0};
  path_ = std::filesystem::temp_directory_path() /
          ("blockscan_" + tag + "_" + std::to_string(::getpid()) + "_" +
           std::to_string(counter++));
  std::filesystem::remove_all(path_);
  std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

std::string read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const std::filesystem::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

}  // namespace blockscan::testing
