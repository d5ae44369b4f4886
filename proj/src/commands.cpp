#include "blockscan/commands.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>
#include <vector>

#include "blockscan/error.hpp"
#include "blockscan/features.hpp"
#include "blockscan/imaging.hpp"
#include "blockscan/pipeline.hpp"
#include "blockscan/retrieval.hpp"
#include "blockscan/signature.hpp"

namespace fs = std::filesystem;

namespace blockscan::cli {
namespace {

std::optional<std::string> read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (in.bad()) return std::nullopt;
  return bytes;
}

bool write_file(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) return false;
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.close();
  return static_cast<bool>(out);
}

void warn_if_truncated(const RasterImage& image, const std::string& name,
                       std::ostream& err) {
  if (image.width() % kBlockSize != 0 || image.height() % kBlockSize != 0) {
    err << "warning: " << name << ": " << image.width() << "x" << image.height()
        << " is not a multiple of 4; trailing rows/columns dropped\n";
  }
}

std::string format_real(double value) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, end);
}

// Loads the image at `path`; on failure reports to `err` and sets `code`.
std::optional<RasterImage> load_image(const fs::path& path, std::ostream& err,
                                      int& code) {
  const auto bytes = read_file(path);
  if (!bytes) {
    err << "error: cannot read image " << path.string() << "\n";
    code = kExitIo;
    return std::nullopt;
  }
  try {
    RasterImage image = decode_ppm(std::string_view(*bytes));
    warn_if_truncated(image, path.filename().string(), err);
    return image;
  } catch (const DecodeError& e) {
    err << "error: " << path.string() << ": " << e.what() << "\n";
    code = kExitData;
    return std::nullopt;
  }
}

std::optional<SignatureIndex> load_index_file(const fs::path& path,
                                              std::ostream& err, int& code) {
  const auto bytes = read_file(path);
  if (!bytes) {
    err << "error: cannot read index " << path.string() << "\n";
    code = kExitIo;
    return std::nullopt;
  }
  try {
    return load_index(*bytes);
  } catch (const IndexError& e) {
    err << "error: " << path.string() << ": " << e.what() << "\n";
    code = kExitData;
    return std::nullopt;
  }
}

}  // namespace

int cmd_index(const fs::path& input_dir, const fs::path& output_path,
              const CliConfig& config, std::ostream& out, std::ostream& err) {
  const auto started = std::chrono::steady_clock::now();
  if (config.k < 1) {
    err << "error: k must be >= 1\n";
    return kExitUsage;
  }

  std::error_code ec;
  if (!fs::is_directory(input_dir, ec)) {
    err << "error: " << input_dir.string() << " is not a readable directory\n";
    return kExitIo;
  }
  std::vector<fs::path> files;
  for (fs::directory_iterator it(input_dir, ec), end; !ec && it != end;
       it.increment(ec)) {
    if (it->is_regular_file(ec)) files.push_back(it->path());
  }
  if (ec) {
    err << "error: listing " << input_dir.string() << ": " << ec.message() << "\n";
    return kExitIo;
  }
  std::sort(files.begin(), files.end(), [](const fs::path& a, const fs::path& b) {
    return a.filename().string() < b.filename().string();
  });

  const ClusterParams params{.k = config.k, .seed = config.seed};
  SignatureIndex index(config.k);
  std::size_t min_blocks = 0;
  std::size_t max_blocks = 0;
  for (const fs::path& file : files) {
    const std::string name = file.filename().string();
    const auto bytes = read_file(file);
    if (!bytes) {
      err << "warning: skipping " << name << ": unreadable\n";
      continue;
    }
    try {
      if (!is_valid_image_id(name)) {
        throw InvalidIdError("file name is not a valid image id");
      }
      const RasterImage image = decode_ppm(std::string_view(*bytes));
      warn_if_truncated(image, name, err);
      ImageSignature sig = compute_signature(name, image, params);
      const std::size_t blocks = sig.block_count;
      min_blocks = index.size() == 0 ? blocks : std::min(min_blocks, blocks);
      max_blocks = std::max(max_blocks, blocks);
      index.add(std::move(sig));
    } catch (const Error& e) {
      err << "warning: skipping " << name << ": " << e.what() << "\n";
    }
  }

  if (index.size() == 0) {
    err << "error: no image in " << input_dir.string() << " could be indexed\n";
    return kExitData;
  }
  if (!write_file(output_path, save_index(index))) {
    err << "error: cannot write index " << output_path.string() << "\n";
    return kExitIo;
  }

  const std::chrono::duration<double> elapsed =
      std::chrono::steady_clock::now() - started;
  out << "indexed " << index.size() << " images, ";
  if (min_blocks == max_blocks) {
    out << min_blocks;
  } else {
    out << min_blocks << "-" << max_blocks;
  }
  out << " blocks per image, " << std::fixed << std::setprecision(3)
      << elapsed.count() << " s\n";
  return kExitOk;
}

int cmd_query(const fs::path& index_path, const fs::path& image_path,
              const CliConfig& config, std::ostream& out, std::ostream& err) {
  if ((config.threshold && !(*config.threshold >= 0.0)) ||
      (config.top_n && *config.top_n == 0)) {
    err << "error: threshold must be >= 0 and top must be >= 1\n";
    return kExitUsage;
  }
  int code = kExitOk;
  const auto index = load_index_file(index_path, err, code);
  if (!index) return code;
  if (config.requested_k && *config.requested_k != index->k()) {
    err << "error: query k = " << *config.requested_k << " but index k = "
        << index->k() << "\n";
    return kExitData;
  }
  const auto image = load_image(image_path, err, code);
  if (!image) return code;

  std::vector<RankedMatch> matches;
  try {
    const ImageSignature query = compute_signature(
        "query", *image, ClusterParams{.k = index->k(), .seed = config.seed});
    matches = rank(query, *index);
    if (config.threshold) matches = filter_by_threshold(matches, *config.threshold);
    if (config.top_n && matches.size() > *config.top_n) matches.resize(*config.top_n);
  } catch (const Error& e) {
    err << "error: " << image_path.string() << ": " << e.what() << "\n";
    return kExitData;
  }

  out << std::fixed << std::setprecision(6);
  if (config.format == OutputFormat::kTsv) {
    for (const RankedMatch& m : matches) out << m.image_id << '\t' << m.distance << '\n';
    return kExitOk;
  }
  const std::string rank_header = "rank";
  const std::string id_header = "imageId";
  std::size_t rank_width = std::max(rank_header.size(), std::to_string(matches.size()).size());
  std::size_t id_width = id_header.size();
  for (const RankedMatch& m : matches) id_width = std::max(id_width, m.image_id.size());
  out << std::right << std::setw(static_cast<int>(rank_width)) << rank_header << "  "
      << std::left << std::setw(static_cast<int>(id_width)) << id_header << "  "
      << "distance\n";
  for (std::size_t i = 0; i < matches.size(); ++i) {
    out << std::right << std::setw(static_cast<int>(rank_width)) << i + 1 << "  "
        << std::left << std::setw(static_cast<int>(id_width)) << matches[i].image_id
        << "  " << matches[i].distance << '\n';
  }
  return kExitOk;
}

int cmd_features(const fs::path& image_path, [[maybe_unused]] const CliConfig& config,
                 std::ostream& out, std::ostream& err) {
  int code = kExitOk;
  const auto image = load_image(image_path, err, code);
  if (!image) return code;
  std::vector<FeatureVector> rows;
  try {
    rows = feature_matrix(partition_blocks(*image));
  } catch (const Error& e) {
    err << "error: " << image_path.string() << ": " << e.what() << "\n";
    return kExitData;
  }
  std::string text = "block\th\ts\tv\thl\tlh\thh\n";
  for (std::size_t i = 0; i < rows.size(); ++i) {
    text += std::to_string(i);
    for (double value : rows[i].to_array()) {
      text += '\t';
      text += format_real(value);
    }
    text += '\n';
  }
  out << text;
  return kExitOk;
}

int cmd_inspect(const fs::path& index_path, std::ostream& out, std::ostream& err) {
  int code = kExitOk;
  const auto index = load_index_file(index_path, err, code);
  if (!index) return code;
  out << "version " << index->version() << "\n"
      << "k " << index->k() << "\n"
      << "dims " << index->dims() << "\n"
      << "entries " << index->size() << "\n";
  for (const ImageSignature& entry : index->entries()) {
    out << entry.image_id << '\t' << entry.block_count << '\n';
  }
  return kExitOk;
}

}  // namespace blockscan::cli
