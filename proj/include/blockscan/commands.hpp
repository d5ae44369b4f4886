#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>

namespace blockscan::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitUsage = 1,
  kExitIo = 2,
  kExitData = 3,
};

enum class OutputFormat { kText, kTsv };

struct CliConfig {
  int k = 3;
  // Explicit --k on a query; must agree with the index.
  std::optional<int> requested_k;
  std::uint64_t seed = 0;
  static constexpr int kBlockSize = 4;
  std::optional<double> threshold;
  std::optional<std::size_t> top_n;
  OutputFormat format = OutputFormat::kText;
};

// Every command writes data to `out` and diagnostics to `err`, and returns a
// process exit code.
int cmd_index(const std::filesystem::path& input_dir,
              const std::filesystem::path& output_path, const CliConfig& config,
              std::ostream& out, std::ostream& err);

int cmd_query(const std::filesystem::path& index_path,
              const std::filesystem::path& image_path, const CliConfig& config,
              std::ostream& out, std::ostream& err);

int cmd_features(const std::filesystem::path& image_path,
                 const CliConfig& config, std::ostream& out, std::ostream& err);

int cmd_inspect(const std::filesystem::path& index_path, std::ostream& out,
                std::ostream& err);

}  // namespace blockscan::cli
