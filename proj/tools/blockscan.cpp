// blockscan: query-by-example image retrieval over block colour/texture
// signatures.
#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include "blockscan/commands.hpp"

namespace cli = blockscan::cli;

int main(int argc, char** argv) {
  CLI::App app{"Query-by-example image retrieval over block colour/texture signatures"};
  app.require_subcommand(1);

  cli::CliConfig config;
  std::string input_dir;
  std::string output_path;
  std::string index_path;
  std::string image_path;
  std::optional<int> query_k;
  std::optional<double> threshold;
  std::optional<std::size_t> top_n;
  std::string format = "text";

  auto* index_cmd = app.add_subcommand("index", "Build a signature index from a directory of PPM images");
  index_cmd->add_option("--input", input_dir, "Directory of images")->required();
  index_cmd->add_option("--output", output_path, "Index file to write")->required();
  index_cmd->add_option("--k", config.k, "Clusters per image")->check(CLI::PositiveNumber);
  index_cmd->add_option("--seed", config.seed, "Seed for centroid initialization");

  auto* query_cmd = app.add_subcommand("query", "Rank indexed images by distance to a query image");
  query_cmd->add_option("--index", index_path, "Index file")->required();
  query_cmd->add_option("--image", image_path, "Query image")->required();
  query_cmd->add_option("--top", top_n, "Keep only the N closest matches")->check(CLI::PositiveNumber);
  query_cmd->add_option("--threshold", threshold, "Keep matches with distance <= T")
      ->check(CLI::NonNegativeNumber);
  query_cmd->add_option("--format", format, "Output format")
      ->check(CLI::IsMember({"text", "tsv"}));
  query_cmd->add_option("--k", query_k, "Expected cluster count (must match the index)")
      ->check(CLI::PositiveNumber);
  query_cmd->add_option("--seed", config.seed, "Seed for centroid initialization");

  auto* features_cmd = app.add_subcommand("features", "Dump per-block features as TSV");
  features_cmd->add_option("--image", image_path, "Image to analyse")->required();

  auto* inspect_cmd = app.add_subcommand("inspect", "Summarize an index file");
  inspect_cmd->add_option("--index", index_path, "Index file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return cli::kExitUsage;
  }

  config.requested_k = query_k;
  config.threshold = threshold;
  config.top_n = top_n;
  config.format = format == "tsv" ? cli::OutputFormat::kTsv : cli::OutputFormat::kText;

  if (*index_cmd) return cli::cmd_index(input_dir, output_path, config, std::cout, std::cerr);
  if (*query_cmd) return cli::cmd_query(index_path, image_path, config, std::cout, std::cerr);
  if (*features_cmd) return cli::cmd_features(image_path, config, std::cout, std::cerr);
  return cli::cmd_inspect(index_path, std::cout, std::cerr);
}
