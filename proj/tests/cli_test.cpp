#include "blockscan/commands.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <sstream>

#include "blockscan/imaging.hpp"
#include "blockscan/signature.hpp"
#include "support/synthetic.hpp"

namespace blockscan::cli {
namespace {

namespace fs = std::filesystem;
using testing::TempDir;

struct CommandRun {
  int code;
  std::string out;
  std::string err;
};

CommandRun run_index(const fs::path& in, const fs::path& out_path, CliConfig config = {}) {
  std::ostringstream out, err;
  const int code = cmd_index(in, out_path, config, out, err);
  return {code, out.str(), err.str()};
}

CommandRun run_query(const fs::path& index, const fs::path& image, CliConfig config = {}) {
  std::ostringstream out, err;
  const int code = cmd_query(index, image, config, out, err);
  return {code, out.str(), err.str()};
}

CommandRun run_features(const fs::path& image) {
  std::ostringstream out, err;
  const int code = cmd_features(image, {}, out, err);
  return {code, out.str(), err.str()};
}

CommandRun run_inspect(const fs::path& index) {
  std::ostringstream out, err;
  const int code = cmd_inspect(index, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);) out.push_back(line);
  return out;
}

int run_binary(const std::string& args) {
  const std::string command = std::string(BLOCKSCAN_BIN) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(command.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

class CorpusTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    corpus_ = new TempDir("cli_corpus");
    testing::write_synthetic_corpus(corpus_->path() / "images", 12);
  }
  static void TearDownTestSuite() {
    delete corpus_;
    corpus_ = nullptr;
  }
  static fs::path images() { return corpus_->path() / "images"; }

  static TempDir* corpus_;
};

TempDir* CorpusTest::corpus_ = nullptr;

TEST_F(CorpusTest, IndexesEveryImage) {
  TempDir work("index");
  const CommandRun run = run_index(images(), work.path() / "db.idx");
  ASSERT_EQ(run.code, kExitOk) << run.err;
  EXPECT_NE(run.out.find("indexed 12 images, 1024 blocks per image"), std::string::npos);
  const SignatureIndex index = load_index(testing::read_bytes(work.path() / "db.idx"));
  EXPECT_EQ(index.size(), 12u);
  for (const auto& entry : index.entries()) {
    EXPECT_EQ(entry.centroids.size(), 3u);
    EXPECT_EQ(entry.block_count, 1024u);
  }
  EXPECT_EQ(index.entries().front().image_id, "img_000.ppm");
}

TEST_F(CorpusTest, IndexingIsByteReproducible) {
  TempDir work("repro");
  ASSERT_EQ(run_index(images(), work.path() / "a.idx").code, kExitOk);
  ASSERT_EQ(run_index(images(), work.path() / "b.idx").code, kExitOk);
  EXPECT_EQ(testing::read_bytes(work.path() / "a.idx"), testing::read_bytes(work.path() / "b.idx"));
}

TEST_F(CorpusTest, QuerySelfRetrieval) {
  TempDir work("query");
  ASSERT_EQ(run_index(images(), work.path() / "db.idx").code, kExitOk);
  const CommandRun run = run_query(work.path() / "db.idx", images() / "img_004.ppm");
  ASSERT_EQ(run.code, kExitOk) << run.err;
  const auto out = lines(run.out);
  ASSERT_EQ(out.size(), 13u);
  EXPECT_EQ(out[0], "rank  imageId      distance");
  EXPECT_EQ(out[1], "   1  img_004.ppm  0.000000");
}

TEST_F(CorpusTest, QueryThresholdTopAndTsv) {
  TempDir work("query_opts");
  ASSERT_EQ(run_index(images(), work.path() / "db.idx").code, kExitOk);

  CliConfig config;
  config.format = OutputFormat::kTsv;
  const CommandRun all = run_query(work.path() / "db.idx", images() / "img_002.ppm", config);
  ASSERT_EQ(all.code, kExitOk);
  const auto all_lines = lines(all.out);
  ASSERT_EQ(all_lines.size(), 12u);
  EXPECT_EQ(all_lines[0], "img_002.ppm\t0.000000");

  config.threshold = 0.1;
  const CommandRun filtered = run_query(work.path() / "db.idx", images() / "img_002.ppm", config);
  for (const auto& line : lines(filtered.out)) {
    EXPECT_LE(std::stod(line.substr(line.find('\t') + 1)), 0.1);
  }

  config.threshold.reset();
  config.top_n = 1;
  const CommandRun top = run_query(work.path() / "db.idx", images() / "img_002.ppm", config);
  EXPECT_EQ(lines(top.out), (std::vector<std::string>{"img_002.ppm\t0.000000"}));
}

TEST_F(CorpusTest, QueryErrors) {
  TempDir work("query_err");
  ASSERT_EQ(run_index(images(), work.path() / "db.idx").code, kExitOk);
  EXPECT_EQ(run_query(work.path() / "missing.idx", images() / "img_000.ppm").code, kExitIo);
  EXPECT_EQ(run_query(work.path() / "db.idx", work.path() / "missing.ppm").code, kExitIo);
  CliConfig config;
  config.requested_k = 4;
  EXPECT_EQ(run_query(work.path() / "db.idx", images() / "img_000.ppm", config).code, kExitData);
  testing::write_bytes(work.path() / "junk.ppm", "not an image");
  EXPECT_EQ(run_query(work.path() / "db.idx", work.path() / "junk.ppm").code, kExitData);
}

TEST_F(CorpusTest, InspectListsEntries) {
  TempDir work("inspect");
  ASSERT_EQ(run_index(images(), work.path() / "db.idx").code, kExitOk);
  const CommandRun run = run_inspect(work.path() / "db.idx");
  ASSERT_EQ(run.code, kExitOk);
  const auto out = lines(run.out);
  ASSERT_EQ(out.size(), 16u);
  EXPECT_EQ(out[0], "version 1");
  EXPECT_EQ(out[1], "k 3");
  EXPECT_EQ(out[2], "dims 6");
  EXPECT_EQ(out[3], "entries 12");
  EXPECT_EQ(out[4], "img_000.ppm\t1024");
}

TEST_F(CorpusTest, InspectReportsCorruptionWithLineNumber) {
  TempDir work("corrupt");
  ASSERT_EQ(run_index(images(), work.path() / "db.idx").code, kExitOk);
  std::string text = testing::read_bytes(work.path() / "db.idx");
  // Damage the first real on line 5 (first centroid line).
  const std::size_t pos = text.find("centroid ");
  text[text.find(' ', pos + 9) + 1] = 'x';
  testing::write_bytes(work.path() / "bad.idx", text);
  const CommandRun run = run_inspect(work.path() / "bad.idx");
  EXPECT_EQ(run.code, kExitData);
  EXPECT_NE(run.err.find("line 5"), std::string::npos) << run.err;
}

TEST(CmdIndex, EmptyDirectory) {
  TempDir work("empty");
  fs::create_directories(work.path() / "in");
  const CommandRun run = run_index(work.path() / "in", work.path() / "db.idx");
  EXPECT_EQ(run.code, kExitData);
  EXPECT_FALSE(fs::exists(work.path() / "db.idx"));
}

TEST(CmdIndex, SkipsCorruptFiles) {
  TempDir work("mixed");
  const fs::path in = work.path() / "in";
  testing::write_synthetic_corpus(in, 3);
  std::string truncated = testing::read_bytes(in / "img_001.ppm");
  truncated.resize(truncated.size() / 2);
  testing::write_bytes(in / "img_001.ppm", truncated);
  testing::write_bytes(in / "notes.txt", "hello");

  const CommandRun run = run_index(in, work.path() / "db.idx");
  ASSERT_EQ(run.code, kExitOk);
  EXPECT_NE(run.err.find("img_001.ppm"), std::string::npos);
  EXPECT_NE(run.err.find("notes.txt"), std::string::npos);
  const SignatureIndex index = load_index(testing::read_bytes(work.path() / "db.idx"));
  ASSERT_EQ(index.size(), 2u);
  EXPECT_EQ(index.entries()[0].image_id, "img_000.ppm");
  EXPECT_EQ(index.entries()[1].image_id, "img_002.ppm");
}

TEST(CmdIndex, WarnsOnTruncatedDimensions) {
  TempDir work("odd");
  const fs::path in = work.path() / "in";
  fs::create_directories(in);
  const auto bytes = encode_ppm(testing::synthetic_image(5, 30, 18));
  testing::write_bytes(in / "odd.ppm", std::string(bytes.begin(), bytes.end()));
  const CommandRun run = run_index(in, work.path() / "db.idx");
  ASSERT_EQ(run.code, kExitOk);
  EXPECT_NE(run.err.find("not a multiple of 4"), std::string::npos);
  EXPECT_NE(run.out.find("28 blocks per image"), std::string::npos);
}

TEST(CmdIndex, IoErrors) {
  TempDir work("io");
  EXPECT_EQ(run_index(work.path() / "nope", work.path() / "db.idx").code, kExitIo);
  testing::write_synthetic_corpus(work.path() / "in", 1);
  EXPECT_EQ(run_index(work.path() / "in", work.path() / "no" / "such" / "db.idx").code, kExitIo);
}

TEST(CmdIndex, CustomK) {
  TempDir work("k5");
  testing::write_synthetic_corpus(work.path() / "in", 2);
  CliConfig config;
  config.k = 5;
  ASSERT_EQ(run_index(work.path() / "in", work.path() / "db.idx", config).code, kExitOk);
  const SignatureIndex index = load_index(testing::read_bytes(work.path() / "db.idx"));
  EXPECT_EQ(index.k(), 5);
  EXPECT_EQ(index.entries()[0].centroids.size(), 5u);
}

TEST(CmdInspect, EmptyIndex) {
  TempDir work("inspect_empty");
  testing::write_bytes(work.path() / "e.idx", save_index(SignatureIndex(3)));
  const CommandRun run = run_inspect(work.path() / "e.idx");
  EXPECT_EQ(run.code, kExitOk);
  EXPECT_NE(run.out.find("entries 0"), std::string::npos);
  EXPECT_EQ(run_inspect(work.path() / "missing.idx").code, kExitIo);
}

TEST(CmdFeatures, PaperSizedImageHas1024Rows) {
  TempDir work("features");
  testing::write_synthetic_corpus(work.path(), 1);
  const CommandRun run = run_features(work.path() / "img_000.ppm");
  ASSERT_EQ(run.code, kExitOk);
  const auto out = lines(run.out);
  ASSERT_EQ(out.size(), 1025u);
  EXPECT_EQ(out[0], "block\th\ts\tv\thl\tlh\thh");
  EXPECT_EQ(out[1].substr(0, 2), "0\t");
  EXPECT_EQ(run_features(work.path() / "img_000.ppm").out, run.out);
}

TEST(CmdFeatures, ConstantBlockIsTextureless) {
  TempDir work("features_const");
  const auto bytes = encode_ppm(RasterImage(4, 4, std::vector<Rgb8>(16, Rgb8{51, 102, 204})));
  testing::write_bytes(work.path() / "c.ppm", std::string(bytes.begin(), bytes.end()));
  const CommandRun run = run_features(work.path() / "c.ppm");
  ASSERT_EQ(run.code, kExitOk);
  const auto out = lines(run.out);
  ASSERT_EQ(out.size(), 2u);
  EXPECT_EQ(out[1].substr(out[1].size() - 6), "\t0\t0\t0");
  EXPECT_EQ(run_features(work.path() / "missing.ppm").code, kExitIo);
}

TEST(Binary, ExitCodes) {
  TempDir work("binary");
  testing::write_synthetic_corpus(work.path() / "in", 2);
  const std::string idx = (work.path() / "db.idx").string();
  EXPECT_EQ(run_binary(""), kExitUsage);
  EXPECT_EQ(run_binary("frobnicate"), kExitUsage);
  EXPECT_EQ(run_binary("index --input " + (work.path() / "in").string()), kExitUsage);
  EXPECT_EQ(run_binary("index --input " + (work.path() / "in").string() + " --output " + idx),
            kExitOk);
  EXPECT_EQ(run_binary("query --index " + idx + " --image " +
                       (work.path() / "in" / "img_000.ppm").string() + " --top 1 --format tsv"),
            kExitOk);
  EXPECT_EQ(run_binary("query --index " + idx + " --image x --threshold -1"), kExitUsage);
  EXPECT_EQ(run_binary("query --index " + idx + " --image x --format xml"), kExitUsage);
  EXPECT_EQ(run_binary("query --index " + idx + " --image " +
                       (work.path() / "in" / "img_000.ppm").string() + " --k 2"),
            kExitData);
  EXPECT_EQ(run_binary("inspect --index " + (work.path() / "missing").string()), kExitIo);
  fs::create_directories(work.path() / "empty");
  EXPECT_EQ(run_binary("index --input " + (work.path() / "empty").string() + " --output " + idx),
            kExitData);
}

}  // namespace
}  // namespace blockscan::cli
