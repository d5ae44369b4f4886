#include "blockscan/signature.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <system_error>
#include <unordered_set>

#include "blockscan/error.hpp"

namespace blockscan {

bool is_valid_image_id(std::string_view id) {
  if (id.empty()) return false;
  return std::none_of(id.begin(), id.end(), [](char ch) {
    const auto c = static_cast<unsigned char>(ch);
    return c <= 0x20 || c == 0x7f;
  });
}

void SignatureIndex::add(ImageSignature signature) {
  if (signature.centroids.size() != static_cast<std::size_t>(k_) ||
      signature.weights.size() != static_cast<std::size_t>(k_)) {
    throw IndexError(IndexErrorKind::kCentroidCount, 0,
                     "image '" + signature.image_id + "' has " +
                         std::to_string(signature.centroids.size()) +
                         " centroids, index k = " + std::to_string(k_));
  }
  if (find(signature.image_id) != nullptr) {
    throw IndexError(IndexErrorKind::kDuplicateId, 0,
                     "duplicate image id '" + signature.image_id + "'");
  }
  entries_.push_back(std::move(signature));
}

const ImageSignature* SignatureIndex::find(std::string_view image_id) const {
  for (const auto& entry : entries_) {
    if (entry.image_id == image_id) return &entry;
  }
  return nullptr;
}

ImageSignature build_signature(std::string image_id, const ClusterResult& result) {
  if (!is_valid_image_id(image_id)) {
    throw InvalidIdError("invalid image id '" + image_id + "'");
  }
  if (result.centroids.dims() != kFeatureDims) {
    throw std::invalid_argument("signature centroids must have 6 components");
  }
  const std::size_t k = result.centroids.size();
  if (result.counts.size() != k) {
    throw std::invalid_argument("cluster counts do not match centroid count");
  }

  struct Object {
    FeatureVector centroid;
    std::uint64_t weight;
  };
  std::vector<Object> objects;
  objects.reserve(k);
  for (std::size_t c = 0; c < k; ++c) {
    objects.push_back(
        {FeatureVector::from_array(result.centroids[c].first<kFeatureDims>()),
         static_cast<std::uint64_t>(result.counts[c])});
  }
  // Weight breaks ties between coincident centroids so that relabelling the
  // clusters never changes the output.
  std::sort(objects.begin(), objects.end(), [](const Object& a, const Object& b) {
    if (auto cmp = a.centroid <=> b.centroid; cmp != 0) return cmp < 0;
    return a.weight < b.weight;
  });

  ImageSignature sig;
  sig.image_id = std::move(image_id);
  for (const Object& o : objects) {
    sig.centroids.push_back(o.centroid);
    sig.weights.push_back(o.weight);
    sig.block_count += o.weight;
  }
  return sig;
}

namespace {

void append_real(std::string& out, double value) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  out.append(buf, end);
}

std::vector<std::string_view> split_tokens(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t start = 0;
  while (true) {
    const std::size_t space = line.find(' ', start);
    tokens.push_back(line.substr(start, space - start));
    if (space == std::string_view::npos) break;
    start = space + 1;
  }
  return tokens;
}

class IndexParser {
 public:
  explicit IndexParser(std::string_view text) : text_(text) {}

  SignatureIndex parse();

 private:
  bool next_line() {
    if (pos_ >= text_.size()) return false;
    const std::size_t nl = text_.find('\n', pos_);
    line_ = text_.substr(pos_, nl == std::string_view::npos ? nl : nl - pos_);
    pos_ = nl == std::string_view::npos ? text_.size() : nl + 1;
    ++line_no_;
    tokens_ = split_tokens(line_);
    return true;
  }

  [[noreturn]] void fail(IndexErrorKind kind, const std::string& what) const {
    throw IndexError(kind, line_no_, what);
  }

  [[noreturn]] void malformed(const std::string& what) const {
    fail(IndexErrorKind::kMalformedLine, what);
  }

  template <typename T>
  T parse_integer(std::string_view token, const char* field) const {
    T value{};
    const auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
      malformed(std::string("bad ") + field + " '" + std::string(token) + "'");
    }
    return value;
  }

  double parse_real(std::string_view token) const {
    double value = 0.0;
    const auto [ptr, ec] =
        std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
      malformed("bad real '" + std::string(token) + "'");
    }
    if (!std::isfinite(value)) {
      fail(IndexErrorKind::kInvalidValue, "non-finite real '" + std::string(token) + "'");
    }
    return value;
  }

  void expect_header(std::string_view keyword, std::size_t arity) {
    if (!next_line()) {
      ++line_no_;
      malformed("missing '" + std::string(keyword) + "' header");
    }
    if (tokens_.size() != arity + 1 || tokens_[0] != keyword) {
      malformed("expected '" + std::string(keyword) + "' header");
    }
  }

  void finish_entry(SignatureIndex& index, ImageSignature& entry,
                    std::size_t entry_line) {
    if (entry.centroids.size() != static_cast<std::size_t>(index.k())) {
      throw IndexError(IndexErrorKind::kCentroidCount, entry_line,
                       "image '" + entry.image_id + "' has " +
                           std::to_string(entry.centroids.size()) +
                           " centroid lines, expected " + std::to_string(index.k()));
    }
    const std::uint64_t sum =
        std::accumulate(entry.weights.begin(), entry.weights.end(), std::uint64_t{0});
    if (sum != entry.block_count) {
      throw IndexError(IndexErrorKind::kWeightSum, entry_line,
                       "image '" + entry.image_id + "' weights sum to " +
                           std::to_string(sum) + ", blockCount is " +
                           std::to_string(entry.block_count));
    }
    if (!std::is_sorted(entry.centroids.begin(), entry.centroids.end())) {
      throw IndexError(IndexErrorKind::kInvalidValue, entry_line,
                       "image '" + entry.image_id +
                           "' centroids are not in canonical order");
    }
    if (index.find(entry.image_id) != nullptr) {
      throw IndexError(IndexErrorKind::kDuplicateId, entry_line,
                       "duplicate image id '" + entry.image_id + "'");
    }
    index.add(std::move(entry));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_no_ = 0;
  std::string_view line_;
  std::vector<std::string_view> tokens_;
};

SignatureIndex IndexParser::parse() {
  expect_header("CBIRIDX", 1);
  const int version = parse_integer<int>(tokens_[1], "version");
  if (version != kIndexVersion) {
    fail(IndexErrorKind::kUnsupportedVersion,
         "unsupported index version " + std::to_string(version));
  }
  expect_header("k", 1);
  const int k = parse_integer<int>(tokens_[1], "k");
  if (k < 1) fail(IndexErrorKind::kInvalidValue, "k must be >= 1");
  expect_header("dims", 1);
  const auto dims = parse_integer<std::size_t>(tokens_[1], "dims");
  if (dims != kFeatureDims) {
    fail(IndexErrorKind::kInvalidValue, "dims must be 6, got " + std::to_string(dims));
  }

  SignatureIndex index(k, version);
  std::optional<ImageSignature> entry;
  std::size_t entry_line = 0;
  while (next_line()) {
    if (tokens_[0] == "image") {
      if (tokens_.size() != 3) malformed("image line needs <id> <blockCount>");
      if (entry) finish_entry(index, *entry, entry_line);
      entry.emplace();
      entry_line = line_no_;
      if (!is_valid_image_id(tokens_[1])) malformed("invalid image id");
      entry->image_id = std::string(tokens_[1]);
      entry->block_count = parse_integer<std::uint64_t>(tokens_[2], "blockCount");
    } else if (tokens_[0] == "centroid") {
      if (tokens_.size() != 2 + kFeatureDims) {
        malformed("centroid line needs <weight> and 6 reals");
      }
      if (!entry) malformed("centroid line before any image line");
      if (entry->centroids.size() == static_cast<std::size_t>(k)) {
        fail(IndexErrorKind::kCentroidCount,
             "image '" + entry->image_id + "' has more than " +
                 std::to_string(k) + " centroid lines");
      }
      const auto weight = parse_integer<std::uint64_t>(tokens_[1], "weight");
      if (weight < 1) fail(IndexErrorKind::kInvalidValue, "weight must be >= 1");
      std::array<double, kFeatureDims> values{};
      for (std::size_t d = 0; d < kFeatureDims; ++d) {
        values[d] = parse_real(tokens_[2 + d]);
      }
      for (std::size_t d = 0; d < 3; ++d) {
        if (values[d] < 0.0 || values[d] > 1.0) {
          fail(IndexErrorKind::kInvalidValue, "h, s, v must lie in [0, 1]");
        }
      }
      entry->centroids.push_back(FeatureVector::from_array(values));
      entry->weights.push_back(weight);
    } else {
      malformed("unknown record '" + std::string(tokens_[0]) + "'");
    }
  }
  if (entry) finish_entry(index, *entry, entry_line);
  return index;
}

}  // namespace

std::string save_index(const SignatureIndex& index) {
  std::string out = "CBIRIDX " + std::to_string(index.version()) + "\nk " +
                    std::to_string(index.k()) + "\ndims " +
                    std::to_string(index.dims()) + "\n";
  for (const ImageSignature& entry : index.entries()) {
    out += "image " + entry.image_id + " " + std::to_string(entry.block_count) + "\n";
    for (std::size_t c = 0; c < entry.centroids.size(); ++c) {
      out += "centroid " + std::to_string(entry.weights[c]);
      for (double value : entry.centroids[c].to_array()) {
        out += ' ';
        append_real(out, value);
      }
      out += '\n';
    }
  }
  return out;
}

SignatureIndex load_index(std::string_view text) {
  return IndexParser(text).parse();
}

}  // namespace blockscan
