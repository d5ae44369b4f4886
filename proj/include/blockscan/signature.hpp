#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "blockscan/clustering.hpp"
#include "blockscan/features.hpp"

namespace blockscan {

// An image reduced to its k cluster centroids ("objects").
struct ImageSignature {
  std::string image_id;
  // Sorted lexicographically by (h, s, v, hl, lh, hh).
  std::vector<FeatureVector> centroids;
  // Cluster member counts, co-sorted with centroids.
  std::vector<std::uint64_t> weights;
  std::uint64_t block_count = 0;

  friend bool operator==(const ImageSignature&, const ImageSignature&) = default;
};

inline constexpr int kIndexVersion = 1;

class SignatureIndex {
 public:
  SignatureIndex() = default;
  explicit SignatureIndex(int k, int version = kIndexVersion)
      : version_(version), k_(k) {}

  int version() const { return version_; }
  int k() const { return k_; }
  std::size_t dims() const { return kFeatureDims; }
  const std::vector<ImageSignature>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  // Throws IndexError on a duplicate id or a centroid count other than k.
  void add(ImageSignature signature);

  const ImageSignature* find(std::string_view image_id) const;

  friend bool operator==(const SignatureIndex&, const SignatureIndex&) = default;

 private:
  int version_ = kIndexVersion;
  int k_ = 3;
  std::vector<ImageSignature> entries_;
};

// Non-empty, no whitespace or control characters.
bool is_valid_image_id(std::string_view id);

// Canonicalizes a 6-dimensional cluster result. Throws InvalidIdError.
ImageSignature build_signature(std::string image_id,
                               const ClusterResult& result);

// Line-oriented text format:
//   CBIRIDX <version>
//   k <k>
//   dims 6
//   image <id> <blockCount>
//   centroid <weight> <h> <s> <v> <hl> <lh> <hh>   (k lines per image)
// Reals are written in shortest round-trip form.
std::string save_index(const SignatureIndex& index);

// Parses and validates; throws IndexError with the offending line number.
SignatureIndex load_index(std::string_view text);

}  // namespace blockscan
