#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "blockscan/clustering.hpp"
#include "blockscan/signature.hpp"

namespace blockscan {

struct RankedMatch {
  std::string image_id;
  double distance = 0.0;

  friend bool operator==(const RankedMatch&, const RankedMatch&) = default;
};

// Throws std::invalid_argument on dimension mismatch.
double euclidean(std::span<const double> p, std::span<const double> q);

// For each query centroid, the distance to its nearest target centroid;
// returns the mean of those minima. Directional: d(Q, A) != d(A, Q) in
// general.
double centroid_set_distance(const PointSet& query, const PointSet& target);

// Throws IndexError (kParameterMismatch) when k differs. Weights are ignored.
double signature_distance(const ImageSignature& query,
                          const ImageSignature& target);

// Sorts ascending by distance, ties by image id, then truncates to top_n.
std::vector<RankedMatch> rank_matches(std::vector<RankedMatch> matches,
                                      std::optional<std::size_t> top_n = {});

std::vector<RankedMatch> rank(const ImageSignature& query,
                              const SignatureIndex& index,
                              std::optional<std::size_t> top_n = {});

// Keeps matches with distance <= threshold. Throws std::invalid_argument for
// a negative or NaN threshold.
std::vector<RankedMatch> filter_by_threshold(std::span<const RankedMatch> matches,
                                             double threshold);

}  // namespace blockscan
