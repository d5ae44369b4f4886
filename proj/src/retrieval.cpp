#include "blockscan/retrieval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "blockscan/error.hpp"

namespace blockscan {

double euclidean(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size()) {
    throw std::invalid_argument("euclidean: dimension mismatch");
  }
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    const double d = p[i] - q[i];
    sum += d * d;
  }
  return std::sqrt(sum);
}

double centroid_set_distance(const PointSet& query, const PointSet& target) {
  if (query.empty() || target.empty()) {
    throw std::invalid_argument("centroid_set_distance: empty centroid set");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < query.size(); ++i) {
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < target.size(); ++j) {
      nearest = std::min(nearest, euclidean(query[i], target[j]));
    }
    total += nearest;
  }
  return total / static_cast<double>(query.size());
}

double signature_distance(const ImageSignature& query, const ImageSignature& target) {
  if (query.centroids.size() != target.centroids.size()) {
    throw IndexError(IndexErrorKind::kParameterMismatch, 0,
                     "signature k mismatch: '" + query.image_id + "' has " +
                         std::to_string(query.centroids.size()) + ", '" +
                         target.image_id + "' has " +
                         std::to_string(target.centroids.size()));
  }
  return centroid_set_distance(
      PointSet::from_features(query.centroids),
      PointSet::from_features(target.centroids));
}

std::vector<RankedMatch> rank_matches(std::vector<RankedMatch> matches,
                                      std::optional<std::size_t> top_n) {
  std::sort(matches.begin(), matches.end(),
            [](const RankedMatch& a, const RankedMatch& b) {
              if (a.distance != b.distance) return a.distance < b.distance;
              return a.image_id < b.image_id;
            });
  if (top_n && matches.size() > *top_n) matches.resize(*top_n);
  return matches;
}

std::vector<RankedMatch> rank(const ImageSignature& query,
                              const SignatureIndex& index,
                              std::optional<std::size_t> top_n) {
  std::vector<RankedMatch> matches;
  matches.reserve(index.size());
  for (const ImageSignature& entry : index.entries()) {
    matches.push_back({entry.image_id, signature_distance(query, entry)});
  }
  return rank_matches(std::move(matches), top_n);
}

std::vector<RankedMatch> filter_by_threshold(std::span<const RankedMatch> matches,
                                             double threshold) {
  if (!(threshold >= 0.0)) {
    throw std::invalid_argument("threshold must be >= 0");
  }
  std::vector<RankedMatch> kept;
  for (const RankedMatch& m : matches) {
    if (m.distance <= threshold) kept.push_back(m);
  }
  return kept;
}

}  // namespace blockscan
