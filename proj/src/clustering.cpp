#include "blockscan/clustering.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "blockscan/error.hpp"
#include "blockscan/random.hpp"

namespace blockscan {

PointSet::PointSet(std::size_t dims, std::vector<double> values)
    : dims_(dims), values_(std::move(values)) {
  if (dims_ == 0 || values_.size() % dims_ != 0) {
    throw std::invalid_argument("PointSet values do not tile the dimension");
  }
}

PointSet PointSet::from_features(std::span<const FeatureVector> features) {
  PointSet points(kFeatureDims);
  points.values_.reserve(features.size() * kFeatureDims);
  for (const FeatureVector& f : features) {
    const auto a = f.to_array();
    points.values_.insert(points.values_.end(), a.begin(), a.end());
  }
  return points;
}

void PointSet::push_back(std::span<const double> point) {
  if (point.size() != dims_) {
    throw std::invalid_argument("PointSet::push_back dimension mismatch");
  }
  values_.insert(values_.end(), point.begin(), point.end());
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    sum += d * d;
  }
  return sum;
}

namespace {

void check_cluster_input(const PointSet& points, int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (points.size() < static_cast<std::size_t>(k)) {
    throw ClusteringError("insufficient data: " + std::to_string(points.size()) +
                          " points for k = " + std::to_string(k));
  }
}

// Mean of the points carrying `label`, accumulated in index order. The
// running form keeps the mean of identical points exact.
void cluster_mean(const PointSet& points, std::span<const int> labels, int label,
                  std::span<double> mean) {
  std::fill(mean.begin(), mean.end(), 0.0);
  std::size_t n = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (labels[i] != label) continue;
    ++n;
    const auto p = points[i];
    for (std::size_t d = 0; d < mean.size(); ++d) {
      mean[d] += (p[d] - mean[d]) / static_cast<double>(n);
    }
  }
}

}  // namespace

PointSet init_centroids(const PointSet& points, const ClusterParams& params) {
  check_cluster_input(points, params.k);
  const std::size_t n = points.size();
  SplitMix64 rng(params.seed);

  PointSet centers(points.dims());
  std::vector<bool> chosen(n, false);
  std::vector<double> nearest(n);

  auto choose = [&](std::size_t index) {
    chosen[index] = true;
    centers.push_back(points[index]);
    const auto c = points[index];
    for (std::size_t i = 0; i < n; ++i) {
      const double d = squared_distance(points[i], c);
      nearest[i] = centers.size() == 1 ? d : std::min(nearest[i], d);
    }
  };

  choose(std::min(static_cast<std::size_t>(rng.next_double() * n), n - 1));

  while (centers.size() < static_cast<std::size_t>(params.k)) {
    double total = 0.0;
    for (double d : nearest) total += d;
    const double u = rng.next_double();
    if (total > 0.0) {
      const double target = u * total;
      double cumulative = 0.0;
      std::size_t pick = n;
      for (std::size_t i = 0; i < n; ++i) {
        if (nearest[i] <= 0.0) continue;
        pick = i;
        cumulative += nearest[i];
        if (cumulative > target) break;
      }
      choose(pick);
    } else {
      // Every point coincides with a chosen center; take the first unused
      // index and let empty-cluster repair sort out the duplicates.
      const auto it = std::find(chosen.begin(), chosen.end(), false);
      choose(static_cast<std::size_t>(it - chosen.begin()));
    }
  }
  return centers;
}

std::vector<int> assign_points(const PointSet& points, const PointSet& centroids) {
  if (centroids.empty()) throw std::invalid_argument("no centroids");
  if (points.dims() != centroids.dims() && !points.empty()) {
    throw std::invalid_argument("point/centroid dimension mismatch");
  }
  std::vector<int> labels(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    int best = 0;
    double best_d = squared_distance(points[i], centroids[0]);
    for (std::size_t c = 1; c < centroids.size(); ++c) {
      const double d = squared_distance(points[i], centroids[c]);
      if (d < best_d) {
        best_d = d;
        best = static_cast<int>(c);
      }
    }
    labels[i] = best;
  }
  return labels;
}

CentroidUpdate update_centroids(const PointSet& points,
                                std::span<const int> labels, int k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (labels.size() != points.size()) {
    throw std::invalid_argument("label count != point count");
  }
  CentroidUpdate out;
  out.labels.assign(labels.begin(), labels.end());
  out.counts.assign(static_cast<std::size_t>(k), 0);
  for (int label : out.labels) {
    if (label < 0 || label >= k) throw std::invalid_argument("label out of range");
    ++out.counts[static_cast<std::size_t>(label)];
  }
  out.centroids = PointSet(points.dims(),
                           std::vector<double>(static_cast<std::size_t>(k) * points.dims()));
  for (int c = 0; c < k; ++c) cluster_mean(points, out.labels, c, out.centroids[c]);

  for (int c = 0; c < k; ++c) {
    if (out.counts[c] != 0) continue;
    const auto donor = static_cast<int>(
        std::max_element(out.counts.begin(), out.counts.end()) - out.counts.begin());
    if (out.counts[donor] < 2) {
      throw ClusteringError("cannot repair empty cluster: fewer points than k");
    }
    std::size_t farthest = 0;
    double farthest_d = -1.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
      if (out.labels[i] != donor) continue;
      const double d = squared_distance(points[i], out.centroids[donor]);
      if (d > farthest_d) {
        farthest_d = d;
        farthest = i;
      }
    }
    out.labels[farthest] = c;
    --out.counts[donor];
    ++out.counts[c];
    cluster_mean(points, out.labels, donor, out.centroids[donor]);
    cluster_mean(points, out.labels, c, out.centroids[c]);
  }
  return out;
}

double clustering_objective(const PointSet& points, const PointSet& centroids,
                            std::span<const int> labels) {
  double sum = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    sum += squared_distance(points[i], centroids[labels[i]]);
  }
  return sum;
}

ClusterResult kmeans(const PointSet& points, const ClusterParams& params) {
  if (params.max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
  if (!(params.tolerance >= 0.0)) throw std::invalid_argument("tolerance must be >= 0");
  check_cluster_input(points, params.k);
  for (double v : points.values()) {
    if (!std::isfinite(v)) throw ClusteringError("non-finite feature component");
  }

  ClusterResult result;
  result.centroids = init_centroids(points, params);
  for (int it = 1; it <= params.max_iterations; ++it) {
    const std::vector<int> labels = assign_points(points, result.centroids);
    CentroidUpdate update = update_centroids(points, labels, params.k);

    double displacement = 0.0;
    for (std::size_t c = 0; c < update.centroids.size(); ++c) {
      displacement = std::max(
          displacement,
          std::sqrt(squared_distance(result.centroids[c], update.centroids[c])));
    }
    result.centroids = std::move(update.centroids);
    result.assignments = std::move(update.labels);
    result.counts = std::move(update.counts);
    result.objective =
        clustering_objective(points, result.centroids, result.assignments);
    result.objective_history.push_back(result.objective);
    result.iterations = it;

    // Converged only if the labels are also stable under the new centroids,
    // so the result is a genuine assign/update fixed point.
    if (displacement <= params.tolerance &&
        assign_points(points, result.centroids) == result.assignments) {
      break;
    }
  }
  return result;
}

}  // namespace blockscan
