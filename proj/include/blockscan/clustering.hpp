#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "blockscan/features.hpp"

namespace blockscan {

// Dense row-major set of equal-dimension points.
class PointSet {
 public:
  PointSet() = default;
  explicit PointSet(std::size_t dims) : dims_(dims) {}
  PointSet(std::size_t dims, std::vector<double> values);

  static PointSet from_features(std::span<const FeatureVector> features);

  std::size_t dims() const { return dims_; }
  std::size_t size() const { return dims_ == 0 ? 0 : values_.size() / dims_; }
  bool empty() const { return values_.empty(); }

  std::span<const double> operator[](std::size_t i) const {
    return {values_.data() + i * dims_, dims_};
  }
  std::span<double> operator[](std::size_t i) {
    return {values_.data() + i * dims_, dims_};
  }

  void push_back(std::span<const double> point);

  const std::vector<double>& values() const { return values_; }

  friend bool operator==(const PointSet&, const PointSet&) = default;

 private:
  std::size_t dims_ = 0;
  std::vector<double> values_;
};

struct ClusterParams {
  int k = 3;
  std::uint64_t seed = 0;
  int max_iterations = 100;
  // Stop once no centroid moves farther than this in one iteration.
  double tolerance = 1e-9;
};

struct ClusterResult {
  PointSet centroids;
  std::vector<int> assignments;
  std::vector<std::size_t> counts;
  // Sum of squared distances from each point to its assigned centroid.
  double objective = 0.0;
  int iterations = 0;
  // Objective after each iteration; non-increasing.
  std::vector<double> objective_history;

  friend bool operator==(const ClusterResult&, const ClusterResult&) = default;
};

struct CentroidUpdate {
  PointSet centroids;
  std::vector<std::size_t> counts;
  // Input labels after empty-cluster repair.
  std::vector<int> labels;
};

double squared_distance(std::span<const double> a, std::span<const double> b);

// k-means++ seeding driven by SplitMix64(params.seed).
PointSet init_centroids(const PointSet& points, const ClusterParams& params);

// Nearest centroid per point; the lowest label wins exact ties.
std::vector<int> assign_points(const PointSet& points, const PointSet& centroids);

// Per-cluster means. A cluster left empty takes the point farthest from its
// centroid in the currently most populous cluster.
CentroidUpdate update_centroids(const PointSet& points,
                                std::span<const int> labels, int k);

// Sum of squared distances from each point to its labelled centroid.
double clustering_objective(const PointSet& points, const PointSet& centroids,
                            std::span<const int> labels);

ClusterResult kmeans(const PointSet& points, const ClusterParams& params);

}  // namespace blockscan
