#include "blockscan/pipeline.hpp"

#include "blockscan/features.hpp"

namespace blockscan {

ImageSignature compute_signature(std::string image_id, const RasterImage& image,
                                 const ClusterParams& params) {
  const BlockGrid grid = partition_blocks(image);
  const PointSet points = PointSet::from_features(feature_matrix(grid));
  return build_signature(std::move(image_id), kmeans(points, params));
}

}  // namespace blockscan
