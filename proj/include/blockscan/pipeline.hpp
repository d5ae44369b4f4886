#pragma once

#include <string>

#include "blockscan/clustering.hpp"
#include "blockscan/imaging.hpp"
#include "blockscan/signature.hpp"

namespace blockscan {

// partition -> features -> k-means -> canonical signature. Used
// both for indexing and for queries so a query image that is also indexed
// reproduces its stored signature exactly.
ImageSignature compute_signature(std::string image_id, const RasterImage& image,
                                 const ClusterParams& params);

}  // namespace blockscan
