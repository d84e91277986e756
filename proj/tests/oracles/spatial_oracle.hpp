#pragma once

// Independent spatial simulator: particles are Eigen vectors, headings are
// unit vectors and board actions are homogeneous 2D transforms applied to
// every particle.

#include "rlvr/spatial.hpp"

namespace oracle {

/// Answer of the query computed by the matrix simulator (coordinates carry
/// floating-point noise; compare at 3 decimals).
rlvr::GroundTruth simulate_with_matrices(const rlvr::spatial::SpatialProblem& problem);

}  // namespace oracle
