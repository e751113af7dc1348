#pragma once

// Reference min/max stepsize ratios of the equidistributed benchmark meshes
// for N+1 = 40, 80, 160, 320 intervals.

#include <array>

#include "peer/grid.hpp"

namespace tables {

struct MeshReference {
  peer::DensityFamily family;
  int r;
  double T;
  std::array<double, 4> sigma_min, sigma_max;
};

inline constexpr std::array<int, 4> kMeshIntervals = {40, 80, 160, 320};

inline const std::array<MeshReference, 4>& mesh_references() {
  static const std::array<MeshReference, 4> refs = {{
      {peer::DensityFamily::TrackingQuad, 3, 0.5, {0.93, 0.96, 0.97, 0.98}, {1.31, 1.23, 1.15, 1.09}},
      {peer::DensityFamily::TrackingQuad, 4, 0.5, {0.94, 0.97, 0.98, 0.99}, {1.24, 1.14, 1.08, 1.04}},
      {peer::DensityFamily::Catenary, 3, 2.0, {0.74, 0.80, 0.86, 0.92}, {1.35, 1.25, 1.16, 1.09}},
      {peer::DensityFamily::Catenary, 4, 2.0, {0.81, 0.87, 0.92, 0.96}, {1.24, 1.15, 1.08, 1.04}},
  }};
  return refs;
}

}  // namespace tables
