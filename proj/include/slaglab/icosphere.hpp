#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

namespace slaglab {

struct TriMesh {
    std::vector<Eigen::Vector3d> vertices;
    std::vector<std::array<int, 3>> faces;
};

/// Icosahedron subdivided `level` times, vertices projected to the unit
/// sphere: level 0 has 12 vertices / 20 faces, level 3 has 642 / 1280.
TriMesh icosphere(int level);

} // namespace slaglab
