#pragma once

#include "slaglab/gluing.hpp"
#include "slaglab/icosphere.hpp"

namespace slaglab::spectral {

/// Simplicial mesh of an embedded manifold. `dim` is the simplex
/// dimension; positions live in whatever ambient dimension the surface
/// embeds into. Per-cell metric Grams come from the edge vectors of the
/// embedded simplex.
struct SurfaceMesh {
    int dim = 3;
    Eigen::MatrixXd params;     // per node: (lambda, mu) for glued meshes
    Eigen::MatrixXd positions;  // N x ambient
    Eigen::MatrixXi cells;      // C x (dim + 1)
    std::vector<Eigen::MatrixXd> cell_gram;
    std::vector<int> cell_zone;       // 0 exterior, 1 transition, 2 core
    Eigen::MatrixXi boundary_facets;  // B x dim
    std::vector<int> boundary_label;  // 1 = dM1 side, 2 = dM2 side
    int axial_layers = 0;   // product-mesh structure (0 for test meshes)
    int sphere_verts = 0;

    int node_count() const { return static_cast<int>(positions.rows()); }
    int cell_count() const { return static_cast<int>(cells.rows()); }
    double cell_volume(int c) const;
    double total_volume() const;
    /// Facet measure (uses the embedded facet edge Gram).
    double facet_measure(int b) const;
    double boundary_measure(int label) const;

    nlohmann::json to_json() const;
};

struct MeshResolution {
    int sphere_level = 3;
    int axial_layers = 64;
};

/// Product mesh of the glued cylinder [-1, 1] x S^2: icosphere cross a
/// graded axial grid (linear over the neck core, geometric outside, at
/// least 8 cells across the core), prisms split into tetrahedra.
SurfaceMesh build_mesh(const gluing::ChartedSurface& surface,
                       const MeshResolution& res);

/// Unit round sphere (validation mesh; first nonzero eigenvalue 2).
SurfaceMesh sphere_test_mesh(int level);

/// Flat cylinder [0, L] x S^1 (validation mesh; nu_1 = (pi / L)^2 for
/// L > pi).
SurfaceMesh cylinder_test_mesh(double length, int axial, int around);

} // namespace slaglab::spectral
