#pragma once

#include <Eigen/Sparse>
#include <memory>

#include "slaglab/mesh.hpp"

namespace slaglab::spectral {

using SparseMat = Eigen::SparseMatrix<double>;

/// P1 stiffness/mass pair on a SurfaceMesh with natural Neumann boundary
/// (no boundary rows are touched), plus the boundary facet mass matrix
/// used for flux pairings.
struct SpectralSystem {
    std::shared_ptr<const SurfaceMesh> mesh;
    SparseMat stiffness;
    SparseMat mass;
    SparseMat boundary_mass;
    Eigen::VectorXd eigenvalues;   // filled by neumann_eigs
    Eigen::MatrixXd eigenvectors;  // mass-orthonormal columns

    double volume() const;  // 1^T M 1
};

SpectralSystem assemble(std::shared_ptr<const SurfaceMesh> mesh);

/// Smallest `count` generalized eigenpairs of (K, M) by shift-invert
/// Lanczos in the M-inner product with full reorthogonalization; the
/// factorized operator is (K - sigma M)^{-1} M with a small negative
/// sigma, so the Neumann kernel (constants) appears as nu_0 ~ 0.
void neumann_eigs(SpectralSystem& system, int count, double rel_tol = 1e-9,
                  unsigned seed = 20260810);

/// Rayleigh quotient of the mean-corrected +/-1 neck-interpolated test
/// function; a variational upper bound for nu_1.
struct RayleighBound {
    double value = 0.0;
    double mean_residual = 0.0;  // |<u, 1>_M| after the correction
};
RayleighBound rayleigh_test_bound(const gluing::ChartedSurface& surface,
                                  const SpectralSystem& system);

/// sigma interpolation field (+1 on the M1' side, -1 on M2', smooth step
/// across the neck region).
Eigen::VectorXd sigma_field(const gluing::ChartedSurface& surface,
                            const SurfaceMesh& mesh);

struct EigenFields {
    Eigen::VectorXd S;       // first nontrivial eigenfunction, sign-fixed
    Eigen::VectorXd S_bar;   // (sigma - mean) / <sigma, S>
    Eigen::VectorXd sigma;
    Eigen::VectorXd psi0;       // cos(theta) at the nodes
    Eigen::VectorXd sin_theta;  // sin(theta) at the nodes
    Eigen::VectorXd psi1;       // nodal M^{-1}(B v - K v_e)
    Eigen::VectorXd v_boundary;  // nodal v (zero off the boundary)
    Eigen::VectorXd v_e;         // collar extension with Z(v_e) = v
    double nu1 = 0.0, nu2 = 0.0;
    double vol = 0.0;
    double sigma_dot_S = 0.0;   // <sigma, S>_M
    double psi1_dot_S = 0.0;    // weak pairing <psi1, S>
    double int_psi1 = 0.0;      // weak pairing <psi1, 1>
    double int_v = 0.0;         // boundary integral of v
};

EigenFields eigen_fields(const SpectralSystem& system,
                         const gluing::ChartedSurface& surface);

/// Discrete field of the linearized deformation operator
///   -cos(theta) lap(u) - sin(theta) <H, grad u> + a cos(theta)
///   - b lap(v_e),
/// with lap the nonnegative mass-inverted weak Laplacian.
Eigen::VectorXd linearized_apply(const SpectralSystem& system,
                                 const EigenFields& fields,
                                 const Eigen::VectorXd& u, double a, double b);

/// Per-node average of sin(theta) <grad theta, grad u>_g over incident
/// cells (the mean-curvature transport term of the linearized operator).
Eigen::VectorXd curvature_transport(const SpectralSystem& system,
                                    const Eigen::VectorXd& theta_sin,
                                    const Eigen::VectorXd& theta_angle,
                                    const Eigen::VectorXd& u);

} // namespace slaglab::spectral
