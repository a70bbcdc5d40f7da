#pragma once

#include "slaglab/gluing.hpp"

namespace slaglab::geometry {

struct CalibrationSample {
    double lambda = 0.0;
    Eigen::VectorXd mu;
    Eigen::VectorXd ambient;
    double re_dz = 1.0;  // cos(theta)
    double im_dz = 0.0;  // sin(theta)
    double theta = 0.0;
};

/// Real and imaginary parts of det_C(I + i hess).
std::pair<double, double> hl_pullback(const Eigen::MatrixXd& hess);

/// Lagrangian angle from an orthonormalized tangent frame at the chart
/// point; the frame sign is fixed so re_dz > 0 (the surfaces built here
/// stay within the |theta| < pi/2 branch).
CalibrationSample lagrangian_angle(const gluing::ChartedSurface& surface,
                                   double lambda, const Eigen::VectorXd& mu);

/// Same angle through the Harvey--Lawson determinant over the end-plane
/// graph chart; only valid where the surface is graphical (|x| >= eps R0).
CalibrationSample lagrangian_angle_graph(const gluing::ChartedSurface& surface,
                                         int end, const Eigen::VectorXd& x);

struct MeanCurvatureSample {
    Eigen::VectorXd H;  // ambient vector
    double norm = 0.0;  // |grad theta| in the induced metric
};

/// Mean curvature through d(theta) = -H . omega, with the angle field
/// differentiated by central differences in chart coordinates.
MeanCurvatureSample mean_curvature(const gluing::ChartedSurface& surface,
                                   double lambda, const Eigen::VectorXd& mu);

enum class Region { Exterior, Transition, NeckCore, NeckTotal, All };

struct VolumeResult {
    double value = 0.0;      // Richardson-extrapolated
    double estimate_coarse = 0.0;
    double estimate_fine = 0.0;
    double certificate = 0.0;  // |fine - coarse| / 3
};

/// Zone volume by sphere-rule x radial Gauss quadrature of sqrt(det g) in
/// cylinder coordinates, with a two-level Richardson certificate. Throws
/// QuadratureNonConvergence when the certificate exceeds rel_tol * value.
VolumeResult volume(const gluing::ChartedSurface& surface, Region region,
                    int sphere_level = 3, int radial_panels = 8,
                    double rel_tol = 0.02);

struct ResidualField {
    std::vector<CalibrationSample> transition;
    std::vector<CalibrationSample> exterior;
    std::vector<CalibrationSample> core;
    double sup_E = 0.0;           // sup |sin theta| over the transition
    double sup_E_exterior = 0.0;  // support check: zero for flat pieces
    double sup_E_core = 0.0;
    double weighted_sup = 0.0;    // sup |rho^2 sin theta| over everything
};

ResidualField residual(const gluing::ChartedSurface& surface,
                       const gluing::WeightFunction& weight,
                       int radial_samples = 12, int sphere_level = 1);

/// Deterministic sample parameters (lambda, mu) covering a zone.
std::vector<std::pair<double, Eigen::VectorXd>> zone_samples(
    const gluing::ChartedSurface& surface, Region region, int radial_samples,
    int sphere_level);

} // namespace slaglab::geometry
