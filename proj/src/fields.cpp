#include "slaglab/error.hpp"
#include "slaglab/geometry.hpp"
#include "slaglab/spectral.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <cmath>

namespace slaglab::spectral {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

VectorXd mass_solve(const SpectralSystem& sys, const VectorXd& rhs) {
    Eigen::ConjugateGradient<SparseMat, Eigen::Lower | Eigen::Upper> cg;
    cg.setTolerance(1e-13);
    cg.compute(sys.mass);
    VectorXd out = cg.solve(rhs);
    if (cg.info() != Eigen::Success)
        throw SingularMetric("mass solve did not converge");
    return out;
}

// collar profile: 1 on [0, 1/2], smooth decay to 0 at 1
double collar_eta0(double t) {
    if (t <= 0.5) return 1.0;
    if (t >= 1.0) return 0.0;
    return gluing::smoothstep(2.0 * (1.0 - t))[0];
}

} // namespace

EigenFields eigen_fields(const SpectralSystem& sys,
                         const gluing::ChartedSurface& surface) {
    if (sys.eigenvalues.size() < 3)
        throw EigSolverNonConvergence(
            "eigen_fields needs eigenpairs through nu_2");
    const SurfaceMesh& mesh = *sys.mesh;
    if (mesh.axial_layers == 0)
        throw DimensionMismatch("eigen_fields needs the glued product mesh");
    const int N = mesh.node_count();

    EigenFields f;
    f.nu1 = sys.eigenvalues(1);
    f.nu2 = sys.eigenvalues(2);
    f.vol = sys.volume();

    // boundary volumes and the step function v
    const double vol1 = mesh.boundary_measure(1);
    const double vol2 = mesh.boundary_measure(2);
    f.v_boundary = VectorXd::Zero(N);
    for (int b = 0; b < mesh.boundary_facets.rows(); ++b)
        for (int k = 0; k < mesh.dim; ++k) {
            const int node = mesh.boundary_facets(b, k);
            f.v_boundary(node) =
                mesh.boundary_label[b] == 1 ? 1.0 / vol1 : -1.0 / vol2;
        }
    f.int_v = VectorXd::Ones(N).dot(sys.boundary_mass * f.v_boundary);

    // sign-fixed first eigenfunction: positive mean on the dM1 boundary
    f.S = sys.eigenvectors.col(1);
    {
        const VectorXd bS = sys.boundary_mass * f.S;
        double mean1 = 0.0;
        for (int i = 0; i < N; ++i)
            if (f.v_boundary(i) > 0.0) mean1 += bS(i);
        if (mean1 < 0.0) f.S = -f.S;
    }

    f.sigma = sigma_field(surface, mesh);
    const VectorXd ones = VectorXd::Ones(N);
    const VectorXd Msigma = sys.mass * f.sigma;
    f.sigma_dot_S = f.S.dot(Msigma);
    if (std::abs(f.sigma_dot_S) < 1e-3)
        throw DegenerateProjection(
            "<sigma, S> collapsed; eigen-solver or mesh failure");
    f.S_bar = (f.sigma - (ones.dot(Msigma) / f.vol) * ones) / f.sigma_dot_S;

    // angle fields at the nodes
    f.psi0.resize(N);
    f.sin_theta.resize(N);
    for (int i = 0; i < N; ++i) {
        const auto c = geometry::lagrangian_angle(
            surface, mesh.params(i, 0), mesh.params.row(i).tail(3));
        f.psi0(i) = c.re_dz;
        f.sin_theta(i) = c.im_dz;
    }

    // collar extension v_e along the axial mesh lines
    const int nv = mesh.sphere_verts;
    const int layers = mesh.axial_layers;
    const double w2 = 0.2 * surface.exterior(1).outer_radius;
    f.v_e = VectorXd::Zero(N);
    for (int j = 0; j < nv; ++j) {
        // cumulative arc length from each boundary along the line
        std::vector<double> len(layers + 1, 0.0);
        for (int i = 1; i <= layers; ++i)
            len[i] = len[i - 1] + (mesh.positions.row(i * nv + j) -
                                   mesh.positions.row((i - 1) * nv + j))
                                      .norm();
        const double total = len[layers];
        for (int i = 0; i <= layers; ++i) {
            const double from_m2 = len[i];           // label 2 at layer 0
            const double from_m1 = total - len[i];   // label 1 at the top
            double s1, vval;
            if (from_m1 <= from_m2) {
                s1 = from_m1;
                vval = 1.0 / vol1;
            } else {
                s1 = from_m2;
                vval = -1.0 / vol2;
            }
            f.v_e(i * nv + j) = vval * s1 * collar_eta0(s1 / w2);
        }
    }

    // weak psi1 = -lap(v_e) with the Neumann flux Z(v_e) = v:
    // <psi1, w> = int_dM v w - w^T K v_e
    const VectorXd rhs =
        sys.boundary_mass * f.v_boundary - sys.stiffness * f.v_e;
    f.int_psi1 = ones.dot(rhs);
    f.psi1_dot_S = f.S.dot(rhs);
    f.psi1 = mass_solve(sys, rhs);
    return f;
}

Eigen::VectorXd curvature_transport(const SpectralSystem& sys,
                                    const VectorXd& theta_sin,
                                    const VectorXd& theta_angle,
                                    const VectorXd& u) {
    (void)theta_sin;
    const SurfaceMesh& mesh = *sys.mesh;
    const int d = mesh.dim;
    const int N = mesh.node_count();
    MatrixXd B = MatrixXd::Zero(d, d + 1);
    B.col(0).setConstant(-1.0);
    B.rightCols(d).setIdentity();

    VectorXd acc = VectorXd::Zero(N), wsum = VectorXd::Zero(N);
    for (int c = 0; c < mesh.cell_count(); ++c) {
        VectorXd tloc(d + 1), uloc(d + 1);
        for (int k = 0; k <= d; ++k) {
            tloc(k) = theta_angle(mesh.cells(c, k));
            uloc(k) = u(mesh.cells(c, k));
        }
        const VectorXd gt = B * tloc;
        const VectorXd gu = B * uloc;
        const double inner = gt.dot(mesh.cell_gram[c].ldlt().solve(gu));
        const double vol = mesh.cell_volume(c);
        for (int k = 0; k <= d; ++k) {
            acc(mesh.cells(c, k)) += vol * inner;
            wsum(mesh.cells(c, k)) += vol;
        }
    }
    for (int i = 0; i < N; ++i) acc(i) /= std::max(wsum(i), 1e-300);
    return acc;
}

Eigen::VectorXd linearized_apply(const SpectralSystem& sys,
                                 const EigenFields& fields,
                                 const VectorXd& u, double a, double b) {
    const int N = sys.mesh->node_count();
    if (u.size() != N)
        throw DimensionMismatch("nodal vector length mismatch");
    const VectorXd lap_u = mass_solve(sys, sys.stiffness * u);
    VectorXd theta(N);
    for (int i = 0; i < N; ++i)
        theta(i) = std::atan2(fields.sin_theta(i), fields.psi0(i));
    const VectorXd transport =
        curvature_transport(sys, fields.sin_theta, theta, u);
    VectorXd out = -fields.psi0.cwiseProduct(lap_u) -
                   fields.sin_theta.cwiseProduct(transport) +
                   a * fields.psi0 + b * fields.psi1;
    return out;
}

} // namespace slaglab::spectral
