#include "slaglab/spectral.hpp"
#include "slaglab/error.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>
#include <random>

namespace slaglab::spectral {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

double factorial(int k) {
    double f = 1.0;
    for (int i = 2; i <= k; ++i) f *= i;
    return f;
}

// reference barycentric gradients: column 0 is (-1...-1), column i is e_i
MatrixXd reference_gradients(int d) {
    MatrixXd B = MatrixXd::Zero(d, d + 1);
    B.col(0).setConstant(-1.0);
    B.rightCols(d).setIdentity();
    return B;
}

} // namespace

double SpectralSystem::volume() const {
    return VectorXd::Ones(mass.rows()).dot(mass * VectorXd::Ones(mass.rows()));
}

SpectralSystem assemble(std::shared_ptr<const SurfaceMesh> mesh_in) {
    SpectralSystem sys;
    sys.mesh = std::move(mesh_in);
    const SurfaceMesh& mesh = *sys.mesh;
    const int d = mesh.dim;
    const int N = mesh.node_count();
    const MatrixXd B = reference_gradients(d);

    std::vector<Eigen::Triplet<double>> kt, mt;
    kt.reserve(static_cast<size_t>(mesh.cell_count()) * (d + 1) * (d + 1));
    mt.reserve(kt.capacity());
    for (int c = 0; c < mesh.cell_count(); ++c) {
        const MatrixXd& G = mesh.cell_gram[c];
        const double det = G.determinant();
        if (!(det > 0.0)) throw SingularMetric("cell metric not positive");
        const double vol = std::sqrt(det) / factorial(d);
        const MatrixXd Kloc = vol * B.transpose() * G.inverse() * B;
        const double mdiag = vol * 2.0 / ((d + 1) * (d + 2));
        const double moff = vol * 1.0 / ((d + 1) * (d + 2));
        for (int i = 0; i <= d; ++i)
            for (int j = 0; j <= d; ++j) {
                kt.emplace_back(mesh.cells(c, i), mesh.cells(c, j),
                                Kloc(i, j));
                mt.emplace_back(mesh.cells(c, i), mesh.cells(c, j),
                                i == j ? mdiag : moff);
            }
    }
    sys.stiffness.resize(N, N);
    sys.stiffness.setFromTriplets(kt.begin(), kt.end());
    sys.mass.resize(N, N);
    sys.mass.setFromTriplets(mt.begin(), mt.end());

    std::vector<Eigen::Triplet<double>> bt;
    const int df = d - 1;
    for (int b = 0; b < mesh.boundary_facets.rows(); ++b) {
        const double m = mesh.facet_measure(b);
        const double bdiag = m * 2.0 / ((df + 1) * (df + 2));
        const double boff = m * 1.0 / ((df + 1) * (df + 2));
        for (int i = 0; i <= df; ++i)
            for (int j = 0; j <= df; ++j)
                bt.emplace_back(mesh.boundary_facets(b, i),
                                mesh.boundary_facets(b, j),
                                i == j ? bdiag : boff);
    }
    sys.boundary_mass.resize(N, N);
    sys.boundary_mass.setFromTriplets(bt.begin(), bt.end());
    return sys;
}

void neumann_eigs(SpectralSystem& sys, int count, double rel_tol,
                  unsigned seed) {
    if (count < 3) throw DimensionMismatch("request at least three pairs");
    const int N = static_cast<int>(sys.stiffness.rows());
    const double scale = sys.stiffness.diagonal().sum() /
                         std::max(1e-300, sys.mass.diagonal().sum());
    const double sigma = -1e-3 * scale;

    SparseMat shifted = sys.stiffness - sigma * sys.mass;
    Eigen::SimplicialLDLT<SparseMat> solver(shifted);
    if (solver.info() != Eigen::Success)
        throw EigSolverNonConvergence("shifted factorization failed");

    // M-Lanczos with full reorthogonalization on (K - sigma M)^{-1} M
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    VectorXd q(N);
    for (int i = 0; i < N; ++i) q(i) = gauss(rng);
    q /= std::sqrt(q.dot(sys.mass * q));

    const int max_steps = std::min(N, std::max(40, 6 * count + 20));
    std::vector<VectorXd> basis;
    std::vector<double> alpha, beta;
    basis.push_back(q);
    VectorXd converged_check;
    int m = 0;
    MatrixXd ritz_vectors;
    VectorXd ritz_values;
    for (int step = 0; step < max_steps; ++step) {
        VectorXd w = solver.solve(sys.mass * basis.back());
        const double a = w.dot(sys.mass * basis.back());
        alpha.push_back(a);
        w -= a * basis.back();
        if (basis.size() > 1) w -= beta.back() * basis[basis.size() - 2];
        // full reorthogonalization, twice
        for (int pass = 0; pass < 2; ++pass)
            for (const auto& b : basis) w -= (w.dot(sys.mass * b)) * b;
        const double nb = std::sqrt(std::max(0.0, w.dot(sys.mass * w)));
        m = static_cast<int>(alpha.size());

        // Ritz pairs of the tridiagonal
        MatrixXd T = MatrixXd::Zero(m, m);
        for (int i = 0; i < m; ++i) {
            T(i, i) = alpha[i];
            if (i + 1 < m) T(i, i + 1) = T(i + 1, i) = beta[i];
        }
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(T);
        // largest mu correspond to the smallest nu
        if (m >= count) {
            bool ok = true;
            for (int k = 0; k < count; ++k) {
                const int idx = m - 1 - k;
                const double mu = es.eigenvalues()(idx);
                const double resid =
                    nb * std::abs(es.eigenvectors()(m - 1, idx));
                if (resid > rel_tol * std::max(std::abs(mu), 1e-12))
                    ok = false;
            }
            if (ok || nb < 1e-14 || step == max_steps - 1) {
                ritz_values.resize(count);
                ritz_vectors.resize(N, count);
                for (int k = 0; k < count; ++k) {
                    const int idx = m - 1 - k;
                    ritz_values(k) = sigma + 1.0 / es.eigenvalues()(idx);
                    VectorXd v = VectorXd::Zero(N);
                    for (int i = 0; i < m; ++i)
                        v += es.eigenvectors()(i, idx) * basis[i];
                    ritz_vectors.col(k) = v;
                }
                break;
            }
        }
        if (nb < 1e-14 && m < count)
            throw EigSolverNonConvergence("Krylov space collapsed early");
        beta.push_back(nb);
        basis.push_back(w / nb);
    }
    if (ritz_values.size() == 0)
        throw EigSolverNonConvergence("Lanczos did not converge");

    // mass-normalize and verify true residuals
    for (int k = 0; k < count; ++k) {
        VectorXd v = ritz_vectors.col(k);
        v /= std::sqrt(v.dot(sys.mass * v));
        ritz_vectors.col(k) = v;
        const VectorXd r =
            sys.stiffness * v - ritz_values(k) * (sys.mass * v);
        const double denom =
            std::max((sys.stiffness * v).norm(), std::abs(sigma));
        if (r.norm() > 1e-8 * denom + 1e-12)
            throw EigSolverNonConvergence(
                "eigenpair residual above tolerance");
    }
    sys.eigenvalues = ritz_values;
    sys.eigenvectors = ritz_vectors;
}

Eigen::VectorXd sigma_field(const gluing::ChartedSurface& surface,
                            const SurfaceMesh& mesh) {
    // +1 on M1' (lambda > lambda_delta), -1 on M2', smoothstep between
    const VectorXd mu_ref = Eigen::Vector3d(1, 1, 1).normalized();
    const double delta = surface.cfg().delta;
    const double l1 = surface.lambda_at_radius(1, delta, mu_ref);
    const double l2 = surface.lambda_at_radius(2, delta, mu_ref);
    VectorXd out(mesh.node_count());
    for (int i = 0; i < mesh.node_count(); ++i) {
        const double l = mesh.params(i, 0);
        const double t = l >= 0 ? std::min(1.0, l / l1)
                                : -std::min(1.0, -l / l2);
        out(i) = 2.0 * gluing::smoothstep(0.5 * (t + 1.0))[0] - 1.0;
    }
    return out;
}

RayleighBound rayleigh_test_bound(const gluing::ChartedSurface& surface,
                                  const SpectralSystem& sys) {
    VectorXd u = sigma_field(surface, *sys.mesh);
    const VectorXd ones = VectorXd::Ones(u.size());
    const double vol = ones.dot(sys.mass * ones);
    u -= (ones.dot(sys.mass * u) / vol) * ones;
    RayleighBound out;
    out.mean_residual = std::abs(ones.dot(sys.mass * u));
    out.value = u.dot(sys.stiffness * u) / u.dot(sys.mass * u);
    return out;
}

} // namespace slaglab::spectral
