#include "slaglab/geometry.hpp"
#include "slaglab/error.hpp"
#include "slaglab/icosphere.hpp"
#include "slaglab/quadrature.hpp"

#include <cmath>
#include <complex>
#include <map>

namespace slaglab::geometry {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using gluing::ChartedSurface;

std::pair<double, double> hl_pullback(const MatrixXd& hess) {
    const int n = static_cast<int>(hess.rows());
    MatrixXcd m = MatrixXcd::Identity(n, n);
    m += std::complex<double>(0.0, 1.0) * hess.cast<std::complex<double>>();
    const std::complex<double> det = m.determinant();
    return {det.real(), det.imag()};
}

namespace {

std::complex<double> frame_determinant(const MatrixXd& jac) {
    const int n = static_cast<int>(jac.cols());
    Eigen::HouseholderQR<MatrixXd> qr(jac);
    const MatrixXd q = MatrixXd(qr.householderQ()).leftCols(n);
    MatrixXcd zf(n, n);
    zf.real() = q.topRows(n);
    zf.imag() = q.bottomRows(n);
    return zf.determinant();
}

} // namespace

CalibrationSample lagrangian_angle(const ChartedSurface& surface,
                                   double lambda, const VectorXd& mu) {
    const MatrixXd tan = lawlor::sphere_tangent_basis(mu);
    const auto cp = surface.point_full(lambda, mu, tan);
    std::complex<double> dz = frame_determinant(cp.jacobian);
    if (dz.real() < 0.0) dz = -dz;  // fix the frame orientation
    CalibrationSample out;
    out.lambda = lambda;
    out.mu = mu;
    out.ambient = cp.ambient;
    out.re_dz = dz.real();
    out.im_dz = dz.imag();
    out.theta = std::atan2(dz.imag(), dz.real());
    return out;
}

CalibrationSample lagrangian_angle_graph(const ChartedSurface& surface,
                                         int end, const VectorXd& x) {
    const auto gd = surface.graph_data(end, x);
    auto [re, im] = hl_pullback(gd.hess);
    const double norm = std::hypot(re, im);  // = sqrt(det(I + H^2))
    std::complex<double> dz(re / norm, im / norm);
    if (end == 2) dz = -dz;  // the end-2 phase sum is pi
    if (dz.real() < 0.0) dz = -dz;
    CalibrationSample out;
    out.mu = x;
    out.ambient = surface.graph_point(end, x);
    out.re_dz = dz.real();
    out.im_dz = dz.imag();
    out.theta = std::atan2(dz.imag(), dz.real());
    return out;
}

MeanCurvatureSample mean_curvature(const ChartedSurface& surface,
                                   double lambda, const VectorXd& mu) {
    const int n = surface.n();
    const MatrixXd tan = lawlor::sphere_tangent_basis(mu);
    const auto cp = surface.point_full(lambda, mu, tan);
    const double hl = 1e-5 * std::max(1.0, std::abs(lambda));
    const double hw = 1e-5;
    VectorXd dtheta(n);
    dtheta(0) = (lagrangian_angle(surface, lambda + hl, mu).theta -
                 lagrangian_angle(surface, lambda - hl, mu).theta) /
                (2.0 * hl);
    for (int j = 0; j < n - 1; ++j) {
        VectorXd mp = (mu + hw * tan.col(j)).normalized();
        VectorXd mm = (mu - hw * tan.col(j)).normalized();
        dtheta(1 + j) = (lagrangian_angle(surface, lambda, mp).theta -
                         lagrangian_angle(surface, lambda, mm).theta) /
                        (2.0 * hw);
    }
    const VectorXd sharp = cp.metric.ldlt().solve(dtheta);
    MeanCurvatureSample out;
    out.norm = std::sqrt(std::max(0.0, dtheta.dot(sharp)));
    out.H = symplectic::apply_J(cp.jacobian * sharp);
    return out;
}

// ---- zone decomposition and quadrature -------------------------------

namespace {

struct SphereRule {
    std::vector<VectorXd> points;
    std::vector<double> weights;  // sum to 4 pi
};

SphereRule sphere_rule(int level) {
    const TriMesh m = icosphere(level);
    SphereRule rule;
    for (const auto& f : m.faces) {
        const Eigen::Vector3d a = m.vertices[f[0]];
        const Eigen::Vector3d b = m.vertices[f[1]];
        const Eigen::Vector3d c = m.vertices[f[2]];
        Eigen::Vector3d centroid = (a + b + c).normalized();
        // spherical triangle solid angle (Van Oosterom--Strackee)
        const double num = std::abs(a.dot(b.cross(c)));
        const double den = 1.0 + a.dot(b) + b.dot(c) + c.dot(a);
        rule.points.push_back(centroid);
        rule.weights.push_back(2.0 * std::atan2(num, den));
    }
    return rule;
}

// per-mu signed lambda segments making up a region
std::vector<std::pair<double, double>> region_segments(
    const ChartedSurface& s, Region region, const VectorXd& mu) {
    const double delta = s.cfg().delta;
    auto lam = [&](int end, double r) {
        return s.lambda_at_radius(end, r, mu);
    };
    const double h1 = lam(1, 0.5 * delta), d1 = lam(1, delta);
    const double h2 = lam(2, 0.5 * delta), d2 = lam(2, delta);
    const double m1 = s.lambda_max(1), m2 = s.lambda_max(2);
    switch (region) {
        case Region::NeckCore: return {{-h2, h1}};
        case Region::Transition: return {{-d2, -h2}, {h1, d1}};
        case Region::NeckTotal: return {{-d2, d1}};
        case Region::Exterior: return {{-m2, -d2}, {d1, m1}};
        case Region::All: return {{-m2, m1}};
    }
    return {};
}

double region_volume_once(const ChartedSurface& s, Region region,
                          int sphere_level, int radial_panels) {
    const SphereRule rule = sphere_rule(sphere_level);
    double total = 0.0;
    // radial roots are mu-independent in the symmetric model
    std::vector<std::pair<double, double>> segs_cached;
    for (size_t ip = 0; ip < rule.points.size(); ++ip) {
        const VectorXd mu = rule.points[ip];
        if (!s.symmetric() || ip == 0)
            segs_cached = region_segments(s, region, mu);
        const MatrixXd tan = lawlor::sphere_tangent_basis(mu);
        double radial = 0.0;
        for (const auto& [a, b] : segs_cached) {
            const double h = (b - a) / radial_panels;
            for (int p = 0; p < radial_panels; ++p)
                radial += gauss5(
                    [&](double l) {
                        const auto cp = s.point_full(l, mu, tan);
                        return std::sqrt(
                            std::max(0.0, cp.metric.determinant()));
                    },
                    a + p * h, a + (p + 1) * h);
        }
        total += radial * rule.weights[ip];
    }
    return total;
}

} // namespace

VolumeResult volume(const ChartedSurface& surface, Region region,
                    int sphere_level, int radial_panels, double rel_tol) {
    if (surface.n() != 3)
        throw ResolutionInfeasible("zone volumes are meshed for n = 3 only");
    VolumeResult out;
    out.estimate_coarse =
        region_volume_once(surface, region, sphere_level - 1, radial_panels);
    out.estimate_fine =
        region_volume_once(surface, region, sphere_level, 2 * radial_panels);
    out.certificate = std::abs(out.estimate_fine - out.estimate_coarse) / 3.0;
    out.value = out.estimate_fine +
                (out.estimate_fine - out.estimate_coarse) / 3.0;
    if (out.certificate > rel_tol * std::abs(out.value))
        throw QuadratureNonConvergence(
            "volume quadrature certificate " +
            std::to_string(out.certificate / std::abs(out.value)) +
            " above tolerance");
    return out;
}

std::vector<std::pair<double, VectorXd>> zone_samples(
    const ChartedSurface& surface, Region region, int radial_samples,
    int sphere_level) {
    if (surface.n() != 3)
        throw ResolutionInfeasible("zone sampling is built for n = 3 only");
    const TriMesh m = icosphere(sphere_level);
    std::vector<std::pair<double, VectorXd>> out;
    std::vector<std::pair<double, double>> segs_cached;
    for (size_t iv = 0; iv < m.vertices.size(); ++iv) {
        const VectorXd mu = m.vertices[iv];
        if (!surface.symmetric() || iv == 0)
            segs_cached = region_segments(surface, region, mu);
        for (const auto& [a, b] : segs_cached)
            for (int i = 0; i < radial_samples; ++i) {
                const double frac = (i + 0.5) / radial_samples;
                out.emplace_back(a + frac * (b - a), mu);
            }
    }
    return out;
}

ResidualField residual(const ChartedSurface& surface,
                       const gluing::WeightFunction& weight,
                       int radial_samples, int sphere_level) {
    ResidualField out;
    auto run = [&](Region region, std::vector<CalibrationSample>& bucket,
                   double& sup) {
        for (const auto& [l, mu] :
             zone_samples(surface, region, radial_samples, sphere_level)) {
            CalibrationSample c = lagrangian_angle(surface, l, mu);
            sup = std::max(sup, std::abs(c.im_dz));
            out.weighted_sup =
                std::max(out.weighted_sup,
                         std::pow(weight.rho(c.ambient), 2) *
                             std::abs(c.im_dz));
            bucket.push_back(std::move(c));
        }
    };
    run(Region::Transition, out.transition, out.sup_E);
    run(Region::Exterior, out.exterior, out.sup_E_exterior);
    run(Region::NeckCore, out.core, out.sup_E_core);
    return out;
}

} // namespace slaglab::geometry
