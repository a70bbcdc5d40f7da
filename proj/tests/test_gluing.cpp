#include "doctest.h"
#include "oracles.hpp"

#include "slaglab/config.hpp"
#include "slaglab/error.hpp"
#include "slaglab/gluing.hpp"

#include <cmath>
#include <random>

using namespace slaglab;
using namespace slaglab::gluing;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

const ModelContext& model(double alpha) {
    static std::map<double, ModelContext> cache;
    auto it = cache.find(alpha);
    if (it == cache.end())
        it = cache.emplace(alpha, build_model(RunConfig{}, alpha)).first;
    return it->second;
}

VectorXd unit(double x, double y, double z) {
    VectorXd v(3);
    v << x, y, z;
    v.normalize();
    return v;
}

double omega_pair(const VectorXd& u, const VectorXd& v) {
    const int n = static_cast<int>(u.size()) / 2;
    return u.head(n).dot(v.tail(n)) - u.tail(n).dot(v.head(n));
}

} // namespace

TEST_CASE("select_parameters fixes delta = alpha / K and the maximal eps") {
    auto cfg = select_parameters(0.1, 1.0, 2.0, std::sqrt(2.0), 3);
    CHECK(cfg.delta == doctest::Approx(0.1).epsilon(1e-15));
    const double expect_eps =
        std::pow(0.1, 4.0 / 3.0) / (2.0 * std::pow(2.0, 1.0 / 3.0));
    CHECK(cfg.epsilon == doctest::Approx(expect_eps).epsilon(1e-12));
    CHECK(cfg.epsilon * cfg.R0 <= 0.5 * cfg.delta);
    CHECK_NOTHROW(cfg.validate());
}

TEST_CASE("alpha outside its admissible window is rejected") {
    CHECK_THROWS_AS(select_parameters(0.5, 1.0, 2.0, std::sqrt(2.0), 3),
                    AlphaTooLarge);
    CHECK_THROWS_AS(select_parameters(5e-4, 1.0, 2.0, std::sqrt(2.0), 3),
                    ParameterInconsistency);
}

TEST_CASE("cutoff plateaus and scale-invariant profile constants") {
    std::vector<std::array<double, 3>> sups;
    for (double delta : {0.01, 0.02, 0.05, 0.1, 0.2}) {
        Cutoff eta{delta};
        CHECK(eta.value(0.25 * delta) == 1.0);
        CHECK(eta.value(2.0 * delta) == 0.0);
        double sup1 = 0.0, sup2 = 0.0, sup3 = 0.0;
        for (int i = 0; i <= 2000; ++i) {
            const double r = delta * (0.4 + 0.7 * i / 2000.0);
            const auto d = eta.radial(r);
            sup1 = std::max(sup1, delta * std::abs(d[1]));
            sup2 = std::max(sup2, delta * delta * std::abs(d[2]));
            sup3 = std::max(sup3, delta * delta * delta * std::abs(d[3]));
        }
        // S'(1/2) = 1 / (2 t^2) = 2 is the profile's peak slope
        CHECK(sup1 == doctest::Approx(4.0).epsilon(1e-6));
        CHECK(1.0 + sup1 + sup2 + sup3 < 2000.0);  // Eq-24 constant finite
        sups.push_back({sup1, sup2, sup3});
    }
    // the sampled profile constants are delta-independent
    for (size_t i = 1; i < sups.size(); ++i)
        for (int j = 0; j < 3; ++j)
            CHECK(sups[i][j] == doctest::Approx(sups[0][j]).epsilon(1e-9));
}

TEST_CASE("cutoff derivatives match finite differences") {
    Cutoff eta{0.08};
    const double h = 1e-6;
    for (double r = 0.041; r < 0.08; r += 0.0017) {
        const auto d = eta.radial(r);
        const double fd1 = (eta.value(r + h) - eta.value(r - h)) / (2 * h);
        const double fd2 = (eta.radial(r + h)[1] - eta.radial(r - h)[1]) /
                           (2 * h);
        const double fd3 = (eta.radial(r + h)[2] - eta.radial(r - h)[2]) /
                           (2 * h);
        CHECK(std::abs(d[1] - fd1) < 1e-5 * (1.0 + std::abs(d[1])));
        CHECK(std::abs(d[2] - fd2) < 1e-3 * (1.0 + std::abs(d[2])));
        CHECK(std::abs(d[3] - fd3) < 1e-1 * (1.0 + std::abs(d[3])));
    }
}

TEST_CASE("polynomial graphs reject low-degree terms") {
    Polynomial p;
    p.n = 3;
    Polynomial::Term t;
    t.powers.resize(3);
    t.powers << 1, 1, 0;  // degree 2
    t.coeff = 1.0;
    p.terms.push_back(t);
    CHECK_THROWS_AS(p.validate(), ParseError);
}

TEST_CASE("surface is bit-consistent with the neck inside the core") {
    const auto& ctx = model(0.1);
    const auto& s = *ctx.surface;
    const double delta = ctx.glue.delta;
    std::mt19937_64 rng(4);
    std::normal_distribution<double> gauss;
    for (int t = 0; t < 25; ++t) {
        VectorXd mu(3);
        for (int k = 0; k < 3; ++k) mu(k) = gauss(rng);
        mu.normalize();
        // a lambda well inside the core zone
        const double lcore = s.lambda_at_radius(1, 0.45 * delta, mu);
        const double l = lcore * (2.0 * (t / 24.0) - 1.0);
        const VectorXd p = s.point(l, mu);
        const VectorXd q = ctx.glue.epsilon * ctx.neck->embed(l, mu);
        CHECK((p - q).cwiseAbs().maxCoeff() < 1e-15);
    }
}

TEST_CASE("surface equals the exterior graph exactly outside the ball") {
    const auto& ctx = model(0.1);
    const auto& s = *ctx.surface;
    const double delta = ctx.glue.delta;
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss;
    for (int t = 0; t < 25; ++t) {
        VectorXd mu(3);
        for (int k = 0; k < 3; ++k) mu(k) = gauss(rng);
        mu.normalize();
        for (int end : {1, 2}) {
            const double r = delta * (1.0 + t * 0.3);
            if (r > 0.9) continue;
            const double l = s.lambda_at_radius(end, r, mu);
            const VectorXd p = s.point(end == 1 ? l : -l, mu);
            // flat exteriors: the y-part vanishes identically
            VectorXd x(3);
            const auto phases = ctx.neck->end_phases(end);
            for (int k = 0; k < 3; ++k) {
                const double c = std::cos(phases(k)), sn = std::sin(phases(k));
                x(k) = c * p(k) + sn * p(3 + k);
                const double y = -sn * p(k) + c * p(3 + k);
                CHECK(std::abs(y) < 1e-15);
            }
            CHECK((p - s.exterior_point(end, x)).cwiseAbs().maxCoeff() <
                  1e-15);
        }
    }
}

TEST_CASE("transition graph function is exactly eta * g_eps for flat pieces") {
    const auto& ctx = model(0.1);
    const auto& s = *ctx.surface;
    const double delta = ctx.glue.delta;
    for (double frac : {0.55, 0.66, 0.8, 0.93}) {
        const VectorXd x = frac * delta * unit(0.3, -0.7, 0.64);
        for (int end : {1, 2}) {
            const auto u = s.graph_data(end, x);
            const auto g = s.g_eps(end, x);
            const double eta = s.cutoff().value(x.norm());
            CHECK(u.u == doctest::Approx(eta * g.u).epsilon(1e-12));
        }
    }
}

TEST_CASE("chart overlap: cylinder vs transition graph chart") {
    const auto& ctx = model(0.1);
    const auto& s = *ctx.surface;
    const double delta = ctx.glue.delta;
    std::mt19937_64 rng(6);
    std::normal_distribution<double> gauss;
    for (int t = 0; t < 30; ++t) {
        VectorXd mu(3);
        for (int k = 0; k < 3; ++k) mu(k) = gauss(rng);
        mu.normalize();
        const int end = 1 + (t % 2);
        const double r = delta * (0.5 + 0.5 * (t / 30.0) + 0.01);
        const double l = s.lambda_at_radius(end, r, mu);
        const VectorXd p = s.point(end == 1 ? l : -l, mu);
        // reparametrize through the base point of the graph chart
        const auto es_radius = s.s_radius(end, l, mu);
        CHECK(es_radius == doctest::Approx(r).epsilon(1e-12));
        VectorXd x(3);
        const auto phases = ctx.neck->end_phases(end);
        for (int k = 0; k < 3; ++k)
            x(k) = std::cos(phases(k)) * p(k) +
                   std::sin(phases(k)) * p(3 + k);
        const VectorXd q = s.graph_point(end, x);
        CHECK((p - q).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("chart overlap: transition graph vs scaled neck inversion") {
    const auto& ctx = model(0.1);
    const auto& s = *ctx.surface;
    const double eps = ctx.glue.epsilon;
    const double delta = ctx.glue.delta;
    // band where eta == 1 but the graph chart is still defined
    for (double frac : {0.3, 0.4, 0.48}) {
        const double r = frac * delta;
        if (r < eps * ctx.neck->R0() * 1.05) continue;
        for (int end : {1, 2}) {
            const VectorXd x = r * unit(0.2, 0.9, -0.4);
            const VectorXd p = s.graph_point(end, x);
            auto gp = ctx.neck->graph_at(end, x / eps);
            const VectorXd q =
                eps * ctx.neck->embed(end == 1 ? gp.lambda : -gp.lambda,
                                      gp.mu);
            CHECK((p - q).cwiseAbs().maxCoeff() < 1e-9);
        }
    }
}

TEST_CASE("chart overlap: exterior chart vs transition chart past delta") {
    const auto& ctx = model(0.1);
    const auto& s = *ctx.surface;
    const double delta = ctx.glue.delta;
    for (double frac : {1.0, 1.05, 1.2}) {
        for (int end : {1, 2}) {
            const VectorXd x = frac * delta * unit(-0.5, 0.6, 0.62);
            CHECK((s.graph_point(end, x) - s.exterior_point(end, x))
                      .cwiseAbs()
                      .maxCoeff() < 1e-12);
        }
    }
}

TEST_CASE("cylinder jacobian matches finite differences of the chart") {
    const auto& ctx = model(0.1);
    const auto& s = *ctx.surface;
    std::mt19937_64 rng(7);
    std::normal_distribution<double> gauss;
    const double h = 1e-6;
    for (int t = 0; t < 20; ++t) {
        VectorXd mu(3);
        for (int k = 0; k < 3; ++k) mu(k) = gauss(rng);
        mu.normalize();
        // cover core, transition and exterior zones on both ends
        const double lmax = s.lambda_max(1);
        const double l = -lmax + 2.0 * lmax * (t / 19.0);
        const MatrixXd tan = lawlor::sphere_tangent_basis(mu);
        const auto cp = s.point_full(l, mu, tan);
        auto chart = [&](double dl, double w1, double w2) {
            VectorXd m = mu + w1 * tan.col(0) + w2 * tan.col(1);
            m.normalize();
            return s.point(l + dl, m);
        };
        MatrixXd fd(6, 3);
        fd.col(0) = (chart(h, 0, 0) - chart(-h, 0, 0)) / (2 * h);
        fd.col(1) = (chart(0, h, 0) - chart(0, -h, 0)) / (2 * h);
        fd.col(2) = (chart(0, 0, h) - chart(0, 0, -h)) / (2 * h);
        const double scale = cp.jacobian.cwiseAbs().maxCoeff();
        CHECK((cp.jacobian - fd).cwiseAbs().maxCoeff() < 1e-6 * scale + 1e-9);
    }
}

TEST_CASE("omega pullback vanishes on every chart") {
    const auto& ctx = model(0.1);
    const auto& s = *ctx.surface;
    std::mt19937_64 rng(8);
    std::normal_distribution<double> gauss;
    double worst = 0.0;
    for (int t = 0; t < 60; ++t) {
        VectorXd mu(3);
        for (int k = 0; k < 3; ++k) mu(k) = gauss(rng);
        mu.normalize();
        const double lmax = s.lambda_max(1);
        const double l = -lmax + 2.0 * lmax * (t / 59.0);
        const MatrixXd tan = lawlor::sphere_tangent_basis(mu);
        const auto cp = s.point_full(l, mu, tan);
        for (int i = 0; i < 3; ++i)
            for (int j = i + 1; j < 3; ++j) {
                const double w =
                    omega_pair(cp.jacobian.col(i), cp.jacobian.col(j));
                worst = std::max(worst, std::abs(w) /
                                            (cp.jacobian.col(i).norm() *
                                             cp.jacobian.col(j).norm()));
            }
    }
    CHECK(worst < 1e-8);
}

TEST_CASE("graph displacement sup |eta (g_eps - f)| scales like alpha^3") {
    Eigen::VectorXd la(3), ld(3);
    int i = 0;
    for (double alpha : {0.2, 0.1, 0.05}) {
        const auto& ctx = model(alpha);
        const auto& s = *ctx.surface;
        const double delta = ctx.glue.delta;
        double sup = 0.0;
        std::mt19937_64 rng(9);
        std::normal_distribution<double> gauss;
        for (int t = 0; t < 60; ++t) {
            VectorXd dir(3);
            for (int k = 0; k < 3; ++k) dir(k) = gauss(rng);
            dir.normalize();
            const double r = delta * (0.5 + 0.5 * (t % 10) / 10.0 + 0.01);
            const VectorXd x = r * dir;
            const double eta = s.cutoff().value(r);
            for (int end : {1, 2})
                sup = std::max(sup, std::abs(eta * s.g_eps(end, x).u));
        }
        la(i) = std::log(alpha);
        ld(i) = std::log(sup);
        ++i;
    }
    CHECK(oracles::fit_slope(la, ld) >= 2.7);
}

TEST_CASE("Lemma-13 metric bounds hold on transition samples") {
    const auto& ctx = model(0.1);
    const auto& s = *ctx.surface;
    const double delta = ctx.glue.delta;
    std::mt19937_64 rng(10);
    std::normal_distribution<double> gauss;
    for (int t = 0; t < 40; ++t) {
        VectorXd dir(3);
        for (int k = 0; k < 3; ++k) dir(k) = gauss(rng);
        dir.normalize();
        const double r = delta * (0.5 + 0.5 * (t / 40.0));
        const int end = 1 + (t % 2);
        const auto gd = s.graph_data(end, r * dir);
        const MatrixXd g =
            MatrixXd::Identity(3, 3) + gd.hess * gd.hess;
        CHECK((g - MatrixXd::Identity(3, 3)).norm() <= 1.0);
        const double det = g.determinant();
        CHECK(det >= 0.5);
        CHECK(det <= 2.0);
    }
}

TEST_CASE("Cor-10 pointwise bounds on the gluing annulus") {
    const auto& ctx = model(0.1);
    const auto& s = *ctx.surface;
    const double alpha = ctx.glue.alpha;
    const double K = ctx.glue.K;
    const double delta = ctx.glue.delta;
    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss;
    for (int t = 0; t < 60; ++t) {
        VectorXd dir(3);
        for (int k = 0; k < 3; ++k) dir(k) = gauss(rng);
        dir.normalize();
        const double r = delta * (0.5 + 0.5 * (t / 60.0));
        const int end = 1 + (t % 2);
        const auto g = s.g_eps(end, r * dir, /*with_third=*/true);
        CHECK(g.grad.norm() <= alpha * alpha / (2.0 * K) + 1e-12);
        CHECK(std::abs(g.u) <= std::pow(alpha, 3) / (4.0 * K * K) + 1e-14);
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(g.hess);
        CHECK(es.eigenvalues().cwiseAbs().maxCoeff() <= alpha + 1e-12);
        double third = 0.0;
        for (const auto& slice : g.third)
            third = std::max(third, slice.norm());
        CHECK(third <= 2.0 * K + 1e-9);
    }
}

TEST_CASE("Prop-8 rescaling identity holds to 1e-12") {
    const auto& ctx = model(0.1);
    const auto& s = *ctx.surface;
    const double eps = ctx.glue.epsilon;
    for (double frac : {0.6, 0.8, 0.95}) {
        const VectorXd x = frac * ctx.glue.delta * unit(0.1, 0.8, 0.58);
        const auto g = s.g_eps(1, x);
        const double direct =
            eps * eps * ctx.neck->graph_at(1, x / eps).g;
        CHECK(std::abs(g.u - direct) < 1e-12);
    }
}

TEST_CASE("g via inversion agrees with g along the coordinate line") {
    const auto& ctx = model(0.1);
    const double eps = ctx.glue.epsilon;
    const VectorXd x = 0.7 * ctx.glue.delta * unit(0.4, -0.5, 0.77);
    auto gp = ctx.neck->graph_at(1, x / eps);
    const double via_line =
        ctx.neck->g_at_parameter(1, gp.lambda, gp.mu);
    CHECK(std::abs(gp.g - via_line) < 1e-12);
}

TEST_CASE("Eq-22 Hessian bounds on sampled annulus points") {
    const auto& ctx = model(0.1);
    const auto& s = *ctx.surface;
    const double alpha = ctx.glue.alpha;
    const double delta = ctx.glue.delta;
    std::mt19937_64 rng(2026);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> radial(0.5 * delta, delta);
    for (int t = 0; t < 1500; ++t) {
        VectorXd dir(3);
        for (int k = 0; k < 3; ++k) dir(k) = gauss(rng);
        dir.normalize();
        const VectorXd x = radial(rng) * dir;
        const int end = 1 + (t % 2);
        Eigen::SelfAdjointEigenSolver<MatrixXd> es(s.g_eps(end, x).hess);
        CHECK(es.eigenvalues().cwiseAbs().maxCoeff() <= alpha + 1e-12);
        // flat pieces: the f Hessian is identically zero
        CHECK(s.exterior(end).f.empty());
    }
}

TEST_CASE("plane mismatch and inconsistent configs are rejected") {
    const auto& ctx = model(0.1);
    auto wrong_plane = ctx.neck->asymptotic_plane(1);
    ExteriorPiece e1{wrong_plane, {}, 1.0};
    ExteriorPiece e2{wrong_plane, {}, 1.0};  // same plane twice
    e1.f.n = e2.f.n = 3;
    CHECK_THROWS_AS(
        build_surface(e1, e2, ctx.neck, ctx.glue), PlaneMismatch);

    auto bad = ctx.glue;
    bad.delta *= 2.0;
    ExteriorPiece c1{ctx.neck->asymptotic_plane(1), {}, 1.0};
    ExteriorPiece c2{ctx.neck->asymptotic_plane(2), {}, 1.0};
    c1.f.n = c2.f.n = 3;
    CHECK_THROWS_AS(build_surface(c1, c2, ctx.neck, bad),
                    ParameterInconsistency);
}

TEST_CASE("weight plateaus, gradient bound and lower linear bound") {
    for (double alpha : {0.2, 0.1, 0.05}) {
        const auto& ctx = model(alpha);
        const auto& w = ctx.weight;
        const double eps = ctx.glue.epsilon;
        CHECK(w.rho_of_r(0.5 * w.inner_radius()) ==
              doctest::Approx(w.R * eps).epsilon(1e-15));
        CHECK(w.rho_of_r(1.5 * w.outer_radius()) ==
              doctest::Approx(w.R).epsilon(1e-15));
        // Property 1: |rho'| <= K eps^{-beta}
        double sup = 0.0;
        double min_ratio = 1e300;
        for (int i = 1; i < 600; ++i) {
            const double r = w.inner_radius() *
                             std::pow(w.outer_radius() / w.inner_radius(),
                                      i / 600.0);
            sup = std::max(sup, std::abs(w.drho_dr(r)));
            min_ratio = std::min(min_ratio, w.rho_of_r(r) / r);
            // monotone increasing (up to roundoff at the plateau joints)
            CHECK(w.drho_dr(r) >= -1e-12 * std::pow(eps, -w.beta));
        }
        CHECK(sup <= 10.0 * std::pow(eps, -w.beta));
        // Property 2: rho >= C |x| on the interpolation annulus
        CHECK(min_ratio >= 0.1 * w.R / w.a_inner);
    }
}

TEST_CASE("surface JSON description round-trips the config") {
    const auto& ctx = model(0.1);
    auto j = ctx.surface->to_json();
    CHECK(j["version"] == 1);
    CHECK(j["config"]["alpha"] == doctest::Approx(0.1));
    CHECK(j["neck"]["a"].size() == 3);
    CHECK(j["exterior1"]["f"].size() == 0);
}

TEST_CASE("perturbed-polynomial exterior keeps Prop-7 bounds") {
    RunConfig cfg;
    Polynomial::Term t;
    t.powers.resize(3);
    t.powers << 3, 0, 0;
    t.coeff = 0.05;
    cfg.f1.n = 3;
    cfg.f1.terms.push_back(t);
    auto ctx = build_model(cfg, 0.1);
    const double K = ctx.glue.K;
    CHECK(K >= 1.0);
    const double delta = ctx.glue.delta;
    // Prop-7 norm chain at sampled annulus points
    for (double frac : {0.5, 0.7, 0.9, 1.0}) {
        const VectorXd x = frac * delta * unit(1, 0, 0);
        const auto& f = ctx.surface->exterior(1).f;
        double third = 0.0;
        for (const auto& slice : f.third(x)) third = std::max(third, slice.norm());
        const double lhs = std::abs(f.value(x)) + delta * f.grad(x).norm() +
                           delta * delta * f.hess(x).norm() +
                           delta * delta * delta * third;
        CHECK(lhs <= K * std::pow(delta, 3) * (1.0 + 1e-9));
    }
    // Eq-18: value, gradient and Hessian vanish at the origin
    CHECK(ctx.surface->exterior(1).f.value(VectorXd::Zero(3)) == 0.0);
    CHECK(ctx.surface->exterior(1).f.grad(VectorXd::Zero(3)).norm() == 0.0);
    CHECK(ctx.surface->exterior(1).f.hess(VectorXd::Zero(3)).norm() == 0.0);
}
