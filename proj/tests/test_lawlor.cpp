#include "doctest.h"
#include "oracles.hpp"

#include "slaglab/error.hpp"
#include "slaglab/lawlor.hpp"
#include "slaglab/symplectic.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace slaglab;
using namespace slaglab::lawlor;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using std::numbers::pi;

namespace {

LawlorParams params(std::initializer_list<double> a) {
    VectorXd v(static_cast<int>(a.size()));
    int i = 0;
    for (double x : a) v(i++) = x;
    return LawlorParams::make(v);
}

const LawlorNeck& unit_neck() {
    static LawlorNeck neck(params({1.0, 1.0, 1.0}), 1e-10);
    return neck;
}

const LawlorNeck& skew_neck() {
    static LawlorNeck neck(params({1.0, 2.0, 3.0}), 1e-10);
    return neck;
}

VectorXd unit(double x, double y, double z) {
    VectorXd v(3);
    v << x, y, z;
    v.normalize();
    return v;
}

// value of dz on an orthonormalized tangent frame at (lambda, mu)
std::complex<double> frame_dz(const LawlorNeck& neck, double lambda,
                              const VectorXd& mu) {
    const int n = neck.n();
    MatrixXd cols(2 * n, n);
    auto put = [&](int j, const VectorXcd& z) {
        cols.col(j).head(n) = z.real();
        cols.col(j).tail(n) = z.imag();
    };
    put(0, neck.embed_dlambda(lambda, mu));
    const MatrixXd tan = sphere_tangent_basis(mu);
    for (int j = 0; j < n - 1; ++j) {
        VectorXcd dz = VectorXcd::Zero(n);
        for (int k = 0; k < n; ++k)
            dz += tan(k, j) * neck.embed_dmu(lambda, k);
        put(1 + j, dz);
    }
    Eigen::HouseholderQR<MatrixXd> qr(cols);
    MatrixXd q = MatrixXd(qr.householderQ()).leftCols(n);
    MatrixXcd zf(n, n);
    zf.real() = q.topRows(n);
    zf.imag() = q.bottomRows(n);
    return zf.determinant();
}

} // namespace

TEST_CASE("poly_P matches the closed-form examples") {
    CHECK(poly_P(params({1, 1, 1}), 1.0) == doctest::Approx(7.0).epsilon(1e-14));
    CHECK(poly_P(params({1, 2, 3}), 1.0) == doctest::Approx(23.0).epsilon(1e-14));
    CHECK(poly_P(params({1, 2, 3}), 0.0) == doctest::Approx(6.0).epsilon(1e-14));
}

TEST_CASE("poly_P obeys its analytic lower bound") {
    for (auto p : {params({1, 1, 1}), params({1, 2, 3}), params({0.5, 4, 9})})
        for (double l = 0.0; l < 12.0; l += 0.25)
            CHECK(poly_P(p, l) >= poly_P_lower_bound(p, l) - 1e-12);
}

TEST_CASE("theta vanishes at zero and is odd") {
    const auto& neck = unit_neck();
    for (int k = 0; k < 3; ++k) {
        CHECK(neck.theta(k, 0.0) == 0.0);
        for (double l : {0.3, 1.0, 2.0, 7.5})
            CHECK(neck.theta(k, -l) == doctest::Approx(-neck.theta(k, l))
                                             .epsilon(1e-14));
    }
}

TEST_CASE("theta agrees with a high-resolution Simpson oracle") {
    const auto& neck = unit_neck();
    auto integrand = [&](double s) {
        return -1.0 / ((1.0 + s * s) * std::sqrt(neck.poly_P(s)));
    };
    const double oracle = oracles::simpson(integrand, 0.0, 1.0, 20000);
    CHECK(std::abs(neck.theta(0, 1.0) - oracle) < 1e-10);

    // off the tabulated nodes as well
    const double oracle2 = oracles::simpson(integrand, 0.0, 1.2345678, 20000);
    CHECK(std::abs(neck.theta(1, 1.2345678) - oracle2) < 1e-10);
}

TEST_CASE("theta is monotone decreasing for positive lambda") {
    const auto& neck = skew_neck();
    for (int k = 0; k < 3; ++k) {
        double prev = 0.0;
        for (double l = 0.25; l < 30.0; l *= 1.5) {
            const double cur = neck.theta(k, l);
            CHECK(cur < prev);
            prev = cur;
        }
    }
}

TEST_CASE("theta sum identity: sum_k theta_k = -arctan(lambda sqrt(P))") {
    for (const auto* neck : {&unit_neck(), &skew_neck()}) {
        for (double l : {0.1, 0.77, 2.0, 5.0, 25.0, 120.0, 1e4}) {
            double sum = 0.0;
            for (int k = 0; k < 3; ++k) sum += neck->theta(k, l);
            const double expect = -std::atan(l * std::sqrt(neck->poly_P(l)));
            CHECK(std::abs(sum - expect) < 2e-10);
        }
        CHECK(std::abs(neck->theta_infinity().sum() + 0.5 * pi) < 2e-10);
    }
}

TEST_CASE("theta_infinity: symmetry, scaling gauge, certified tail") {
    const auto& neck = unit_neck();
    const VectorXd ti = neck.theta_infinity();
    CHECK(std::abs(ti(0) - ti(1)) < 1e-11);
    CHECK(std::abs(ti(0) - ti(2)) < 1e-11);

    // theta_k(c a) = theta_k(a)
    const VectorXd t1 = theta_infinity_direct(params({1, 2, 3}), 1e-12);
    const VectorXd t2 = theta_infinity_direct(params({2.7, 5.4, 8.1}), 1e-12);
    CHECK((t1 - t2).cwiseAbs().maxCoeff() < 1e-10);

    // direct evaluation matches the tabulated route
    const VectorXd direct = theta_infinity_direct(params({1, 1, 1}), 1e-12);
    CHECK((direct - ti).cwiseAbs().maxCoeff() < 1e-10);

    // Eq-13 tail bound on sampled lambda >= R0
    for (double l = neck.R0(); l < 200.0; l *= 1.7)
        for (int k = 0; k < 3; ++k)
            CHECK(std::abs(neck.theta(k, l) - ti(k)) <=
                  neck.tail_bound(l) + 1e-12);
}

TEST_CASE("embedding values at lambda = 0") {
    const auto& neck = unit_neck();
    VectorXd p1 = neck.embed(0.0, unit(1, 0, 0));
    VectorXd expect1(6);
    expect1 << 0, 0, 0, 1, 0, 0;
    CHECK((p1 - expect1).cwiseAbs().maxCoeff() < 1e-14);

    VectorXd p2 = neck.embed(0.0, unit(0, 1, 0));
    VectorXd expect2(6);
    expect2 << 0, 1, 0, 0, 0, 0;
    CHECK((p2 - expect2).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("embedding norm bounds of Eq 14") {
    const auto& neck = skew_neck();
    std::mt19937_64 rng(3);
    std::normal_distribution<double> gauss;
    for (int t = 0; t < 50; ++t) {
        VectorXd mu(3);
        for (int k = 0; k < 3; ++k) mu(k) = gauss(rng);
        mu.normalize();
        const double l = neck.R0() * (1.0 + 5.0 * (t % 7));
        const double norm = neck.embed(l, mu).norm();
        if (norm >= neck.R0()) {
            CHECK(norm >= l / std::sqrt(2.0) - 1e-12);
            CHECK(norm <= std::sqrt(2.0) * l + 1e-12);
        }
    }
}

TEST_CASE("analytic embedding derivatives match finite differences") {
    const auto& neck = skew_neck();
    const VectorXd mu = unit(0.3, -0.8, 0.52);
    const double h = 1e-6;
    for (double l : {0.0, 0.4, 1.3, 4.0}) {
        VectorXcd fd = (neck.embed_z(l + h, mu) - neck.embed_z(l - h, mu)) /
                       (2.0 * h);
        CHECK((neck.embed_dlambda(l, mu) - fd).cwiseAbs().maxCoeff() < 1e-8);
        VectorXcd fd2 = (neck.embed_dlambda(l + h, mu) -
                         neck.embed_dlambda(l - h, mu)) /
                        (2.0 * h);
        CHECK((neck.embed_dlambda2(l, mu) - fd2).cwiseAbs().maxCoeff() < 1e-7);
    }
}

TEST_CASE("scaling identity embed(c a, l / sqrt(c)) = embed(a, l) / sqrt(c)") {
    const double c = 2.0;
    LawlorNeck scaled(params({2, 4, 6}), 1e-11);
    const auto& base = skew_neck();
    const VectorXd mu = unit(0.5, 0.7, -0.3);
    for (double l : {0.0, 0.6, 1.9, 6.0}) {
        VectorXd lhs = scaled.embed(l / std::sqrt(c), mu);
        VectorXd rhs = base.embed(l, mu) / std::sqrt(c);
        CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-10);
    }
}

TEST_CASE("omega pullback and special-Lagrangian residual on a grid") {
    const auto& neck = skew_neck();
    std::mt19937_64 rng(11);
    std::normal_distribution<double> gauss;
    double max_omega = 0.0, max_im = 0.0, max_mod = 0.0;
    for (int t = 0; t < 60; ++t) {
        VectorXd mu(3);
        for (int k = 0; k < 3; ++k) mu(k) = gauss(rng);
        mu.normalize();
        const double l = -8.0 + 16.0 * (t / 59.0);
        const int n = 3;
        std::vector<VectorXcd> tangents;
        tangents.push_back(neck.embed_dlambda(l, mu));
        const MatrixXd tan = sphere_tangent_basis(mu);
        for (int j = 0; j < n - 1; ++j) {
            VectorXcd dz = VectorXcd::Zero(n);
            for (int k = 0; k < n; ++k)
                dz += tan(k, j) * neck.embed_dmu(l, k);
            tangents.push_back(dz);
        }
        for (size_t i = 0; i < tangents.size(); ++i)
            for (size_t j = i + 1; j < tangents.size(); ++j) {
                const std::complex<double> h = tangents[i].dot(tangents[j]);
                max_omega = std::max(max_omega, std::abs(h.imag()));
            }
        const std::complex<double> dz = frame_dz(neck, l, mu);
        max_im = std::max(max_im, std::abs(dz.imag()));
        max_mod = std::max(max_mod, std::abs(std::abs(dz) - 1.0));
    }
    CHECK(max_omega < 1e-8);
    CHECK(max_im < 1e-8);
    CHECK(max_mod < 1e-9);
}

TEST_CASE("Eq-32 metric matches the finite-difference Gram") {
    const auto& neck = skew_neck();
    std::mt19937_64 rng(17);
    std::normal_distribution<double> gauss;
    std::uniform_real_distribution<double> unif(-4.0, 4.0);
    const double h = 1e-5;
    for (int t = 0; t < 40; ++t) {
        VectorXd mu(3);
        for (int k = 0; k < 3; ++k) mu(k) = gauss(rng);
        mu.normalize();
        const double l = unif(rng);
        const MatrixXd tan = sphere_tangent_basis(mu);
        const MatrixXd g = neck.induced_metric(l, mu, tan);

        auto chart = [&](double dl, double w1, double w2) {
            VectorXd m = mu + w1 * tan.col(0) + w2 * tan.col(1);
            m.normalize();
            return neck.embed(l + dl, m);
        };
        MatrixXd jac(6, 3);
        jac.col(0) = (chart(h, 0, 0) - chart(-h, 0, 0)) / (2 * h);
        jac.col(1) = (chart(0, h, 0) - chart(0, -h, 0)) / (2 * h);
        jac.col(2) = (chart(0, 0, h) - chart(0, 0, -h)) / (2 * h);
        const MatrixXd fd = jac.transpose() * jac;
        CHECK((g - fd).cwiseAbs().maxCoeff() / g.norm() < 1e-6);
    }
}

TEST_CASE("metric coefficients at the symmetric waist") {
    const auto& neck = unit_neck();
    const VectorXd mu = unit(1, 0, 0);
    const MatrixXd tan = sphere_tangent_basis(mu);
    const MatrixXd g = neck.induced_metric(0.0, mu, tan);
    CHECK(g(0, 0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(g(1, 1) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(g(2, 2) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("asymptotic graph reproduces the end of the neck") {
    const auto& neck = skew_neck();
    const VectorXd phases = neck.end_phases(1);
    std::mt19937_64 rng(5);
    std::normal_distribution<double> gauss;
    for (int t = 0; t < 12; ++t) {
        VectorXd dir(3);
        for (int k = 0; k < 3; ++k) dir(k) = gauss(rng);
        dir.normalize();
        const double rho = neck.R0() * (2.0 + t);
        const VectorXd s = rho * dir;
        auto gp = neck.graph_at(1, s);
        // lift the graph point back to ambient coordinates
        VectorXcd z(3);
        for (int k = 0; k < 3; ++k)
            z(k) = std::polar(1.0, phases(k)) *
                   std::complex<double>(s(k), gp.grad(k));
        const VectorXcd direct = neck.embed_z(gp.lambda, gp.mu);
        CHECK((z - direct).cwiseAbs().maxCoeff() < 1e-9);
    }
}

TEST_CASE("asymptotic decay exponents of Thm 6") {
    const auto& neck = unit_neck();
    const int n = 3;
    std::vector<double> radii;
    for (int i = 0; i < 10; ++i)
        radii.push_back(2.0 * neck.R0() *
                        std::pow(10.0, i / 9.0));  // [2 R0, 20 R0]
    auto graph = asymptotic_graph(neck, 1, radii, 6, 99);

    const int per = 6;
    Eigen::VectorXd lr(10), lg(10), lgr(10), lh(10), lt(10);
    for (int i = 0; i < 10; ++i) {
        double max_g = 0.0, max_grad = 0.0, max_hess = 0.0, max_third = 0.0;
        for (int d = 0; d < per; ++d) {
            const auto& s = graph.samples[i * per + d];
            max_g = std::max(max_g, std::abs(s.g));
            max_grad = std::max(max_grad, s.grad.norm());
            max_hess = std::max(max_hess, s.hess.norm());
            max_third = std::max(max_third, s.third_norm);
        }
        lr(i) = std::log(radii[i]);
        lg(i) = std::log(max_g);
        lgr(i) = std::log(max_grad);
        lh(i) = std::log(max_hess);
        lt(i) = std::log(max_third);
    }
    CHECK(std::abs(oracles::fit_slope(lr, lgr) + (n - 1)) < 0.1);
    CHECK(std::abs(oracles::fit_slope(lr, lg) + (n - 2)) < 0.1);
    CHECK(std::abs(oracles::fit_slope(lr, lh) + n) < 0.15);
    CHECK(oracles::fit_slope(lr, lt) < -(n + 1) + 0.2);
}

TEST_CASE("per-component gradient bound from the Thm 6 proof") {
    const auto& neck = unit_neck();
    const double A = 1.0;
    const int n = 3;
    const double c = (2.0 / n) * std::pow(2.0 / A, n / 2.0);
    std::mt19937_64 rng(31);
    std::normal_distribution<double> gauss;
    for (int t = 0; t < 30; ++t) {
        VectorXd dir(3);
        for (int k = 0; k < 3; ++k) dir(k) = gauss(rng);
        dir.normalize();
        const double rho = neck.R0() * (1.0 + 0.7 * t);
        auto gp = neck.graph_at(1, rho * dir, false);
        for (int k = 0; k < 3; ++k)
            CHECK(std::abs(gp.grad(k)) <= c / std::pow(rho, n - 1) + 1e-12);
    }
}

TEST_CASE("Hoelder coefficient of the third derivative decays") {
    const auto& neck = unit_neck();
    const double beta = 0.1;
    const int n = 3;
    Eigen::VectorXd lr(6), lq(6);
    const VectorXd dir = unit(0.2, 0.5, 0.9);
    const VectorXd dir2 = unit(0.9, -0.1, 0.5);
    for (int i = 0; i < 6; ++i) {
        const double rho = 2.0 * neck.R0() * std::pow(8.0, i / 5.0);
        const VectorXd s1 = rho * dir;
        const VectorXd s2 = rho * (dir + 0.1 * (dir2 - dir)).normalized();
        auto t1 = neck.graph_third(1, s1);
        auto t2 = neck.graph_third(1, s2);
        double diff = 0.0;
        for (int j = 0; j < n; ++j)
            diff = std::max(diff, (t1[j] - t2[j]).cwiseAbs().maxCoeff());
        const double d = (s1 - s2).norm();
        lr(i) = std::log(rho);
        lq(i) = std::log(diff / std::pow(d, beta));
    }
    CHECK(oracles::fit_slope(lr, lq) <= -(n + 1 + beta) + 0.2);
}

TEST_CASE("graph below R0 is rejected") {
    const auto& neck = unit_neck();
    CHECK_THROWS_AS(neck.graph_at(1, 0.5 * neck.R0() * unit(1, 0, 0)),
                    RadiusTooSmall);
    CHECK_THROWS_AS(asymptotic_graph(neck, 1, {0.9 * neck.R0()}, 2, 1),
                    RadiusTooSmall);
}

TEST_CASE("asymptotic planes satisfy the angle criterion (sum = pi)") {
    for (const auto* neck : {&unit_neck(), &skew_neck()}) {
        // planes extracted from the embedding Jacobian at |lambda| = 1e6,
        // through the certified tail evaluation of theta
        auto plus = neck->asymptotic_plane_from_jacobian(1, 1e6);
        auto minus = neck->asymptotic_plane_from_jacobian(2, 1e6);
        auto pair = symplectic::characteristic_angles(plus, minus);
        auto crit = symplectic::angle_criterion(pair, 1e-6);
        CHECK(crit.satisfies_criterion);
        CHECK(std::abs(std::min(crit.sum, 3 * pi - crit.sum) - pi) < 1e-6);

        // and they coincide with the exact phase construction
        for (int end : {1, 2}) {
            auto exact = neck->asymptotic_plane(end);
            auto sampled = neck->asymptotic_plane_from_jacobian(end, 1e6);
            MatrixXd pd = exact.basis * exact.basis.transpose() -
                          sampled.basis * sampled.basis.transpose();
            CHECK(pd.cwiseAbs().maxCoeff() < 1e-9);
        }
    }
    // symmetric neck: all pair angles equal
    auto pair = symplectic::characteristic_angles(
        unit_neck().asymptotic_plane(1), unit_neck().asymptotic_plane(2));
    CHECK(std::abs(pair.angles(0) - pair.angles(2)) < 1e-9);
}

TEST_CASE("match_angles round trip recovers a = (1, 2, 3)") {
    const auto& neck = skew_neck();
    const VectorXd targets = -2.0 * neck.theta_infinity();
    auto recovered = match_angles(targets, 1e-8);
    VectorXd expect(3);
    expect << 1, 2, 3;
    CHECK((recovered.a - expect).cwiseAbs().maxCoeff() < 1e-5);
}

TEST_CASE("match_angles on symmetric targets returns equal parameters") {
    VectorXd targets(3);
    targets << pi / 3, pi / 3, pi / 3;
    auto p = match_angles(targets, 1e-8);
    CHECK(std::abs(p.a(0) - 1.0) < 1e-8);
    CHECK(std::abs(p.a(1) - 1.0) < 1e-8);
    CHECK(std::abs(p.a(2) - 1.0) < 1e-8);
}

TEST_CASE("match_angles rejects infeasible targets") {
    VectorXd bad1(3);
    bad1 << 0.5, 0.5, 0.5;  // sum far from pi
    CHECK_THROWS_AS(match_angles(bad1, 1e-8), InfeasibleTargets);
    VectorXd bad2(3);
    bad2 << -0.1, pi / 2, pi / 2 + 0.1;
    CHECK_THROWS_AS(match_angles(bad2, 1e-8), InfeasibleTargets);
}

TEST_CASE("neck JSON cache carries the tabulation") {
    auto j = neck_to_json(unit_neck());
    CHECK(j["version"] == 1);
    CHECK(j["n"] == 3);
    CHECK(j["grid"].size() == j["theta"].size());
    CHECK(std::abs(j["theta_inf"][0].get<double>() -
                   unit_neck().theta_infinity()(0)) < 1e-15);
}
