#include "slaglab/lawlor.hpp"
#include "slaglab/error.hpp"
#include "slaglab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

namespace slaglab::lawlor {

using Eigen::MatrixXd;
using Eigen::VectorXcd;
using Eigen::VectorXd;
using std::numbers::pi;

namespace {

VectorXd elementary_symmetric(const VectorXd& a) {
    const int n = static_cast<int>(a.size());
    VectorXd e = VectorXd::Zero(n + 1);
    e(0) = 1.0;
    for (int k = 0; k < n; ++k)
        for (int j = std::min(k + 1, n); j >= 1; --j)
            e(j) += a(k) * e(j - 1);
    return e.tail(n);  // e_1..e_n
}

double eval_P(const VectorXd& esym, double lambda) {
    const double u = lambda * lambda;
    double acc = 0.0;
    for (int j = static_cast<int>(esym.size()) - 1; j >= 0; --j)
        acc = acc * u + esym(j);
    return acc;
}

double eval_P_prime(const VectorXd& esym, double lambda) {
    const double u = lambda * lambda;
    double acc = 0.0;
    for (int j = static_cast<int>(esym.size()) - 1; j >= 1; --j)
        acc = acc * u + esym(j) * 2.0 * j;
    return acc * lambda;
}

} // namespace

LawlorParams LawlorParams::make(const VectorXd& a) {
    LawlorParams p;
    p.a = a;
    p.n = static_cast<int>(a.size());
    p.validate();
    return p;
}

void LawlorParams::validate() const {
    if (n < 3) throw DimensionMismatch("Lawlor necks need dimension n >= 3");
    for (int k = 0; k < n; ++k)
        if (!(a(k) > 0.0))
            throw InfeasibleTargets("Lawlor parameters must be positive");
}

double poly_P(const LawlorParams& p, double lambda) {
    return eval_P(elementary_symmetric(p.a), lambda);
}

double poly_P_lower_bound(const LawlorParams& p, double lambda) {
    const double A = p.A();
    return std::min(std::pow(A, p.n) * std::pow(lambda, 2 * p.n - 2),
                    p.n * A);
}

// ---------------------------------------------------------------------------

LawlorNeck::LawlorNeck(const LawlorParams& params, double quad_tol)
    : params_(params), quad_tol_(quad_tol) {
    params_.validate();
    if (!(quad_tol > 0.0)) throw QuadratureNonConvergence("quad_tol must be > 0");
    esym_ = elementary_symmetric(params_.a);

    // graded tabulation grid, dense where the integrand varies fastest
    const double scale = 1.0 / std::sqrt(params_.A());
    struct Seg { double upto, step; };
    const Seg segs[] = {{2.0 * scale, 0.01 * scale},
                        {6.0 * scale, 0.04 * scale},
                        {20.0 * scale, 0.2 * scale},
                        {std::max(60.0, 40.0 * scale), 1.0 * scale}};
    grid_.push_back(0.0);
    for (const auto& seg : segs)
        while (grid_.back() < seg.upto - 1e-12)
            grid_.push_back(std::min(grid_.back() + seg.step, seg.upto));

    const int nn = params_.n;
    const double inc_tol = 0.25 * quad_tol_ / static_cast<double>(grid_.size());
    tab_.resize(grid_.size(), VectorXd::Zero(nn));
    for (size_t i = 1; i < grid_.size(); ++i) {
        tab_[i] = tab_[i - 1];
        for (int k = 0; k < nn; ++k)
            tab_[i](k) += integrate([&](double s) { return integrand(k, s); },
                                    grid_[i - 1], grid_[i], inc_tol);
    }

    theta_inf_.resize(nn);
    for (int k = 0; k < nn; ++k)
        theta_inf_(k) = tab_.back()(k) - tail_integral(k, grid_.back());

    // certified-tail invariant: the remaining integral obeys the Eq-13 bound
    for (int k = 0; k < nn; ++k) {
        const double tail = std::abs(theta_inf_(k) - tab_.back()(k));
        if (tail > tail_bound(grid_.back()) + quad_tol_)
            throw QuadratureNonConvergence("tabulated tail exceeds its bound");
    }

    // fitted Thm-6 constant: the max of |g| rho^{n-2}, |grad g| rho^{n-1},
    // |Hess g| rho^n and |grad^3 g| rho^{n+1} over a deterministic sample
    // set, padded by 2% against sampling resolution
    const double r0 = R0();
    double c0 = 0.0;
    for (int i = 0; i < 40; ++i) {
        const double rho = 1.2 * r0 * std::pow(80.0 / 1.2, i / 39.0);
        for (int d = 0; d <= nn; ++d) {
            VectorXd dir = VectorXd::Zero(nn);
            if (d < nn) dir(d) = 1.0;
            else dir.setOnes();
            dir.normalize();
            const VectorXd s = rho * dir;
            auto gp = graph_at(1, s, /*with_g=*/true);
            c0 = std::max(c0, std::abs(gp.g) * std::pow(rho, nn - 2));
            c0 = std::max(c0, gp.grad.norm() * std::pow(rho, nn - 1));
            c0 = std::max(c0,
                          gp.hess.cwiseAbs().rowwise().sum().maxCoeff() *
                              std::pow(rho, nn));
            for (const auto& slice : graph_third(1, s))
                c0 = std::max(c0, slice.norm() * std::pow(rho, nn + 1));
        }
    }
    C0_ = 1.02 * c0;
}

double LawlorNeck::R0() const { return std::sqrt(2.0 / params_.A()); }

double LawlorNeck::poly_P_prime(double lambda) const {
    return eval_P_prime(esym_, lambda);
}

double LawlorNeck::integrand(int k, double s) const {
    const double rk2 = 1.0 / params_.a(k) + s * s;
    return -1.0 / (rk2 * std::sqrt(eval_P(esym_, s)));
}

double LawlorNeck::tail_integral(int k, double lambda) const {
    // int_lambda^inf ds / ((1/a_k + s^2) sqrt(P(s))) via s = 1/u:
    // integrand u^{n-1} / ((1 + u^2/a_k) sqrt(Pt(u))) with
    // Pt(u) = e_n + e_{n-1} u^2 + ... + e_1 u^{2(n-1)}.
    const int nn = params_.n;
    const double ak = params_.a(k);
    auto f = [&](double u) {
        double pt = 0.0;
        for (int j = 0; j < nn; ++j) pt = pt * (u * u) + esym_(j);
        return std::pow(u, nn - 1) / ((1.0 + u * u / ak) * std::sqrt(pt));
    };
    return integrate(f, 0.0, 1.0 / lambda, std::min(1e-14, 0.25 * quad_tol_));
}

double LawlorNeck::tail_bound(double lambda) const {
    const int nn = params_.n;
    return 1.0 / (nn * std::pow(std::sqrt(params_.A()), nn)) /
           std::pow(lambda, nn);
}

double LawlorNeck::theta(int k, double lambda) const {
    const double l = std::abs(lambda);
    const double sign = lambda < 0 ? -1.0 : 1.0;
    if (l == 0.0) return 0.0;
    double value;
    if (l <= grid_.back()) {
        const auto it = std::upper_bound(grid_.begin(), grid_.end(), l);
        const size_t i = static_cast<size_t>(it - grid_.begin()) - 1;
        value = tab_[i](k) +
                integrate([&](double s) { return integrand(k, s); }, grid_[i],
                          l, std::min(1e-14, 0.1 * quad_tol_));
    } else {
        value = theta_inf_(k) + tail_integral(k, l);
    }
    return sign * value;
}

double LawlorNeck::theta_prime(int k, double lambda) const {
    return integrand(k, lambda);
}

double LawlorNeck::theta_second(int k, double lambda) const {
    const double rk2 = 1.0 / params_.a(k) + lambda * lambda;
    const double P = eval_P(esym_, lambda);
    const double Pp = eval_P_prime(esym_, lambda);
    return (2.0 * lambda * std::sqrt(P) + rk2 * Pp / (2.0 * std::sqrt(P))) /
           (rk2 * rk2 * P);
}

VectorXcd LawlorNeck::embed_z(double lambda, const VectorXd& mu) const {
    const int nn = params_.n;
    VectorXcd z(nn);
    for (int k = 0; k < nn; ++k) {
        const double rk = std::sqrt(1.0 / params_.a(k) + lambda * lambda);
        const double phi = (k == 0 ? 0.5 * pi : 0.0) + theta(k, lambda);
        z(k) = mu(k) * rk * std::polar(1.0, phi);
    }
    return z;
}

VectorXd LawlorNeck::embed(double lambda, const VectorXd& mu) const {
    if (std::abs(mu.squaredNorm() - 1.0) > 1e-9)
        throw DimensionMismatch("mu must be a unit vector");
    const VectorXcd z = embed_z(lambda, mu);
    VectorXd out(2 * params_.n);
    out.head(params_.n) = z.real();
    out.tail(params_.n) = z.imag();
    return out;
}

VectorXcd LawlorNeck::embed_dlambda(double lambda, const VectorXd& mu) const {
    const int nn = params_.n;
    const double sqrtP = std::sqrt(eval_P(esym_, lambda));
    VectorXcd dz(nn);
    for (int k = 0; k < nn; ++k) {
        const double rk = std::sqrt(1.0 / params_.a(k) + lambda * lambda);
        const double phi = (k == 0 ? 0.5 * pi : 0.0) + theta(k, lambda);
        dz(k) = mu(k) * std::polar(1.0, phi) *
                std::complex<double>(lambda, -1.0 / sqrtP) / rk;
    }
    return dz;
}

VectorXcd LawlorNeck::embed_dmu(double lambda, int j) const {
    VectorXcd dz = VectorXcd::Zero(params_.n);
    const double rj = std::sqrt(1.0 / params_.a(j) + lambda * lambda);
    const double phi = (j == 0 ? 0.5 * pi : 0.0) + theta(j, lambda);
    dz(j) = rj * std::polar(1.0, phi);
    return dz;
}

VectorXcd LawlorNeck::embed_dlambda2(double lambda, const VectorXd& mu) const {
    const int nn = params_.n;
    const double P = eval_P(esym_, lambda);
    const double sqrtP = std::sqrt(P);
    const double Pp = eval_P_prime(esym_, lambda);
    VectorXcd out(nn);
    for (int k = 0; k < nn; ++k) {
        const double rk2 = 1.0 / params_.a(k) + lambda * lambda;
        const double rk = std::sqrt(rk2);
        const double phi = (k == 0 ? 0.5 * pi : 0.0) + theta(k, lambda);
        const std::complex<double> i_unit(0.0, 1.0);
        const std::complex<double> num(lambda, -1.0 / sqrtP);
        const double tp = -1.0 / (rk2 * sqrtP);
        const std::complex<double> dnum(1.0, Pp / (2.0 * P * sqrtP));
        out(k) = mu(k) * std::polar(1.0, phi) *
                 (i_unit * tp * num + dnum - num * (lambda / rk2)) / rk;
    }
    return out;
}

MatrixXd LawlorNeck::induced_metric(double lambda, const VectorXd& mu,
                                    const MatrixXd& tangent) const {
    const int nn = params_.n;
    MatrixXd g = MatrixXd::Zero(nn, nn);
    const double P = eval_P(esym_, lambda);
    double coeff = 0.0;
    for (int k = 0; k < nn; ++k)
        coeff += mu(k) * mu(k) / (1.0 / params_.a(k) + lambda * lambda);
    g(0, 0) = coeff * (lambda * lambda + 1.0 / P);
    for (int i = 0; i < nn - 1; ++i)
        for (int j = 0; j < nn - 1; ++j) {
            double acc = 0.0;
            for (int k = 0; k < nn; ++k)
                acc += tangent(k, i) * tangent(k, j) *
                       (1.0 / params_.a(k) + lambda * lambda);
            g(1 + i, 1 + j) = acc;
        }
    return g;
}

VectorXd LawlorNeck::end_phases(int end) const {
    const int nn = params_.n;
    VectorXd phi(nn);
    const double sign = end == 1 ? 1.0 : -1.0;
    for (int k = 0; k < nn; ++k)
        phi(k) = (k == 0 ? 0.5 * pi : 0.0) + sign * theta_inf_(k);
    return phi;
}

symplectic::LagrangianPlane LawlorNeck::asymptotic_plane(int end) const {
    const int nn = params_.n;
    Eigen::MatrixXcd V = Eigen::MatrixXcd::Zero(nn, nn);
    const VectorXd phi = end_phases(end);
    for (int k = 0; k < nn; ++k) V(k, k) = std::polar(1.0, phi(k));
    return symplectic::LagrangianPlane::from_complex(V);
}

symplectic::LagrangianPlane LawlorNeck::asymptotic_plane_from_jacobian(
    int end, double lambda) const {
    const int nn = params_.n;
    const double l = (end == 1 ? 1.0 : -1.0) * std::abs(lambda);
    VectorXd mu = VectorXd::Zero(nn);
    mu(nn - 1) = 1.0;  // any base point works; the tangent plane is the same
    Eigen::MatrixXcd J(nn, nn);
    J.col(0) = embed_dlambda(l, mu);
    for (int j = 0; j < nn - 1; ++j) J.col(1 + j) = embed_dmu(l, j);
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(J);
    Eigen::MatrixXcd Q = qr.householderQ();
    return symplectic::LagrangianPlane::from_complex(Q.leftCols(nn));
}

// ---- end graphs -----------------------------------------------------------

namespace {

// c_k = r_k cos(D_k), q_k = r_k sin(D_k) and their lambda-derivatives,
// with D_k(l) = theta_k(l) - theta_inf_k evaluated at l >= 0.
struct EndCoeffs {
    VectorXd c, q, cp, qp;
};

EndCoeffs end_coeffs(const LawlorNeck& neck, double lambda) {
    const int nn = neck.n();
    EndCoeffs ec{VectorXd(nn), VectorXd(nn), VectorXd(nn), VectorXd(nn)};
    for (int k = 0; k < nn; ++k) {
        const double rk =
            std::sqrt(1.0 / neck.params().a(k) + lambda * lambda);
        const double rp = lambda / rk;
        const double D = neck.theta(k, lambda) - neck.theta_infinity()(k);
        const double Dp = neck.theta_prime(k, lambda);
        ec.c(k) = rk * std::cos(D);
        ec.q(k) = rk * std::sin(D);
        ec.cp(k) = rp * std::cos(D) - rk * std::sin(D) * Dp;
        ec.qp(k) = rp * std::sin(D) + rk * std::cos(D) * Dp;
    }
    return ec;
}

} // namespace

double LawlorNeck::invert_radius(const VectorXd& dir, double radius) const {
    // |s|(l) = (sum_k (dir_k / c_k(l))^2)^{-1/2} is strictly increasing
    auto radius_at = [&](double l) {
        const EndCoeffs ec = end_coeffs(*this, l);
        double acc = 0.0;
        for (int k = 0; k < n(); ++k) {
            const double t = dir(k) / ec.c(k);
            acc += t * t;
        }
        return 1.0 / std::sqrt(acc);
    };
    double lo = 0.0, hi = std::max(2.0 * radius, 2.0 * R0());
    while (radius_at(hi) < radius) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e12) throw NoConvergence("graph inversion bracket failed");
    }
    for (int it = 0; it < 100; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (radius_at(mid) < radius) lo = mid;
        else hi = mid;
        if (hi - lo <= 1e-13 * std::max(1.0, hi)) break;
    }
    return 0.5 * (lo + hi);
}

LawlorNeck::GraphPoint LawlorNeck::graph_at(int end, const VectorXd& s,
                                            bool with_g) const {
    const int nn = params_.n;
    const double rho = s.norm();
    if (rho < R0())
        throw RadiusTooSmall("graph sample radius " + std::to_string(rho) +
                             " below R0 = " + std::to_string(R0()));
    const VectorXd dir = s / rho;
    const double sign = end == 1 ? 1.0 : -1.0;

    GraphPoint out;
    out.lambda = invert_radius(dir, rho);
    const EndCoeffs ec = end_coeffs(*this, out.lambda);
    out.mu.resize(nn);
    for (int k = 0; k < nn; ++k) out.mu(k) = s(k) / ec.c(k);
    out.mu.normalize();

    out.grad.resize(nn);
    for (int k = 0; k < nn; ++k) out.grad(k) = sign * out.mu(k) * ec.q(k);

    out.hess = graph_hess_at_parameter(end, out.lambda, out.mu);

    if (with_g) out.g = sign * g_at_parameter(1, out.lambda, out.mu);
    return out;
}

MatrixXd LawlorNeck::graph_hess_at_parameter(int end, double lambda_abs,
                                             const VectorXd& mu) const {
    const int nn = params_.n;
    const double sign = end == 1 ? 1.0 : -1.0;
    const EndCoeffs ec = end_coeffs(*this, lambda_abs);
    const MatrixXd tan = sphere_tangent_basis(mu);
    MatrixXd Js(nn, nn), Jt(nn, nn);
    for (int k = 0; k < nn; ++k) {
        Js(k, 0) = mu(k) * ec.cp(k);
        Jt(k, 0) = sign * mu(k) * ec.qp(k);
        for (int j = 0; j < nn - 1; ++j) {
            Js(k, 1 + j) = tan(k, j) * ec.c(k);
            Jt(k, 1 + j) = sign * tan(k, j) * ec.q(k);
        }
    }
    const MatrixXd H = Jt * Js.inverse();
    return 0.5 * (H + H.transpose());
}

double LawlorNeck::g_at_parameter(int end, double lambda_abs,
                                  const VectorXd& mu) const {
    // g(s(l, mu)) = -int_l^inf sum_k (mu^k)^2 q_k c'_k dl' along the
    // coordinate line; g -> 0 at infinity by the Eq-17 convention.
    const double sign = end == 1 ? 1.0 : -1.0;
    auto dgdl = [&](double l) {
        const EndCoeffs ec = end_coeffs(*this, l);
        double acc = 0.0;
        for (int k = 0; k < params_.n; ++k)
            acc += mu(k) * mu(k) * ec.q(k) * ec.cp(k);
        return acc;
    };
    const double lm =
        std::max(10.0 / std::sqrt(params_.A()), 2.0 * lambda_abs);
    const double inner = integrate(dgdl, lambda_abs, lm, 0.2 * quad_tol_);
    auto dgdl_inv = [&](double u) { return dgdl(1.0 / u) / (u * u); };
    const double outer = integrate(dgdl_inv, 0.0, 1.0 / lm, 0.2 * quad_tol_);
    return -sign * (inner + outer);
}

std::vector<MatrixXd> LawlorNeck::graph_third(int end,
                                              const VectorXd& s) const {
    const int nn = params_.n;
    const double h = 1e-4 * s.norm();
    std::vector<MatrixXd> out(nn);
    for (int j = 0; j < nn; ++j) {
        VectorXd sp = s, sm = s;
        sp(j) += h;
        sm(j) -= h;
        out[j] =
            (graph_at(end, sp, false).hess - graph_at(end, sm, false).hess) /
            (2.0 * h);
    }
    return out;
}

MatrixXd sphere_tangent_basis(const VectorXd& mu) {
    const int n = static_cast<int>(mu.size());
    int least = 0;
    for (int k = 1; k < n; ++k)
        if (std::abs(mu(k)) < std::abs(mu(least))) least = k;
    MatrixXd tan(n, n - 1);
    int col = 0;
    for (int k = 0; k < n && col < n - 1; ++k) {
        VectorXd cand = VectorXd::Zero(n);
        cand((k + least) % n) = 1.0;
        cand -= cand.dot(mu) * mu;
        for (int j = 0; j < col; ++j) cand -= cand.dot(tan.col(j)) * tan.col(j);
        const double nr = cand.norm();
        if (nr > 1e-8) tan.col(col++) = cand / nr;
    }
    if (col != n - 1) throw SingularMetric("sphere tangent basis failed");
    return tan;
}

AsymptoticGraph asymptotic_graph(const LawlorNeck& neck, int end,
                                 const std::vector<double>& radii,
                                 int dirs_per_radius, unsigned seed) {
    AsymptoticGraph out;
    out.plane_index = end;
    out.R0 = neck.R0();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss;
    const int n = neck.n();
    for (double rho : radii) {
        if (rho < neck.R0())
            throw RadiusTooSmall("requested graph radius below R0");
        for (int d = 0; d < dirs_per_radius; ++d) {
            VectorXd dir(n);
            for (int k = 0; k < n; ++k) dir(k) = gauss(rng);
            dir.normalize();
            GraphSample sample;
            sample.s = rho * dir;
            auto gp = neck.graph_at(end, sample.s);
            sample.g = gp.g;
            sample.grad = gp.grad;
            sample.hess = gp.hess;
            double tn = 0.0;
            for (const auto& slice : neck.graph_third(end, sample.s))
                tn = std::max(tn, slice.cwiseAbs().maxCoeff());
            sample.third_norm = tn;
            out.samples.push_back(std::move(sample));
        }
    }
    return out;
}

// ---- direct asymptotic values and angle matching --------------------------

Eigen::VectorXd theta_infinity_direct(const LawlorParams& p, double tol) {
    p.validate();
    if (!(tol > 0.0)) throw QuadratureNonConvergence("tol must be positive");
    const VectorXd esym = elementary_symmetric(p.a);
    const int n = p.n;
    VectorXd out(n);
    const double split = 2.0 / std::sqrt(p.A());
    for (int k = 0; k < n; ++k) {
        auto f = [&](double s) {
            const double rk2 = 1.0 / p.a(k) + s * s;
            return -1.0 / (rk2 * std::sqrt(eval_P(esym, s)));
        };
        auto f_inv = [&](double u) {
            double pt = 0.0;
            for (int j = 0; j < n; ++j) pt = pt * (u * u) + esym(j);
            return -std::pow(u, n - 1) /
                   ((1.0 + u * u / p.a(k)) * std::sqrt(pt));
        };
        out(k) = integrate(f, 0.0, split, 0.5 * tol) +
                 integrate(f_inv, 0.0, 1.0 / split, 0.5 * tol);
    }
    return out;
}

LawlorParams match_angles(const Eigen::VectorXd& targets, double tol) {
    const int n = static_cast<int>(targets.size());
    if (n < 3) throw InfeasibleTargets("need at least three target angles");
    for (int k = 0; k < n; ++k)
        if (!(targets(k) > 0.0 && targets(k) < pi))
            throw InfeasibleTargets("target angles must lie in (0, pi)");
    const double sum_tol = std::max(tol, 1e-9);
    if (std::abs(targets.sum() - pi) > sum_tol)
        throw InfeasibleTargets("target angles must sum to pi");

    // solve 2 |theta_inf_k(a)| = target_k in log-parameters; the scale
    // gauge is removed by pinning the smallest entry after every step
    const double quad_tol = std::clamp(0.01 * tol, 1e-13, 1e-11);
    auto residual = [&](const VectorXd& loga) {
        VectorXd a = loga.array().exp();
        VectorXd th = theta_infinity_direct(LawlorParams::make(a), quad_tol);
        return VectorXd(-2.0 * th - targets);
    };

    VectorXd loga = VectorXd::Zero(n);
    VectorXd r = residual(loga);
    const double conv = std::max(0.25 * tol, 1e-12);
    bool done = r.cwiseAbs().maxCoeff() <= conv;
    for (int it = 0; it < 60 && !done; ++it) {
        MatrixXd J(n, n);
        const double h = 1e-6;
        for (int j = 0; j < n; ++j) {
            VectorXd lp = loga, lm = loga;
            lp(j) += h;
            lm(j) -= h;
            J.col(j) = (residual(lp) - residual(lm)) / (2.0 * h);
        }
        const VectorXd step = J.colPivHouseholderQr().solve(-r);
        double scale = 1.0;
        bool accepted = false;
        for (int half = 0; half < 12 && !accepted; ++half) {
            VectorXd trial = loga + scale * step;
            trial.array() -= trial.minCoeff();
            VectorXd rt = residual(trial);
            if (rt.norm() < r.norm() || rt.cwiseAbs().maxCoeff() <= conv) {
                loga = trial;
                r = rt;
                accepted = true;
            }
            scale *= 0.5;
        }
        if (!accepted) throw NoConvergence("angle matching stalled");
        done = r.cwiseAbs().maxCoeff() <= conv;
    }
    if (!done) throw NoConvergence("angle matching did not converge");

    VectorXd a = loga.array().exp();
    a /= a.minCoeff();
    return LawlorParams::make(a);
}

LawlorNeck LawlorNeck::from_json(const nlohmann::json& j) {
    if (!j.contains("version") || j["version"].get<int>() != 1)
        throw ParseError("unsupported neck cache version");
    LawlorNeck neck;
    VectorXd a(j["n"].get<int>());
    for (int k = 0; k < a.size(); ++k) a(k) = j["a"][k].get<double>();
    neck.params_ = LawlorParams::make(a);
    neck.quad_tol_ = j["quad_tol"].get<double>();
    neck.esym_ = elementary_symmetric(a);
    neck.grid_ = j["grid"].get<std::vector<double>>();
    for (const auto& row : j["theta"]) {
        VectorXd v(a.size());
        for (int k = 0; k < v.size(); ++k) v(k) = row[k].get<double>();
        neck.tab_.push_back(v);
    }
    if (neck.tab_.size() != neck.grid_.size())
        throw ParseError("neck cache grid/theta size mismatch");
    VectorXd ti(a.size());
    for (int k = 0; k < ti.size(); ++k) ti(k) = j["theta_inf"][k].get<double>();
    neck.theta_inf_ = ti;
    neck.C0_ = j["C0"].get<double>();
    return neck;
}

nlohmann::json neck_to_json(const LawlorNeck& neck) {
    nlohmann::json j;
    j["version"] = 1;
    j["n"] = neck.n();
    j["a"] = std::vector<double>(neck.params().a.data(),
                                 neck.params().a.data() + neck.n());
    j["quad_tol"] = neck.quad_tol();
    j["grid"] = neck.grid();
    nlohmann::json theta = nlohmann::json::array();
    for (const auto& row : neck.grid_theta())
        theta.push_back(
            std::vector<double>(row.data(), row.data() + row.size()));
    j["theta"] = theta;
    j["theta_inf"] = std::vector<double>(
        neck.theta_infinity().data(), neck.theta_infinity().data() + neck.n());
    j["C0"] = neck.C0();
    j["R0"] = neck.R0();
    return j;
}

} // namespace slaglab::lawlor
