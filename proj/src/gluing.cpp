#include "slaglab/gluing.hpp"
#include "slaglab/error.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace slaglab::gluing {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using std::numbers::pi;

std::array<double, 4> smoothstep(double t) {
    if (t <= 0.0) return {0.0, 0.0, 0.0, 0.0};
    if (t >= 1.0) return {1.0, 0.0, 0.0, 0.0};
    auto bump = [](double u) {
        const double a = std::exp(-1.0 / u);
        const double a1 = a / (u * u);
        const double a2 = a * (1.0 - 2.0 * u) / (u * u * u * u);
        const double a3 =
            a * (1.0 - 6.0 * u + 6.0 * u * u) / std::pow(u, 6);
        return std::array<double, 4>{a, a1, a2, a3};
    };
    const auto A = bump(t);
    const auto Bm = bump(1.0 - t);
    const double B = Bm[0], B1 = -Bm[1], B2 = Bm[2], B3 = -Bm[3];
    const double D = A[0] + B, D1 = A[1] + B1, D2 = A[2] + B2, D3 = A[3] + B3;
    const double iD = 1.0 / D;
    const double S = A[0] * iD;
    const double S1 = A[1] * iD - A[0] * D1 * iD * iD;
    const double S2 = A[2] * iD - 2.0 * A[1] * D1 * iD * iD -
                      A[0] * D2 * iD * iD + 2.0 * A[0] * D1 * D1 * iD * iD * iD;
    const double S3 = A[3] * iD - 3.0 * A[2] * D1 * iD * iD -
                      3.0 * A[1] * D2 * iD * iD +
                      6.0 * A[1] * D1 * D1 * iD * iD * iD -
                      A[0] * D3 * iD * iD +
                      6.0 * A[0] * D1 * D2 * iD * iD * iD -
                      6.0 * A[0] * D1 * D1 * D1 * iD * iD * iD * iD;
    return {S, S1, S2, S3};
}

std::array<double, 4> Cutoff::radial(double r) const {
    // eta = S((delta - r) / (delta / 2)): 1 inside delta/2, 0 outside delta
    const double scale = -2.0 / delta;
    const auto s = smoothstep((delta - r) * 2.0 / delta);
    return {s[0], s[1] * scale, s[2] * scale * scale,
            s[3] * scale * scale * scale};
}

// ---- polynomial graphs ------------------------------------------------

void Polynomial::validate() const {
    for (const auto& t : terms) {
        if (static_cast<int>(t.powers.size()) != n)
            throw ParseError("polynomial term arity mismatch");
        int deg = 0;
        for (int i = 0; i < n; ++i) {
            if (t.powers(i) < 0) throw ParseError("negative monomial power");
            deg += t.powers(i);
        }
        if (deg < 3)
            throw ParseError(
                "graphing polynomials must have total degree >= 3 per term");
    }
}

namespace {
double mono(const Eigen::VectorXi& p, const VectorXd& x, int d0 = -1,
            int d1 = -1, int d2 = -1) {
    // value of the monomial differentiated in the listed slots
    double acc = 1.0;
    for (int i = 0; i < x.size(); ++i) {
        int pw = p(i);
        double fac = 1.0;
        for (int d : {d0, d1, d2})
            if (d == i) {
                fac *= pw;
                pw -= 1;
            }
        if (pw < 0) return 0.0;
        acc *= fac * std::pow(x(i), pw);
    }
    return acc;
}
} // namespace

double Polynomial::value(const VectorXd& x) const {
    double acc = 0.0;
    for (const auto& t : terms) acc += t.coeff * mono(t.powers, x);
    return acc;
}

VectorXd Polynomial::grad(const VectorXd& x) const {
    VectorXd out = VectorXd::Zero(n);
    for (const auto& t : terms)
        for (int i = 0; i < n; ++i)
            out(i) += t.coeff * mono(t.powers, x, i);
    return out;
}

MatrixXd Polynomial::hess(const VectorXd& x) const {
    MatrixXd out = MatrixXd::Zero(n, n);
    for (const auto& t : terms)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                out(i, j) += t.coeff * mono(t.powers, x, i, j);
    return out;
}

std::vector<MatrixXd> Polynomial::third(const VectorXd& x) const {
    std::vector<MatrixXd> out(n, MatrixXd::Zero(n, n));
    for (const auto& t : terms)
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                for (int k = 0; k < n; ++k)
                    out[i](j, k) += t.coeff * mono(t.powers, x, i, j, k);
    return out;
}

double ExteriorPiece::measured_K() const {
    if (f.empty()) return 1.0;
    double k = 1.0;
    const int n = plane.n;
    std::vector<VectorXd> dirs;
    for (int axis = 0; axis < n; ++axis) {
        VectorXd e = VectorXd::Zero(n);
        e(axis) = 1.0;
        dirs.push_back(e);
    }
    dirs.push_back(VectorXd::Ones(n).normalized());
    for (int axis = 0; axis + 1 < n; ++axis) {
        VectorXd e = VectorXd::Zero(n);
        e(axis) = 1.0;
        e(axis + 1) = -1.0;
        dirs.push_back(e.normalized());
    }
    for (const auto& dir : dirs)
        for (double r = 0.1; r <= 0.5 * outer_radius + 1e-12; r += 0.1)
            for (double sgn : {-1.0, 1.0})
                for (const auto& slice : f.third(sgn * r * dir))
                    k = std::max(k, slice.cwiseAbs().maxCoeff());
    return k;
}

// ---- configuration -----------------------------------------------------

void GlueConfig::validate() const {
    if (n < 3) throw ParameterInconsistency("need n >= 3");
    if (!(alpha > 0) || !(K > 0) || !(epsilon > 0) || !(delta > 0) ||
        !(C0 > 0) || !(R0 > 0))
        throw ParameterInconsistency("glue parameters must be positive");
    if (!(beta > 0.0 && beta < 1.0))
        throw ParameterInconsistency("beta must lie in (0, 1)");
    if (std::abs(delta - alpha / K) > 1e-12 * delta)
        throw ParameterInconsistency("delta must equal alpha / K");
    const double eps_max =
        std::pow(alpha, 1.0 + 1.0 / n) / (2.0 * K * std::pow(C0, 1.0 / n));
    if (epsilon > eps_max * (1.0 + 1e-9))
        throw ParameterInconsistency("epsilon exceeds its Hessian-bound cap");
    if (epsilon * R0 > 0.5 * delta * (1.0 + 1e-9))
        throw ParameterInconsistency(
            "rescaled neck does not reach into the gluing annulus");
}

GlueConfig select_parameters(double alpha, double K, double C0, double R0,
                             int n, double alpha_ceiling) {
    if (!(alpha <= alpha_ceiling))
        throw AlphaTooLarge("alpha " + std::to_string(alpha) +
                            " above ceiling " + std::to_string(alpha_ceiling));
    if (!(alpha >= 1e-3))
        throw ParameterInconsistency(
            "alpha below 1e-3 collapses the epsilon scale in double precision");
    GlueConfig cfg;
    cfg.n = n;
    cfg.alpha = alpha;
    cfg.K = K;
    cfg.C0 = C0;
    cfg.R0 = R0;
    cfg.delta = alpha / K;
    cfg.epsilon =
        std::pow(alpha, 1.0 + 1.0 / n) / (2.0 * K * std::pow(C0, 1.0 / n));
    cfg.C_match = cfg.epsilon / std::pow(alpha, 1.0 + 1.0 / n);
    cfg.a_inner = 2.0 * R0;
    if (cfg.epsilon * R0 > 0.5 * cfg.delta)
        throw AlphaTooLarge(
            "epsilon R0 > delta / 2; no admissible epsilon at this alpha");
    cfg.validate();
    return cfg;
}

// ---- the glued surface ---------------------------------------------------

ChartedSurface::ChartedSurface(ExteriorPiece ext1, ExteriorPiece ext2,
                               std::shared_ptr<const lawlor::LawlorNeck> neck,
                               GlueConfig cfg)
    : ext_{std::move(ext1), std::move(ext2)},
      neck_(std::move(neck)),
      cfg_(cfg),
      cutoff_{cfg.delta} {
    cfg_.validate();
    if (std::abs(cfg_.R0 - neck_->R0()) > 1e-9 ||
        std::abs(cfg_.C0 - neck_->C0()) > 1e-6 * cfg_.C0)
        throw ParameterInconsistency("config was built for a different neck");
    const double measured =
        std::max(ext_[0].measured_K(), ext_[1].measured_K());
    if (cfg_.K < measured * (1.0 - 1e-9))
        throw ParameterInconsistency(
            "config K is below the measured exterior curvature constant");
    for (int end : {1, 2}) {
        const auto& piece = ext_[end - 1];
        piece.f.validate();
        if (piece.plane.n != cfg_.n)
            throw DimensionMismatch("exterior plane dimension mismatch");
        const auto target = neck_->asymptotic_plane(end);
        const MatrixXd diff =
            piece.plane.basis * piece.plane.basis.transpose() -
            target.basis * target.basis.transpose();
        if (diff.cwiseAbs().maxCoeff() > 1e-6)
            throw PlaneMismatch(
                "exterior plane does not match the neck asymptotic plane");
        phases_[end - 1] = neck_->end_phases(end);
    }
    const auto& a = neck_->params().a;
    symmetric_ = (a.maxCoeff() - a.minCoeff()) < 1e-14;

    // boundary parameter: mean projected radius reaches the outer radius
    for (int end : {1, 2}) {
        auto mean_radius = [&](double l) {
            const int nn = cfg_.n;
            double acc = 0.0;
            for (int k = 0; k < nn; ++k) {
                VectorXd mu = VectorXd::Zero(nn);
                mu(k) = 1.0;
                acc += s_radius(end, l, mu);
            }
            return acc / nn;
        };
        double lo = 0.0, hi = 2.0 * ext_[end - 1].outer_radius / cfg_.epsilon;
        while (mean_radius(hi) < ext_[end - 1].outer_radius) hi *= 2.0;
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            (mean_radius(mid) < ext_[end - 1].outer_radius ? lo : hi) = mid;
            if (hi - lo < 1e-12 * hi) break;
        }
        lambda_max_[end - 1] = 0.5 * (lo + hi);
    }
}

bool ChartedSurface::flat_exteriors() const {
    return ext_[0].f.empty() && ext_[1].f.empty();
}

ChartedSurface::EndScaled ChartedSurface::coeffs(double lambda_abs) const {
    const int nn = cfg_.n;
    EndScaled es{VectorXd(nn), VectorXd(nn), VectorXd(nn), VectorXd(nn)};
    const auto& neck = *neck_;
    for (int k = 0; k < nn; ++k) {
        const double rk =
            std::sqrt(1.0 / neck.params().a(k) + lambda_abs * lambda_abs);
        const double rp = lambda_abs / rk;
        const double D = neck.theta(k, lambda_abs) - neck.theta_infinity()(k);
        const double Dp = neck.theta_prime(k, lambda_abs);
        es.c(k) = cfg_.epsilon * rk * std::cos(D);
        es.q(k) = cfg_.epsilon * rk * std::sin(D);
        es.cp(k) = cfg_.epsilon * (rp * std::cos(D) - rk * std::sin(D) * Dp);
        es.qp(k) = cfg_.epsilon * (rp * std::sin(D) + rk * std::cos(D) * Dp);
    }
    return es;
}

double ChartedSurface::s_radius(int end, double lambda_abs,
                                const VectorXd& mu) const {
    (void)end;  // |s| is the same for both ends
    const EndScaled es = coeffs(lambda_abs);
    double acc = 0.0;
    for (int k = 0; k < cfg_.n; ++k) {
        const double v = mu(k) * es.c(k);
        acc += v * v;
    }
    return std::sqrt(acc);
}

double ChartedSurface::lambda_at_radius(int end, double r,
                                        const VectorXd& mu) const {
    double lo = 0.0, hi = std::max(2.0 * r / cfg_.epsilon, 4.0);
    while (s_radius(end, hi, mu) < r) hi *= 2.0;
    for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        (s_radius(end, mid, mu) < r ? lo : hi) = mid;
        if (hi - lo < 1e-13 * std::max(1.0, hi)) break;
    }
    return 0.5 * (lo + hi);
}

double ChartedSurface::g_memoized(int end, double lambda_abs,
                                  const VectorXd& mu) const {
    if (symmetric_) {
        const long long key = std::llround(lambda_abs * 1e10);
        {
            std::lock_guard<std::mutex> lock(*g_mutex_);
            auto it = g_cache_[end - 1].find(key);
            if (it != g_cache_[end - 1].end()) return it->second;
        }
        const double value = neck_->g_at_parameter(end, lambda_abs, mu);
        std::lock_guard<std::mutex> lock(*g_mutex_);
        g_cache_[end - 1].emplace(key, value);
        return value;
    }
    return neck_->g_at_parameter(end, lambda_abs, mu);
}

Eigen::VectorXd ChartedSurface::lift(int end, const VectorXd& x,
                                     const VectorXd& y) const {
    const int nn = cfg_.n;
    VectorXd out(2 * nn);
    const VectorXd& phi = phases_[end - 1];
    for (int k = 0; k < nn; ++k) {
        const double c = std::cos(phi(k)), s = std::sin(phi(k));
        out(k) = c * x(k) - s * y(k);
        out(nn + k) = s * x(k) + c * y(k);
    }
    return out;
}

Eigen::VectorXd ChartedSurface::point(double lambda,
                                      const VectorXd& mu) const {
    const int end = lambda >= 0.0 ? 1 : 2;
    const double sgn = end == 1 ? 1.0 : -1.0;
    const EndScaled es = coeffs(std::abs(lambda));
    const int nn = cfg_.n;
    VectorXd x(nn), t(nn);
    for (int k = 0; k < nn; ++k) {
        x(k) = mu(k) * es.c(k);
        t(k) = sgn * mu(k) * es.q(k);
    }
    const double r = x.norm();
    const auto eta = cutoff_.radial(r);
    VectorXd y = t;
    if (eta[0] < 1.0 || eta[1] != 0.0) {
        const auto& f = ext_[end - 1].f;
        const VectorXd gradf =
            f.empty() ? VectorXd::Zero(nn) : f.grad(x);
        const double fval = f.empty() ? 0.0 : f.value(x);
        const double gval =
            cfg_.epsilon * cfg_.epsilon * g_memoized(end, std::abs(lambda), mu);
        y = t + (1.0 - eta[0]) * (gradf - t) +
            eta[1] * (x / r) * (gval - fval);
    }
    return lift(end, x, y);
}

ChartedSurface::ChartPoint ChartedSurface::point_full(
    double lambda, const VectorXd& mu,
    const MatrixXd& sphere_tangent) const {
    const int end = lambda >= 0.0 ? 1 : 2;
    const double sgn = end == 1 ? 1.0 : -1.0;   // t-coordinate sign
    const double dl = end == 1 ? 1.0 : -1.0;    // d|lambda| / d lambda
    const double la = std::abs(lambda);
    const EndScaled es = coeffs(la);
    const int nn = cfg_.n;

    VectorXd x(nn), t(nn), dx_dl(nn), dt_dl(nn);
    for (int k = 0; k < nn; ++k) {
        x(k) = mu(k) * es.c(k);
        t(k) = sgn * mu(k) * es.q(k);
        dx_dl(k) = mu(k) * es.cp(k) * dl;
        dt_dl(k) = sgn * mu(k) * es.qp(k) * dl;
    }
    MatrixXd dx_dw(nn, nn - 1), dt_dw(nn, nn - 1);
    for (int j = 0; j < nn - 1; ++j)
        for (int k = 0; k < nn; ++k) {
            dx_dw(k, j) = sphere_tangent(k, j) * es.c(k);
            dt_dw(k, j) = sgn * sphere_tangent(k, j) * es.q(k);
        }

    const double r = x.norm();
    const auto eta = cutoff_.radial(r);
    VectorXd y = t;
    VectorXd dy_dl = dt_dl;
    MatrixXd dy_dw = dt_dw;
    if (eta[0] < 1.0 || eta[1] != 0.0) {
        const auto& f = ext_[end - 1].f;
        const VectorXd xhat = x / r;
        const VectorXd gradf = f.empty() ? VectorXd::Zero(nn) : f.grad(x);
        const MatrixXd hessf =
            f.empty() ? MatrixXd::Zero(nn, nn) : f.hess(x);
        const double fval = f.empty() ? 0.0 : f.value(x);
        const double gval = cfg_.epsilon * cfg_.epsilon *
                            g_memoized(end, la, mu);
        const MatrixXd hessg = neck_->graph_hess_at_parameter(end, la, mu);

        y = t + (1.0 - eta[0]) * (gradf - t) + eta[1] * xhat * (gval - fval);

        // M = hess(u) - hess(g_eps), a function of the base point alone
        const MatrixXd hess_eta =
            eta[2] * xhat * xhat.transpose() +
            (eta[1] / r) *
                (MatrixXd::Identity(nn, nn) - xhat * xhat.transpose());
        const VectorXd dgrad = t - gradf;  // grad g_eps - grad f at x
        MatrixXd M = (1.0 - eta[0]) * (hessf - hessg) +
                     eta[1] * (xhat * dgrad.transpose() +
                               dgrad * xhat.transpose()) +
                     (gval - fval) * hess_eta;
        dy_dl += M * dx_dl;
        dy_dw += M * dx_dw;
    }

    ChartPoint out;
    out.ambient = lift(end, x, y);
    out.jacobian.resize(2 * nn, nn);
    out.jacobian.col(0) = lift(end, dx_dl, dy_dl);
    for (int j = 0; j < nn - 1; ++j)
        out.jacobian.col(1 + j) = lift(end, dx_dw.col(j), dy_dw.col(j));
    out.metric = out.jacobian.transpose() * out.jacobian;
    return out;
}

ChartedSurface::GraphData ChartedSurface::g_eps(int end, const VectorXd& x,
                                                bool with_third) const {
    const double e = cfg_.epsilon;
    if (x.norm() < e * neck_->R0() * (1.0 - 1e-12))
        throw ChartDomainError("base point inside the non-graphical core");
    auto gp = neck_->graph_at(end, x / e);
    GraphData out;
    out.u = e * e * gp.g;
    out.grad = e * gp.grad;
    out.hess = gp.hess;
    if (with_third) {
        out.third = neck_->graph_third(end, x / e);
        for (auto& slice : out.third) slice /= e;
    }
    return out;
}

ChartedSurface::GraphData ChartedSurface::graph_data(int end,
                                                     const VectorXd& x,
                                                     bool with_third) const {
    const int nn = cfg_.n;
    const double r = x.norm();
    const auto eta = cutoff_.radial(r);
    const auto& f = ext_[end - 1].f;

    GraphData fd;
    fd.u = f.empty() ? 0.0 : f.value(x);
    fd.grad = f.empty() ? VectorXd::Zero(nn) : f.grad(x);
    fd.hess = f.empty() ? MatrixXd::Zero(nn, nn) : f.hess(x);
    if (with_third)
        fd.third = f.empty() ? std::vector<MatrixXd>(nn, MatrixXd::Zero(nn, nn))
                             : f.third(x);
    if (eta[0] == 0.0 && eta[1] == 0.0) return fd;  // pure exterior

    const GraphData gd = g_eps(end, x, with_third);
    const VectorXd xhat = x / r;
    GraphData out;
    const double d = gd.u - fd.u;
    const VectorXd dgrad = gd.grad - fd.grad;
    const MatrixXd dhess = gd.hess - fd.hess;
    out.u = fd.u + eta[0] * d;
    out.grad = fd.grad + eta[0] * dgrad + eta[1] * xhat * d;
    const MatrixXd hess_eta =
        eta[2] * xhat * xhat.transpose() +
        (eta[1] / r) * (MatrixXd::Identity(nn, nn) - xhat * xhat.transpose());
    out.hess = fd.hess + eta[0] * dhess +
               eta[1] * (xhat * dgrad.transpose() + dgrad * xhat.transpose()) +
               d * hess_eta;
    if (with_third) {
        // grad eta, hess eta, third eta as radial tensors
        VectorXd ge = eta[1] * xhat;
        MatrixXd he = hess_eta;
        std::vector<MatrixXd> te(nn);
        for (int i = 0; i < nn; ++i) {
            te[i] = eta[3] * xhat(i) * xhat * xhat.transpose();
            for (int j = 0; j < nn; ++j)
                for (int k = 0; k < nn; ++k) {
                    auto dk = [&](int p, int q) {
                        return (p == q ? 1.0 : 0.0) - xhat(p) * xhat(q);
                    };
                    te[i](j, k) += (eta[2] / r - eta[1] / (r * r)) *
                                   (dk(i, j) * xhat(k) + dk(j, k) * xhat(i) +
                                    dk(i, k) * xhat(j));
                }
        }
        out.third.resize(nn);
        for (int i = 0; i < nn; ++i) {
            MatrixXd s = fd.third[i] + eta[0] * (gd.third[i] - fd.third[i]);
            // 3 sym(grad eta x hess d): indices (i, j, k)
            s += ge(i) * dhess;
            for (int j = 0; j < nn; ++j)
                for (int k = 0; k < nn; ++k)
                    s(j, k) += ge(j) * dhess(i, k) + ge(k) * dhess(i, j);
            // 3 sym(hess eta x grad d)
            for (int j = 0; j < nn; ++j)
                for (int k = 0; k < nn; ++k)
                    s(j, k) += he(i, j) * dgrad(k) + he(i, k) * dgrad(j) +
                               he(j, k) * dgrad(i);
            s += d * te[i];
            out.third[i] = s;
        }
    }
    return out;
}

Eigen::VectorXd ChartedSurface::graph_point(int end, const VectorXd& x) const {
    return lift(end, x, graph_data(end, x).grad);
}

Eigen::VectorXd ChartedSurface::exterior_point(int end,
                                               const VectorXd& x) const {
    const auto& f = ext_[end - 1].f;
    return lift(end, x,
                f.empty() ? VectorXd::Zero(cfg_.n) : f.grad(x));
}

nlohmann::json ChartedSurface::to_json() const {
    nlohmann::json j;
    j["version"] = 1;
    j["config"] = {{"n", cfg_.n},          {"alpha", cfg_.alpha},
                   {"K", cfg_.K},          {"delta", cfg_.delta},
                   {"epsilon", cfg_.epsilon}, {"C0", cfg_.C0},
                   {"R0", cfg_.R0},        {"beta", cfg_.beta},
                   {"R_weight", cfg_.R_weight}, {"a_inner", cfg_.a_inner},
                   {"b_outer", cfg_.b_outer}};
    j["neck"] = {{"a", std::vector<double>(neck_->params().a.data(),
                                           neck_->params().a.data() +
                                               neck_->n())},
                 {"quad_tol", neck_->quad_tol()}};
    for (int end : {1, 2}) {
        nlohmann::json piece;
        piece["plane"] = symplectic::plane_to_json(ext_[end - 1].plane);
        piece["outer_radius"] = ext_[end - 1].outer_radius;
        nlohmann::json terms = nlohmann::json::array();
        for (const auto& t : ext_[end - 1].f.terms)
            terms.push_back({{"powers", std::vector<int>(t.powers.data(),
                                                         t.powers.data() +
                                                             t.powers.size())},
                             {"coeff", t.coeff}});
        piece["f"] = terms;
        j[end == 1 ? "exterior1" : "exterior2"] = piece;
    }
    j["lambda_max"] = {lambda_max_[0], lambda_max_[1]};
    return j;
}

ChartedSurface build_surface(const ExteriorPiece& ext1,
                             const ExteriorPiece& ext2,
                             std::shared_ptr<const lawlor::LawlorNeck> neck,
                             const GlueConfig& cfg) {
    return ChartedSurface(ext1, ext2, std::move(neck), cfg);
}

// ---- weight function -------------------------------------------------

double WeightFunction::rho_of_r(double r) const {
    const double r0 = inner_radius();
    const double r1 = outer_radius();
    if (r <= r0) return R * eps;
    if (r >= r1) return R;
    const double u = (std::log(r) - std::log(r0)) /
                     (std::log(r1) - std::log(r0));
    const double y = std::log(R * eps) +
                     (std::log(R) - std::log(R * eps)) * smoothstep(u)[0];
    return std::exp(y);
}

double WeightFunction::drho_dr(double r) const {
    const double r0 = inner_radius();
    const double r1 = outer_radius();
    if (r <= r0 || r >= r1) return 0.0;
    const double span = std::log(r1) - std::log(r0);
    const double u = (std::log(r) - std::log(r0)) / span;
    return rho_of_r(r) * (-std::log(eps)) * smoothstep(u)[1] / (span * r);
}

WeightFunction weight_rho(const ChartedSurface& surface,
                          const GlueConfig& cfg) {
    (void)surface;
    WeightFunction w;
    w.R = cfg.R_weight;
    w.eps = cfg.epsilon;
    w.beta = cfg.beta;
    w.a_inner = cfg.a_inner;
    w.b_outer = cfg.b_outer;
    if (!(w.inner_radius() < w.outer_radius()))
        throw ParameterInconsistency(
            "weight plateaus overlap; epsilon too large for this beta");
    return w;
}

} // namespace slaglab::gluing
