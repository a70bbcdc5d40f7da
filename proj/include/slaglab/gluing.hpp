#pragma once

#include <array>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "slaglab/lawlor.hpp"

namespace slaglab::gluing {

/// C-infinity step built from exp(-1/t): 0 for t <= 0, 1 for t >= 1.
/// Returns value and first three derivatives.
std::array<double, 4> smoothstep(double t);

/// Radial cutoff: 1 inside delta/2, 0 outside delta. `radial(r)` returns
/// eta and its first three radial derivatives.
struct Cutoff {
    double delta = 0.0;
    std::array<double, 4> radial(double r) const;
    double value(double r) const { return radial(r)[0]; }
};

/// Multivariate polynomial with every term of total degree >= 3, so the
/// graph vanishes to second order at the origin (Eq-18 shape).
struct Polynomial {
    struct Term {
        Eigen::VectorXi powers;
        double coeff = 0.0;
    };
    std::vector<Term> terms;
    int n = 0;

    bool empty() const { return terms.empty(); }
    double value(const Eigen::VectorXd& x) const;
    Eigen::VectorXd grad(const Eigen::VectorXd& x) const;
    Eigen::MatrixXd hess(const Eigen::VectorXd& x) const;
    std::vector<Eigen::MatrixXd> third(const Eigen::VectorXd& x) const;
    void validate() const;  // throws ParseError on terms of degree < 3
};

struct ExteriorPiece {
    symplectic::LagrangianPlane plane;
    Polynomial f;  // empty means an exactly special Lagrangian plane
    double outer_radius = 1.0;

    /// sup of the third-derivative norm over the unit ball sample grid,
    /// floored at 1; this is the K fed into delta = alpha / K.
    double measured_K() const;
};

struct GlueConfig {
    int n = 3;
    double alpha = 0.1;
    double K = 1.0;
    double delta = 0.0;       // alpha / K
    double epsilon = 0.0;     // alpha^{1+1/n} / (2 K C0^{1/n})
    double C0 = 0.0;          // fitted neck Hessian constant used for epsilon
    double R0 = 0.0;          // neck graph radius
    double C_match = 0.0;     // epsilon / alpha^{1+1/n}
    double beta = 0.1;
    double R_weight = 1.0;
    double a_inner = 0.0;     // weight inner radius coefficient (2 R0)
    double b_outer = 1.0;     // weight outer radius coefficient

    void validate() const;
};

/// Picks delta = alpha / K and the maximal epsilon = alpha^{1+1/n} /
/// (2 K C0^{1/n}); throws AlphaTooLarge when the rescaled neck cannot fit
/// inside the gluing annulus (epsilon R0 > delta / 2) or alpha exceeds the
/// ceiling, and ParameterInconsistency below the alpha floor 1e-3.
GlueConfig select_parameters(double alpha, double K, double C0, double R0,
                             int n, double alpha_ceiling = 0.25);

/// The glued surface: a cylinder (lambda, mu) in [-L2, L1] x S^{n-1}.
/// For lambda >= 0 the map in end-1 adapted plane coordinates is
///   x = s_1(lambda, mu),  y = grad((1 - eta) f_1 + eta g_eps)(x),
/// which reduces bit-for-bit to eps Psi_a on the neck core (eta = 1) and
/// to the f_1 graph outside the gluing ball (eta = 0); symmetrically for
/// lambda < 0 over the end-2 plane.
class ChartedSurface {
public:
    ChartedSurface(ExteriorPiece ext1, ExteriorPiece ext2,
                   std::shared_ptr<const lawlor::LawlorNeck> neck,
                   GlueConfig cfg);

    int n() const { return cfg_.n; }
    const GlueConfig& cfg() const { return cfg_; }
    const lawlor::LawlorNeck& neck() const { return *neck_; }
    const ExteriorPiece& exterior(int end) const { return ext_[end - 1]; }
    bool flat_exteriors() const;
    /// True when all Lawlor parameters coincide (rotationally symmetric
    /// model); radial quantities are then mu-independent.
    bool symmetric() const { return symmetric_; }

    // ---- cylinder chart ---------------------------------------------------
    double lambda_max(int end) const { return lambda_max_[end - 1]; }
    /// lambda >= 0 with |s_end(lambda, mu)| = r (fixed-mu radial root).
    double lambda_at_radius(int end, double r, const Eigen::VectorXd& mu) const;

    struct ChartPoint {
        Eigen::VectorXd ambient;   // 2n
        Eigen::MatrixXd jacobian;  // 2n x n, columns (d/dlambda, d/dw_j)
        Eigen::MatrixXd metric;    // n x n Gram of the columns
    };
    Eigen::VectorXd point(double lambda, const Eigen::VectorXd& mu) const;
    ChartPoint point_full(double lambda, const Eigen::VectorXd& mu,
                          const Eigen::MatrixXd& sphere_tangent) const;

    /// Base coordinates of the projection to the end plane, |s_end|.
    double s_radius(int end, double lambda_abs,
                    const Eigen::VectorXd& mu) const;

    // ---- graph charts (true functions of the base point x) ----------------
    struct GraphData {
        double u = 0.0;
        Eigen::VectorXd grad;
        Eigen::MatrixXd hess;
        std::vector<Eigen::MatrixXd> third;
    };
    /// Combined transition function u = (1 - eta) f + eta g_eps and its
    /// derivatives at base point x on the end plane (valid |x| >= eps R0).
    GraphData graph_data(int end, const Eigen::VectorXd& x,
                         bool with_third = false) const;
    /// Ambient point of the graph chart at base x.
    Eigen::VectorXd graph_point(int end, const Eigen::VectorXd& x) const;
    /// Ambient point of the pure exterior chart (graph of f alone).
    Eigen::VectorXd exterior_point(int end, const Eigen::VectorXd& x) const;
    /// g_eps and derivatives alone (scaled neck graph function).
    GraphData g_eps(int end, const Eigen::VectorXd& x,
                    bool with_third = false) const;

    /// Ambient lift x + i y in the adapted frame of the given end.
    Eigen::VectorXd lift(int end, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& y) const;

    const Cutoff& cutoff() const { return cutoff_; }

    nlohmann::json to_json() const;

private:
    struct EndScaled {
        Eigen::VectorXd c, q, cp, qp;  // scaled by epsilon
    };
    EndScaled coeffs(double lambda_abs) const;
    double g_memoized(int end, double lambda_abs,
                      const Eigen::VectorXd& mu) const;

    ExteriorPiece ext_[2];
    std::shared_ptr<const lawlor::LawlorNeck> neck_;
    GlueConfig cfg_;
    Cutoff cutoff_;
    Eigen::VectorXd phases_[2];
    double lambda_max_[2] = {0.0, 0.0};
    bool symmetric_ = false;
    mutable std::unordered_map<long long, double> g_cache_[2];
    mutable std::unique_ptr<std::mutex> g_mutex_ =
        std::make_unique<std::mutex>();
};

ChartedSurface build_surface(const ExteriorPiece& ext1,
                             const ExteriorPiece& ext2,
                             std::shared_ptr<const lawlor::LawlorNeck> neck,
                             const GlueConfig& cfg);

/// Two-scale weight of Def-28 shape: R eps inside |p| <= eps a, R outside
/// |p| >= eps^beta b, log-radius smoothstep between.
struct WeightFunction {
    double R = 1.0, eps = 0.0, beta = 0.1, a_inner = 0.0, b_outer = 1.0;

    double rho_of_r(double r) const;
    double drho_dr(double r) const;
    double rho(const Eigen::VectorXd& ambient) const {
        return rho_of_r(ambient.norm());
    }
    double inner_radius() const { return eps * a_inner; }
    double outer_radius() const { return std::pow(eps, beta) * b_outer; }
};

WeightFunction weight_rho(const ChartedSurface& surface,
                          const GlueConfig& cfg);

} // namespace slaglab::gluing
