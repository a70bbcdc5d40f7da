#pragma once

#include <Eigen/Dense>
#include <vector>

#include "slaglab/symplectic.hpp"

namespace slaglab::lawlor {

struct LawlorParams {
    Eigen::VectorXd a;  // all entries positive
    int n = 0;

    static LawlorParams make(const Eigen::VectorXd& a);
    void validate() const;
    double A() const { return a.minCoeff(); }
};

/// Eq-9 quotient ((1 + a_1 l^2)...(1 + a_n l^2) - 1) / l^2, evaluated as a
/// polynomial in l^2 with elementary-symmetric coefficients so the l -> 0
/// limit (sum a_k) needs no special case.
double poly_P(const LawlorParams& p, double lambda);

/// Analytic lower bound min{A^n l^{2n-2}, n A} of the quotient.
double poly_P_lower_bound(const LawlorParams& p, double lambda);

/// Asymptotic angle values computed without building a neck; interior
/// quadrature plus an inverted-variable tail, total error <= tol.
Eigen::VectorXd theta_infinity_direct(const LawlorParams& p, double tol);

struct GraphSample {
    Eigen::VectorXd s;     // base point on the asymptotic plane
    double g = 0.0;
    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;
    double third_norm = 0.0;  // sup-abs entry of the third-derivative tensor
};

struct AsymptoticGraph {
    int plane_index = 1;
    double R0 = 0.0;
    std::vector<GraphSample> samples;
};

/// The neck N_a with its angle functions tabulated on a graded grid. All
/// evaluations after construction are read-only.
class LawlorNeck {
public:
    LawlorNeck(const LawlorParams& params, double quad_tol = 1e-10);

    /// Restores a tabulation written by neck_to_json.
    static LawlorNeck from_json(const nlohmann::json& j);

    const LawlorParams& params() const { return params_; }
    int n() const { return params_.n; }
    double quad_tol() const { return quad_tol_; }
    double R0() const;
    double lambda_max_tabulated() const { return grid_.back(); }

    double poly_P(double lambda) const { return lawlor::poly_P(params_, lambda); }
    double poly_P_prime(double lambda) const;

    double theta(int k, double lambda) const;
    double theta_prime(int k, double lambda) const;   // Eq-10 integrand
    double theta_second(int k, double lambda) const;
    const Eigen::VectorXd& theta_infinity() const { return theta_inf_; }

    /// Eq-13 tail bound on |theta_k(a, l) - theta_k(a)|.
    double tail_bound(double lambda) const;

    // ---- embedding -------------------------------------------------------
    Eigen::VectorXcd embed_z(double lambda, const Eigen::VectorXd& mu) const;
    Eigen::VectorXd embed(double lambda, const Eigen::VectorXd& mu) const;
    Eigen::VectorXcd embed_dlambda(double lambda, const Eigen::VectorXd& mu) const;
    /// d/dmu^j of the embedding; independent of mu.
    Eigen::VectorXcd embed_dmu(double lambda, int j) const;
    Eigen::VectorXcd embed_dlambda2(double lambda, const Eigen::VectorXd& mu) const;

    /// Eq-32 metric in the (lambda, sphere-tangent) chart for the given
    /// orthonormal sphere-tangent basis (columns of `tangent`).
    Eigen::MatrixXd induced_metric(double lambda, const Eigen::VectorXd& mu,
                                   const Eigen::MatrixXd& tangent) const;

    // ---- asymptotic planes ----------------------------------------------
    /// Frame phases pi/2 delta_1k + theta_inf for end 1, pi/2 delta_1k -
    /// theta_inf for end 2.
    Eigen::VectorXd end_phases(int end) const;
    symplectic::LagrangianPlane asymptotic_plane(int end) const;
    /// Tangent plane sampled from the embedding Jacobian at finite lambda.
    symplectic::LagrangianPlane asymptotic_plane_from_jacobian(
        int end, double lambda) const;

    // ---- end graphs (Thm-6 coordinates) ----------------------------------
    // Rotated coordinates per end: s^k(l, mu) = mu^k c_k(l),
    // t^k = sign mu^k q_k(l) with c_k = r_k cos(D_k), q_k = r_k sin(D_k),
    // D_k(l) = theta_k(l) - theta_inf_k, evaluated at |lambda|.
    struct GraphPoint {
        double lambda = 0.0;     // positive parameter of the inverted point
        Eigen::VectorXd mu;
        double g = 0.0;
        Eigen::VectorXd grad;
        Eigen::MatrixXd hess;
    };
    /// Inverts the graph projection at base point s (|s| >= R0) and returns
    /// g, grad g, Hess g there. Throws RadiusTooSmall below R0.
    GraphPoint graph_at(int end, const Eigen::VectorXd& s,
                        bool with_g = true) const;
    /// Third-derivative tensor d^3 g, slice j = d(hess)/ds^j, via central
    /// differences of the analytic Hessian.
    std::vector<Eigen::MatrixXd> graph_third(int end,
                                             const Eigen::VectorXd& s) const;
    /// g expressed directly in neck parameters (no inversion).
    double g_at_parameter(int end, double lambda_abs,
                          const Eigen::VectorXd& mu) const;
    /// Hess g at the point s(lambda, mu), from the parameter-space
    /// Jacobians (no inversion).
    Eigen::MatrixXd graph_hess_at_parameter(int end, double lambda_abs,
                                            const Eigen::VectorXd& mu) const;

    /// Fitted Thm-6 Hessian constant sup ||s||^n ||Hess g(s)||.
    double C0() const { return C0_; }

    const std::vector<double>& grid() const { return grid_; }
    const std::vector<Eigen::VectorXd>& grid_theta() const { return tab_; }

private:
    LawlorNeck() = default;

    double integrand(int k, double s) const;
    double tail_integral(int k, double lambda) const;  // positive
    double invert_radius(const Eigen::VectorXd& dir, double radius) const;

    LawlorParams params_;
    double quad_tol_;
    Eigen::VectorXd esym_;      // elementary symmetric polynomials e_1..e_n
    std::vector<double> grid_;  // tabulation nodes, ascending from 0
    std::vector<Eigen::VectorXd> tab_;  // theta values per node
    Eigen::VectorXd theta_inf_;
    double C0_ = 0.0;
};

/// Orthonormal basis of the tangent space of S^{n-1} at mu (columns).
Eigen::MatrixXd sphere_tangent_basis(const Eigen::VectorXd& mu);

AsymptoticGraph asymptotic_graph(const LawlorNeck& neck, int end,
                                 const std::vector<double>& radii,
                                 int dirs_per_radius = 8, unsigned seed = 7);

/// Finds a (gauge-normalized, min a_k = 1) parameter vector whose
/// asymptotic pair realizes the prescribed characteristic angles.
LawlorParams match_angles(const Eigen::VectorXd& targets, double tol);

// JSON cache of a neck tabulation (versioned, text-only).
nlohmann::json neck_to_json(const LawlorNeck& neck);

} // namespace slaglab::lawlor
