#pragma once

#include <Eigen/Dense>

#include "slaglab/json_fwd.hpp"

namespace slaglab::symplectic {

// Coordinates of R^{2n} are ordered (x^1..x^n, y^1..y^n); the complex
// identification is z^k = x^k + i y^k, so a plane basis is stored either as
// a real 2n x n matrix or as the complex n x n matrix of its columns.

/// Symplectic form omega(u, v) = sum_k (u_x^k v_y^k - u_y^k v_x^k).
double omega(const Eigen::VectorXd& u, const Eigen::VectorXd& v);

/// Ambient complex structure J(x, y) = (-y, x).
Eigen::VectorXd apply_J(const Eigen::VectorXd& u);

struct LagrangianPlane {
    Eigen::MatrixXd basis;  // 2n x n, columns orthonormal
    int n = 0;

    static LagrangianPlane from_basis(const Eigen::MatrixXd& basis);
    static LagrangianPlane from_complex(const Eigen::MatrixXcd& V);

    Eigen::MatrixXcd complex_basis() const;

    /// Max orthonormality / omega residual over basis pairs.
    double invariant_residual() const;

    /// Throws NonLagrangianInput when invariant_residual() exceeds tol.
    void validate(double tol = 1e-12) const;
};

/// Normal form of a transversal pair: angles are the per-complex-line
/// angles in (0, pi), sorted descending, and `frame` holds the common
/// Darboux frame E_1..E_n (an orthonormal basis of p1) such that the
/// rebased p2 basis is cos(theta_k) E_k + sin(theta_k) J E_k.
struct PlanePair {
    LagrangianPlane p1, p2;  // rebased to the normal-form frames
    Eigen::VectorXd angles;
    Eigen::MatrixXd frame;   // 2n x n, columns E_k
    int n = 0;
};

PlanePair characteristic_angles(const LagrangianPlane& p1,
                                const LagrangianPlane& p2);

struct CriterionResult {
    bool is_special = false;
    bool satisfies_criterion = false;
    double sum = 0.0;
};

/// Angle-sum test. `is_special` holds when the sum is within tol of a
/// positive multiple of pi. The pair satisfies the gluing criterion when
/// the sum is pi in one of the two labellings of the pair, i.e. the sum is
/// within tol of pi or of (n-1) pi (a swap reflects every angle).
CriterionResult angle_criterion(const PlanePair& pair, double tol);

/// JSON: a plane serializes as an array of 2n-vectors.
nlohmann::json plane_to_json(const LagrangianPlane& p);
LagrangianPlane plane_from_json(const nlohmann::json& j);

} // namespace slaglab::symplectic
