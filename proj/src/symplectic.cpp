#include "slaglab/symplectic.hpp"
#include "slaglab/error.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace slaglab::symplectic {

using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::VectorXd;
using std::numbers::pi;

double omega(const VectorXd& u, const VectorXd& v) {
    const int n = static_cast<int>(u.size()) / 2;
    return u.head(n).dot(v.tail(n)) - u.tail(n).dot(v.head(n));
}

Eigen::VectorXd apply_J(const VectorXd& u) {
    const int n = static_cast<int>(u.size()) / 2;
    VectorXd out(2 * n);
    out.head(n) = -u.tail(n);
    out.tail(n) = u.head(n);
    return out;
}

LagrangianPlane LagrangianPlane::from_basis(const MatrixXd& basis) {
    LagrangianPlane p;
    p.basis = basis;
    p.n = static_cast<int>(basis.cols());
    if (basis.rows() != 2 * p.n)
        throw DimensionMismatch("plane basis must be 2n x n");
    return p;
}

LagrangianPlane LagrangianPlane::from_complex(const MatrixXcd& V) {
    const int n = static_cast<int>(V.cols());
    MatrixXd basis(2 * n, n);
    basis.topRows(n) = V.real();
    basis.bottomRows(n) = V.imag();
    return from_basis(basis);
}

MatrixXcd LagrangianPlane::complex_basis() const {
    MatrixXcd V(n, n);
    V.real() = basis.topRows(n);
    V.imag() = basis.bottomRows(n);
    return V;
}

double LagrangianPlane::invariant_residual() const {
    // V^H V = (orthonormality) + i (omega pairings); both must be I + i 0.
    const MatrixXcd V = complex_basis();
    const MatrixXcd G = V.adjoint() * V;
    return (G - MatrixXcd::Identity(n, n)).cwiseAbs().maxCoeff();
}

void LagrangianPlane::validate(double tol) const {
    const double r = invariant_residual();
    if (!(r <= tol))
        throw NonLagrangianInput("plane basis residual " + std::to_string(r) +
                                 " exceeds tolerance");
}

namespace {

// Simultaneous eigenbasis of the commuting real-symmetric pair
// (Re A, Im A) for a complex-symmetric unitary A; returns real orthogonal Q
// with Q^T A Q diagonal.
MatrixXd simultaneous_diagonalize(const MatrixXcd& A) {
    const int n = static_cast<int>(A.rows());
    const MatrixXd re = 0.5 * (A.real() + A.real().transpose());
    const MatrixXd im = 0.5 * (A.imag() + A.imag().transpose());
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(re);
    MatrixXd Q = es.eigenvectors();
    const VectorXd ev = es.eigenvalues();
    // refine within clusters of Re A so Im A becomes diagonal there too
    int start = 0;
    while (start < n) {
        int end = start + 1;
        while (end < n && std::abs(ev(end) - ev(start)) <= 1e-8) ++end;
        if (end - start > 1) {
            const MatrixXd block =
                Q.middleCols(start, end - start).transpose() * im *
                Q.middleCols(start, end - start);
            Eigen::SelfAdjointEigenSolver<MatrixXd> bs(
                0.5 * (block + block.transpose()));
            Q.middleCols(start, end - start) =
                Q.middleCols(start, end - start) * bs.eigenvectors();
        }
        start = end;
    }
    return Q;
}

} // namespace

PlanePair characteristic_angles(const LagrangianPlane& p1,
                                const LagrangianPlane& p2) {
    if (p1.n != p2.n) throw DimensionMismatch("plane dimensions differ");
    p1.validate();
    p2.validate();
    const int n = p1.n;

    const MatrixXcd V1 = p1.complex_basis();
    const MatrixXcd V2 = p2.complex_basis();
    const MatrixXcd W = V1.adjoint() * V2;
    const MatrixXcd A = W * W.transpose();

    const MatrixXd Q = simultaneous_diagonalize(A);
    const MatrixXcd D2 = Q.transpose() * A * Q;

    // eigenvalue e^{2 i theta} -> line angle theta in [0, pi)
    VectorXd theta(n);
    Eigen::VectorXcd d(n);
    for (int k = 0; k < n; ++k) {
        double t = 0.5 * std::atan2(D2(k, k).imag(), D2(k, k).real());
        if (t < 0.0) t += pi;
        theta(k) = t;
        d(k) = std::polar(1.0, t);
    }

    for (int k = 0; k < n; ++k) {
        const double gap = std::min(theta(k), pi - theta(k));
        if (gap < 1e-8)
            throw NotTransversal("characteristic angle " + std::to_string(gap) +
                                 " rad below transversality tolerance");
    }

    // W = Q D O2^T with O2 real orthogonal; recover and re-base p2
    Eigen::VectorXcd dinv(n);
    for (int k = 0; k < n; ++k) dinv(k) = 1.0 / d(k);
    const MatrixXcd O2c = (dinv.asDiagonal() * (Q.transpose() * W)).transpose();
    if (O2c.imag().cwiseAbs().maxCoeff() > 1e-7)
        throw NonLagrangianInput(
            "normal-form recovery failed; inputs are not a unitary pair");
    MatrixXd O2 = O2c.real();

    // sort descending, permuting the frame consistently
    std::vector<int> idx(n);
    for (int k = 0; k < n; ++k) idx[k] = k;
    std::sort(idx.begin(), idx.end(),
              [&](int a, int b) { return theta(a) > theta(b); });

    VectorXd theta_sorted(n);
    MatrixXd Qs(n, n);
    MatrixXd O2s(n, n);
    Eigen::VectorXcd ds(n);
    for (int k = 0; k < n; ++k) {
        theta_sorted(k) = theta(idx[k]);
        Qs.col(k) = Q.col(idx[k]);
        O2s.col(k) = O2.col(idx[k]);
        ds(k) = d(idx[k]);
    }

    PlanePair pair;
    pair.n = n;
    pair.angles = theta_sorted;
    const MatrixXcd E = V1 * Qs;
    pair.frame.resize(2 * n, n);
    pair.frame.topRows(n) = E.real();
    pair.frame.bottomRows(n) = E.imag();
    pair.p1 = LagrangianPlane::from_complex(E);
    pair.p2 = LagrangianPlane::from_complex(E * ds.asDiagonal());
    return pair;
}

CriterionResult angle_criterion(const PlanePair& pair, double tol) {
    CriterionResult r;
    r.sum = pair.angles.sum();
    const double m = std::round(r.sum / pi);
    r.is_special = m >= 1.0 && std::abs(r.sum - m * pi) <= tol;
    const double swap_sum = pair.n * pi - r.sum;  // relabelling the planes
    r.satisfies_criterion =
        std::abs(r.sum - pi) <= tol || std::abs(swap_sum - pi) <= tol;
    return r;
}

nlohmann::json plane_to_json(const LagrangianPlane& p) {
    nlohmann::json out = nlohmann::json::array();
    for (int k = 0; k < p.n; ++k) {
        nlohmann::json vec = nlohmann::json::array();
        for (int i = 0; i < 2 * p.n; ++i) vec.push_back(p.basis(i, k));
        out.push_back(vec);
    }
    return out;
}

LagrangianPlane plane_from_json(const nlohmann::json& j) {
    if (!j.is_array() || j.empty())
        throw ParseError("plane must be a non-empty array of 2n-vectors");
    const int n = static_cast<int>(j.size());
    MatrixXd basis(2 * n, n);
    for (int k = 0; k < n; ++k) {
        if (!j[k].is_array() || static_cast<int>(j[k].size()) != 2 * n)
            throw ParseError("plane vector " + std::to_string(k) +
                             " must have length 2n");
        for (int i = 0; i < 2 * n; ++i) basis(i, k) = j[k][i].get<double>();
    }
    return LagrangianPlane::from_basis(basis);
}

} // namespace slaglab::symplectic
