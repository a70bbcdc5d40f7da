#pragma once

#include <functional>

namespace slaglab {

/// Adaptive quadrature on a finite interval. The error estimate for each
/// interval compares a 5-point Gauss--Legendre value against the sum over
/// the two halves; intervals failing the tolerance are bisected.
/// Throws QuadratureNonConvergence when the interval stack exceeds its
/// depth budget before reaching `abs_tol`.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol);

/// Single 5-point Gauss--Legendre panel on [a, b]; no error control.
double gauss5(const std::function<double(double)>& f, double a, double b);

/// 15-point Gauss--Legendre panel on [a, b]; used for short certified hops
/// between tabulated nodes.
double gauss15(const std::function<double(double)>& f, double a, double b);

} // namespace slaglab
