#pragma once

#include <functional>
#include <vector>

namespace splineortho {

/// Gauss-Legendre rule on [-1, 1]; exact for polynomials of degree 2n - 1.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussRule& gauss_rule(int n);

/// n-point Gauss integral of f over [a, b].
double gauss_integrate(const std::function<double(double)>& f, double a, double b, int n);

/// Adaptive Simpson integral of f over [a, b].
double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, int max_depth = 40);

/// Integral of |f| over [a, b] for polynomial f of the given degree: exact
/// Gauss where f keeps one sign (detected at probe points), bisection around
/// sign changes.
double integrate_abs_poly(const std::function<double(double)>& f, double a, double b,
                          int degree, double rel_tol = 1e-12);

}  // namespace splineortho
