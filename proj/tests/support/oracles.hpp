#pragma once

#include <vector>

#include "splineortho/knots.hpp"

namespace splineortho::test {

/// Naive recursive B-spline value of order p at x (0-based index i); kept
/// deliberately independent of the library's triangular evaluation scheme.
long double bspline_recursive(const std::vector<long double>& knots, int i, int p, long double x);

/// Knot array of T_m in long double (m >= 1; m = 1 holds only the boundary).
std::vector<long double> knot_array(const KnotSequence& seq, int m);

/// Reference coefficients of the orthonormal spline function at level n:
/// the null space of the cross-Gram matrix against the coarser basis, in
/// long double, normalized in L2. The global sign is arbitrary.
std::vector<double> reference_orthonormal_coeffs(const KnotSequence& seq, int n);

/// Dense inverse of a symmetric positive definite matrix (row-major n x n)
/// by Gauss-Jordan elimination.
std::vector<double> dense_spd_inverse(std::vector<double> a, int n);

/// Adaptive Simpson integral in long double.
long double adaptive_simpson_ld(const std::function<long double(long double)>& f, long double a,
                                long double b, long double tol, int depth = 48);

}  // namespace splineortho::test
