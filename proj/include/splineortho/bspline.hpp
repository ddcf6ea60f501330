#pragma once

#include <span>
#include <stdexcept>
#include <vector>

#include "splineortho/knots.hpp"

namespace splineortho {

/// Raised by the banded factorization on a non-positive pivot.
class factorization_error : public std::runtime_error {
public:
    factorization_error(const std::string& msg, int pivot)
        : std::runtime_error(msg), pivot_index(pivot) {}
    int pivot_index;
};

/// B-spline basis of the given order on a grid, normalized to a partition of
/// unity. `order` may be smaller than the grid's k (used by derivatives); the
/// basis then contains zero-length-support members near the boundary whose
/// value is identically zero.
class BSplineBasis {
public:
    BSplineBasis(const Grid& grid, int order);
    explicit BSplineBasis(const Grid& grid) : BSplineBasis(grid, grid.order()) {}

    const Grid& grid() const { return *grid_; }
    int order() const { return order_; }
    int dim() const { return grid_->size() - order_; }

    /// Support of basis function i: [knot(i), knot(i + order)].
    double support_left(int i) const { return grid_->knot(i); }
    double support_right(int i) const { return grid_->knot(i + order_); }

    /// Value of N_i(x); right-continuous at interior knots, left-continuous at 1.
    double evaluate(int i, double x) const;

    /// Values of the `order` basis functions that can be nonzero at x:
    /// indices first_index .. first_index + order - 1. `values` must have room
    /// for `order` entries.
    void evaluate_all(double x, int& first_index, double* values) const;

private:
    const Grid* grid_;
    int order_;
};

/// Spline as coefficients against a basis. The basis (and its grid) must
/// outlive the spline.
struct Spline {
    BSplineBasis basis;
    std::vector<double> coeffs;

    double operator()(double x) const;
};

/// Derivative as a spline of order k-1 on the same grid. Terms whose (k-1)-span
/// has zero length are dropped (their B-spline vanishes a.e.).
Spline derivative(const Spline& s);

/// Symmetric positive definite band matrix, upper storage.
class SymmetricBandMatrix {
public:
    SymmetricBandMatrix(int dim, int bandwidth);

    int dim() const { return dim_; }
    int bandwidth() const { return bw_; }

    double at(int i, int j) const;
    void add(int i, int j, double v);  // j >= i, j - i <= bandwidth
    void set(int i, int j, double v);

    /// Banded Cholesky (no pivoting). Throws factorization_error on a
    /// non-positive pivot, naming its index.
    SymmetricBandMatrix cholesky() const;

    /// Solves A x = rhs given that *this holds the Cholesky factor.
    std::vector<double> solve_with_factor(std::span<const double> rhs) const;

    /// Quadratic form x' A x.
    double quadratic_form(std::span<const double> x) const;

    /// y = A x.
    std::vector<double> multiply(std::span<const double> x) const;

private:
    int dim_;
    int bw_;
    std::vector<double> data_;  // data_[i*(bw+1) + (j-i)] = A(i, j), j in [i, i+bw]
};

/// Gram matrix <N_i, N_j> of a basis; bandwidth order-1, entries exact to
/// quadrature precision (order-point Gauss per knot span).
SymmetricBandMatrix gram(const BSplineBasis& basis);

/// Selected rows of the inverse Gram matrix (the dual-function coefficients).
struct GramInverseRows {
    std::vector<int> row_indices;
    std::vector<std::vector<double>> rows;

    const std::vector<double>& row(int j) const;
};

/// Solves G b_j = e_j for each requested row via banded Cholesky after
/// symmetric diagonal scaling.
GramInverseRows dual_rows(const SymmetricBandMatrix& g, std::span<const int> rows);

struct StabilityReport {
    /// max_j |a_j| |J_j|^{1/p} / ||s||_{L^p(J_j)} over the largest knot
    /// interval J_j inside each coefficient's support.
    double local_ratio = 1.0;
    /// ||s||_p / ||(a_j |D_j|^{1/p})||_{l^p}.
    double global_ratio = 1.0;
};

/// Both ratios of the L^p coefficient stability estimates; (1, 1) for the
/// zero spline by convention.
StabilityReport stability_report(const Spline& s, double p);

/// ||s||_{L^p(a,b)} for p in [1, inf]; p = inf is the sup over samples at
/// Gauss nodes and span endpoints.
double spline_lp_norm(const Spline& s, double p, double a, double b);

/// Boehm single-knot insertion: coefficients of the same spline after x is
/// inserted into the knot array.
std::vector<double> insert_knot(std::span<const double> knots, int order,
                                std::span<const double> coeffs, double x);

/// Coefficients representing the polynomial sum_m mono[m] x^m (degree <
/// order) on the Bernstein knot array (0 x order, 1 x order).
std::vector<double> monomial_to_bernstein(std::span<const double> mono, int order);

/// Coefficients of a polynomial (monomial basis, degree < grid order) as a
/// spline on the full grid: Bernstein representation plus knot insertion.
std::vector<double> polynomial_on_grid(std::span<const double> mono, const Grid& grid);

}  // namespace splineortho
