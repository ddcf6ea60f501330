#pragma once

#include <memory>
#include <span>
#include <vector>

#include "splineortho/bspline.hpp"
#include "splineortho/knots.hpp"

namespace splineortho {

/// The alternating coefficients attached to an inserted knot: values alpha_j
/// for j = insert_index - k .. insert_index (0-based window into the grid's
/// coefficient indices). Signs alternate and |alpha_j| <= 1.
struct AlphaVector {
    int insert_index = 0;  // 0-based position of the new knot in T_n
    std::vector<double> values;

    int window_lo() const { return insert_index - static_cast<int>(values.size()) + 1; }
    double at(int j) const { return values[static_cast<std::size_t>(j - window_lo())]; }
};

/// Outcome of the characteristic-interval selection: the near-minimal support
/// window Lambda0, the max-|alpha| subset Lambda1, the fixed index j0 and the
/// chosen grid interval J.
struct CharacteristicSelection {
    std::vector<int> lambda0;
    std::vector<int> lambda1;
    int j0 = 0;
    GridInterval J;
};

/// One orthonormal spline function f_n: unit-norm coefficients over the T_n
/// B-spline basis, the norm of the unnormalized function it was built from,
/// and its characteristic interval. Keeps its grid alive for standalone use.
struct OrthoFunction {
    int n = 2;
    int i0 = 0;  // 0-based index of the knot inserted into T_{n-1}
    std::shared_ptr<const Grid> grid;
    std::vector<double> coeffs;  // f_n = sum coeffs[j] N_j, ||f_n||_2 = 1
    double gnorm = 1.0;          // L2 norm of the unnormalized function g
    int j0 = 0;
    GridInterval J;

    double operator()(double x) const;
    /// Coefficients of the unnormalized g (coeffs * gnorm).
    std::vector<double> unnormalized() const;
};

/// Exponential-decay diagnostics for one f_n: the smallest constant C on a
/// ladder of decay bases q covering the coefficient bound and the one-sided
/// L^p tail bounds, plus concentration and peak-coefficient ratios.
struct DecayReport {
    double q = 0.0;
    double C = 0.0;
    std::vector<double> ladder_q;
    std::vector<double> ladder_C;
    double coeff_slope = 0.0;        // slope of log|w_j| against d_n(tau_j)
    double concentration_l1 = 0.0;   // ||f||_{L^p(J)} / ||f||_p for p = 1, 2, inf
    double concentration_l2 = 0.0;
    double concentration_sup = 0.0;
    double peak_ratio = 0.0;         // |w_{j0}| / b_{j0,j0}
};

struct CharCombinatorics {
    double n0_max = 0.0;             // card{n : J_n inside [x,y], |J_n| >= |[x,y]|/2}
    double offsupport_ratio_max = 0.0;  // sum |J_n|^{1/2} int_{V^c} |f_n| / |V|
    double nsum_max = 0.0;           // (1/|Delta|) sum_{N(Delta)} |J_n|
    double msum_max = 0.0;           // sum_{M(Delta,l)} |J_n|/(dist+|Delta|) / (l+1)^2
};

class OrthoSystem;

/// Orthonormal polynomials on [0,1] of degrees 0..k-2 (shifted Legendre with
/// positive leading coefficient), as monomial coefficient vectors.
std::vector<std::vector<double>> initial_polynomials(int k);

/// Coefficients alpha_j for the window around the knot inserted at
/// insert_index (0-based) in grid_n; empty products in the defining formula
/// equal 1.
AlphaVector alpha_coefficients(const Grid& grid_n, int insert_index);

/// Characteristic-interval selection: indices j with support length at most
/// twice the window minimum, then the largest |alpha_j| among them, smallest
/// index on ties; J is the leftmost longest grid interval of [tau_j0,
/// tau_{j0+k}]. `support_factor` is the constant 2 of the near-minimal test.
CharacteristicSelection characteristic_interval(const Grid& grid_n, int insert_index,
                                                const AlphaVector& alpha,
                                                double support_factor = 2.0);

/// Builds f_n from the grids T_n and T_{n-1}: alpha coefficients, Gram-inverse
/// rows, normalization, sign fixed so the j0 coefficient is positive.
OrthoFunction orthonormal_function(const KnotSequence& seq, int n,
                                   double support_factor = 2.0);

/// Decay diagnostics for one orthonormal spline function.
DecayReport decay_report(const OrthoFunction& f);

/// The full system f_{-k+2}, ..., f_N: the polynomial part followed by one
/// spline function per inserted knot. Members are also kept as coefficient
/// vectors on the finest grid T_N, which makes evaluation and inner products
/// O(k) per member after a span lookup.
class OrthoSystem {
public:
    OrthoSystem(KnotSequence seq, int max_level, std::vector<std::vector<double>> poly,
                std::vector<OrthoFunction> funcs);

    int order() const { return seq_.k; }
    int max_level() const { return level_; }
    int size() const { return level_ + order() - 1; }

    /// Member index m in [0, size) corresponds to n = m - k + 2.
    int level_of(int member) const { return member - order() + 2; }
    int member_of_level(int n) const { return n + order() - 2; }

    bool is_polynomial(int member) const { return level_of(member) <= 1; }
    const std::vector<double>& polynomial_coeffs(int member) const;
    const OrthoFunction& function(int member) const;
    const OrthoFunction& function_at_level(int n) const { return function(member_of_level(n)); }

    const KnotSequence& sequence() const { return seq_; }
    const Grid& fine_grid() const { return *fine_grid_; }
    const BSplineBasis& fine_basis() const { return fine_basis_; }

    /// Coefficients of member m over the T_N basis.
    std::span<const double> fine_coeffs(int member) const;

    double eval(int member, double x) const;

    /// Fine-grid coefficients of sum_m a[m] * f_m.
    std::vector<double> combine(std::span<const double> a) const;

    /// Values of every member at x, written to out[0..size).
    void eval_all(double x, double* out) const;

private:
    KnotSequence seq_;
    int level_;
    std::vector<std::vector<double>> poly_;
    std::vector<OrthoFunction> funcs_;
    std::shared_ptr<const Grid> fine_grid_;
    BSplineBasis fine_basis_;
    std::vector<std::vector<double>> fine_coeffs_;
};

OrthoSystem build_system(const KnotSequence& seq, int max_level,
                         double support_factor = 2.0);

/// Max-norm distance of the system's Gramian from the identity.
double orthonormality_defect(const OrthoSystem& system);

struct CharCombinatoricsParams {
    int max_pairs = 20000;      // knot pairs sampled for the N_0 count
    int max_intervals = 100;    // intervals V / Delta sampled
    std::uint64_t seed = 1;
};

CharCombinatorics char_combinatorics(const OrthoSystem& system,
                                     const CharCombinatoricsParams& params);

}  // namespace splineortho
