#pragma once

#include <functional>
#include <span>
#include <vector>

#include "splineortho/orthosys.hpp"

namespace splineortho {

/// Piecewise polynomial input for expansions: an evaluator together with its
/// breakpoints and maximal per-piece degree (0 for step functions). Quadrature
/// against splines is exact once the breakpoints are merged.
struct PiecewiseFunction {
    std::vector<double> breaks;  // sorted, within [0, 1]
    std::function<double(double)> eval;
    int degree = 0;
};

/// Right-continuous step function on [0, 1].
struct StepFunction {
    std::vector<double> breaks;  // size values.size() + 1, first 0, last 1
    std::vector<double> values;

    double operator()(double x) const;
    double integral(double a, double b) const;
    double integral() const { return integral(breaks.front(), breaks.back()); }
    double abs_integral(double a, double b) const;
    double sup_abs(double a, double b) const;
    PiecewiseFunction as_piecewise() const;
};

/// Sorted union of disjoint closed intervals (touching parts are merged).
struct IntervalSet {
    std::vector<std::pair<double, double>> parts;

    double measure() const;
    bool empty() const { return parts.empty(); }
    void add(double lo, double hi);  // keeps the representation normalized
};

/// Superlevel set [M 1_E > c] of the Hardy-Littlewood maximal function of an
/// indicator; exact for step-function data.
IntervalSet maximal_superlevel(const IntervalSet& E, double c);

/// An atom: the constant 1, or a mean-zero step profile supported on Gamma
/// with sup bounded by |Gamma|^{-1}.
struct Atom {
    bool constant_one = false;
    double lo = 0.0, hi = 1.0;  // Gamma
    StepFunction profile;       // zero outside Gamma

    double length() const { return hi - lo; }
    /// Largest violation of the support/sup/mean-zero rules, scaled so that a
    /// valid atom returns ~1e-16 and anything real fails by orders of magnitude.
    double invariant_defect() const;
    bool valid(double tol = 1e-10) const { return invariant_defect() <= tol; }
    PiecewiseFunction as_piecewise() const;
};

Atom random_atom(Rng& rng, int max_pieces = 4);

struct AtomicDecomposition {
    double eta0 = 0.0;  // weight of the constant-one atom
    struct Term {
        double eta = 0.0;
        int level = 0;
        Atom atom;
    };
    std::vector<Term> terms;
    double scale_constant = 1.0;      // the power-of-two normalizer
    bool truncated = false;           // level cap reached before B_r emptied
    int levels_used = 0;
    double reconstruction_error = 0.0;  // L1 distance to the decomposed profile

    double weight_sum() const;
};

/// Coefficients of a function against the system, plus the evaluation caches
/// for the square and maximal functions. The system must outlive the
/// expansion.
class Expansion {
public:
    Expansion(const OrthoSystem& system, std::vector<double> coeffs);

    const OrthoSystem& system() const { return *sys_; }
    std::span<const double> coeffs() const { return a_; }

    /// P(x) = (sum_n a_n^2 f_n(x)^2)^{1/2}.
    double square_function(double x) const;
    /// S(x) = max_m |sum_{n <= m} a_n f_n(x)|.
    double maximal_function(double x) const;
    /// Partial sum through member m.
    double partial_sum(int m, double x) const;
    double reconstruction(double x) const { return partial_sum(sys_->size() - 1, x); }

    /// a_n f_n(x) for every member, written to out[0..size).
    void terms_at(double x, double* out) const;

private:
    const OrthoSystem* sys_;
    std::vector<double> a_;
    std::vector<std::vector<double>> prefix_;  // prefix fine-grid coefficients
};

Expansion expand(const PiecewiseFunction& f, const OrthoSystem& system);

/// ||P||_1 by adaptive quadrature on the finest grid.
double sq_norm1(const Expansion& e, double rel_tol = 1e-6);

/// ||S||_1 sampled on Gauss points per finest interval, refined until the
/// relative change drops below 1e-4.
double max_norm1(const Expansion& e);

/// Hardy-Littlewood maximal function of a step function at x; the supremum is
/// attained on intervals with endpoints among the breakpoints and x itself,
/// which makes this exact.
double hl_maximal(const StepFunction& f, double x);

/// Monte Carlo estimate of sup over sign flips of ||sum eps_n a_n f_n||_1;
/// deterministic under the seed, monotone in the trial count.
double sign_flip_supremum(const Expansion& e, int trials, std::uint64_t seed);

/// L1 norm of the spline with the given fine-grid coefficients.
double combined_l1_norm(const OrthoSystem& system, std::span<const double> fine_coeffs);

struct AtomicDecomposeOptions {
    int levels = 40;
    double c_threshold = 0.4;  // the constant of B_r = [M 1_{E_r} > c]
    int subdivisions = 8;      // step-profile resolution per finest knot span
};

/// Constructive atomic decomposition from the maximal-function level sets
/// E_r = [S > 2^r]: stopping-time intervals from the maximal function of
/// indicators, interval averages between levels, power-of-two normalization.
AtomicDecomposition atomic_decompose(const Expansion& e,
                                     const AtomicDecomposeOptions& opts = {});

struct EquivalenceReport {
    double atomic_weight = 0.0;  // sum |eta| including the constant term
    double max_norm = 0.0;       // ||S||_1
    double square_norm = 0.0;    // ||P||_1
    double flip_supremum = 0.0;  // sup over sampled sign flips
};

EquivalenceReport equivalence_report(const PiecewiseFunction& f, const OrthoSystem& system,
                                     int trials, std::uint64_t seed);

}  // namespace splineortho
