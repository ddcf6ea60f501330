#pragma once

#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "splineortho/util.hpp"

namespace splineortho {

/// Raised when a point sequence or grid violates the multiplicity/range rules.
class admissibility_error : public std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A point sequence t_2, t_3, ... in the open unit interval; t_0 = 0 and
/// t_1 = 1 are implicit. Each value may occur at most `k` times. Knot values
/// are compared exactly (sequences here are generated, not measured).
struct KnotSequence {
    int k = 2;
    std::vector<double> points;

    /// Largest n for which a grid T_n exists.
    int max_level() const { return static_cast<int>(points.size()) + 1; }

    void validate() const;  // throws admissibility_error
};

/// The grid T_n: k copies of 0, then t_2..t_n sorted with multiplicities,
/// then k copies of 1. Indices are 0-based throughout; the spline space on
/// T_n has dimension n + k - 1.
class Grid {
public:
    Grid(const KnotSequence& seq, int n);
    Grid(int k, int n, std::vector<double> knots);  // knots already assembled

    int order() const { return k_; }
    int level() const { return n_; }
    int size() const { return static_cast<int>(tau_.size()); }  // n + 2k - 1
    int dim() const { return n_ + k_ - 1; }

    double knot(int i) const { return tau_[static_cast<std::size_t>(i)]; }
    std::span<const double> knots() const { return tau_; }

    /// Length of the ell-span [tau_i, tau_{i+ell}].
    double span_length(int i, int ell) const {
        return tau_[static_cast<std::size_t>(i + ell)] - tau_[static_cast<std::size_t>(i)];
    }

    /// Number of occurrences of x among the knots (0 when x is not a knot).
    int multiplicity(double x) const;

    /// Rightmost i with knot(i) <= x < knot(i+1); for x = 1 the last span of
    /// positive length. This fixes values as right-continuous at interior
    /// knots and left-continuous at 1.
    int find_span(double x) const;

    /// Index of the knot that is present here but not in `coarser`
    /// (first position where the two knot arrays differ).
    int new_knot_index(const Grid& coarser) const;

private:
    int k_ = 2;
    int n_ = 2;
    std::vector<double> tau_;
};

/// One interval D^{(ell)}_{n,i} = [tau_{n,i}, tau_{n,i+ell}].
struct GridInterval {
    int n = 0;
    int i = 0;  // 0-based index into T_n
    int ell = 1;
    double left = 0.0;
    double right = 0.0;

    double length() const { return right - left; }
    bool contains(const GridInterval& other) const {
        return left <= other.left && other.right <= right;
    }
    bool strictly_contains(const GridInterval& other) const {
        return contains(other) && (left < other.left || other.right < right);
    }
};

GridInterval make_interval(const Grid& grid, int i, int ell);

/// A point or closed interval used by the grid-point counting convention.
struct Segment {
    double a = 0.0;
    double b = 0.0;
    Segment() = default;
    Segment(double x) : a(x), b(x) {}  // NOLINT: implicit by design
    Segment(double lo, double hi) : a(lo), b(hi) {}
    Segment(const GridInterval& iv) : a(iv.left), b(iv.right) {}  // NOLINT
};

struct RegularityReport {
    int ell = 1;
    double gamma = 1.0;  // +infinity when a zero-length span neighbors a positive one
    int witness_n = 0;
    int witness_i = 0;  // 0-based left index of the worst neighboring pair
};

Grid make_grid(const KnotSequence& seq, int n);

/// Max two-sided neighbor ratio of ell-spans over one grid (0-based indices
/// k-ell .. n+k-3 paired with their right neighbors). Adjacent zero-length
/// spans are skipped; zero next to positive yields +infinity.
double grid_regularity_ratio(const Grid& grid, int ell, int* worst_i = nullptr);

/// Smallest gamma bounding all neighbor ratios of ell-spans over the grids
/// T_2..T_{n_max}.
RegularityReport regularity_parameter(const KnotSequence& seq, int ell, int n_max);

/// Checks |last| <= gamma^ell/(1+gamma^ell) * |first| over every window of
/// 2*ell consecutive members of a strictly decreasing chain of ell-spans.
/// Throws std::invalid_argument when the chain is not strictly nested or is
/// shorter than 2*ell.
bool nested_decay_check(const std::vector<GridInterval>& chain, double gamma, int ell);

/// Number of grid points between the sets a and b: full multiplicities for
/// knots strictly between them, plus one for the facing endpoint of each set
/// when that endpoint is a knot (a shared endpoint counts once). Identical or
/// properly overlapping sets give 0. Realizes d_n(x) and d_n(V) when b is the
/// characteristic interval.
int count_points_between(const Grid& grid, const Segment& a, const Segment& b);

/// Random strictly-nested chain of ell-spans of the given length, drawn by
/// tracking the spans around a random point while the grids refine. Empty when
/// n_max does not provide enough refinement near the sampled point.
std::optional<std::vector<GridInterval>> sample_nested_chain(const KnotSequence& seq, int ell,
                                                             int length, int n_max, Rng& rng);

// Sequence generators.
KnotSequence dyadic_sequence(int k, int count);
KnotSequence uniform_sequence(int k, int count);
KnotSequence random_sequence(int k, int count, Rng& rng, double repeat_prob = 0.0);

}  // namespace splineortho
