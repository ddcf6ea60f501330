#include "splineortho/knots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <string>

namespace splineortho {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_multiplicities(const std::vector<double>& sorted, int k, const char* what) {
    for (std::size_t i = 0; i < sorted.size();) {
        std::size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
        if (static_cast<int>(j - i + 1) > k)
            throw admissibility_error(std::string(what) + ": point " + std::to_string(sorted[i]) +
                                      " occurs more than k times");
        i = j + 1;
    }
}

}  // namespace

void KnotSequence::validate() const {
    if (k < 2) throw admissibility_error("KnotSequence: order k must be >= 2");
    for (double t : points) {
        if (!(t > 0.0 && t < 1.0))
            throw admissibility_error("KnotSequence: point " + std::to_string(t) +
                                      " not strictly inside (0,1)");
    }
    std::vector<double> sorted(points);
    std::sort(sorted.begin(), sorted.end());
    check_multiplicities(sorted, k, "KnotSequence");
}

Grid::Grid(const KnotSequence& seq, int n) : k_(seq.k), n_(n) {
    if (n < 2) throw admissibility_error("Grid: level n must be >= 2");
    if (n > seq.max_level())
        throw admissibility_error("Grid: level " + std::to_string(n) +
                                  " exceeds the sequence length");
    if (seq.k < 2) throw admissibility_error("Grid: order k must be >= 2");
    std::vector<double> interior(seq.points.begin(), seq.points.begin() + (n - 1));
    for (double t : interior) {
        if (!(t > 0.0 && t < 1.0))
            throw admissibility_error("Grid: interior point not strictly inside (0,1)");
    }
    std::sort(interior.begin(), interior.end());
    check_multiplicities(interior, k_, "Grid");
    tau_.reserve(static_cast<std::size_t>(n + 2 * k_ - 1));
    tau_.insert(tau_.end(), static_cast<std::size_t>(k_), 0.0);
    tau_.insert(tau_.end(), interior.begin(), interior.end());
    tau_.insert(tau_.end(), static_cast<std::size_t>(k_), 1.0);
}

Grid::Grid(int k, int n, std::vector<double> knots) : k_(k), n_(n), tau_(std::move(knots)) {
    if (static_cast<int>(tau_.size()) != n + 2 * k - 1)
        throw admissibility_error("Grid: knot array has wrong length");
}

int Grid::multiplicity(double x) const {
    const auto range = std::equal_range(tau_.begin(), tau_.end(), x);
    return static_cast<int>(range.second - range.first);
}

int Grid::find_span(double x) const {
    if (x >= 1.0) return size() - k_ - 1;  // last span of positive length
    auto it = std::upper_bound(tau_.begin(), tau_.end(), x);
    int mu = static_cast<int>(it - tau_.begin()) - 1;
    if (mu < k_ - 1) mu = k_ - 1;
    return mu;
}

int Grid::new_knot_index(const Grid& coarser) const {
    const auto& a = tau_;
    const auto& b = coarser.tau_;
    for (std::size_t i = 0; i < b.size(); ++i)
        if (a[i] != b[i]) return static_cast<int>(i);
    return static_cast<int>(b.size());
}

GridInterval make_interval(const Grid& grid, int i, int ell) {
    if (ell < 1 || ell > grid.order())
        throw std::invalid_argument("make_interval: ell out of range");
    if (i < grid.order() - ell || i > grid.level() + grid.order() - 2)
        throw std::invalid_argument("make_interval: index out of range");
    return GridInterval{grid.level(), i, ell, grid.knot(i), grid.knot(i + ell)};
}

Grid make_grid(const KnotSequence& seq, int n) { return Grid(seq, n); }

double grid_regularity_ratio(const Grid& grid, int ell, int* worst_i) {
    const int k = grid.order(), n = grid.level();
    double worst = 1.0;
    int wi = k - ell;
    for (int i = k - ell; i <= n + k - 3; ++i) {
        const double a = grid.span_length(i, ell);
        const double b = grid.span_length(i + 1, ell);
        double r;
        if (a == 0.0 && b == 0.0) continue;  // vacuous pair
        if (a == 0.0 || b == 0.0) {
            r = kInf;
        } else {
            r = std::max(a / b, b / a);
        }
        if (r > worst) {
            worst = r;
            wi = i;
        }
    }
    if (worst_i) *worst_i = wi;
    return worst;
}

RegularityReport regularity_parameter(const KnotSequence& seq, int ell, int n_max) {
    if (ell < 1 || ell > seq.k)
        throw std::invalid_argument("regularity_parameter: ell must lie in [1, k]");
    if (n_max < 2) throw std::invalid_argument("regularity_parameter: n_max must be >= 2");
    seq.validate();
    const int last = std::min(n_max, seq.max_level());
    RegularityReport report;
    report.ell = ell;
    std::vector<double> interior;
    interior.reserve(static_cast<std::size_t>(last));
    for (int n = 2; n <= last; ++n) {
        const double t = seq.points[static_cast<std::size_t>(n - 2)];
        interior.insert(std::upper_bound(interior.begin(), interior.end(), t), t);
        std::vector<double> tau;
        tau.reserve(interior.size() + static_cast<std::size_t>(2 * seq.k));
        tau.insert(tau.end(), static_cast<std::size_t>(seq.k), 0.0);
        tau.insert(tau.end(), interior.begin(), interior.end());
        tau.insert(tau.end(), static_cast<std::size_t>(seq.k), 1.0);
        Grid grid(seq.k, n, std::move(tau));
        int wi = 0;
        const double r = grid_regularity_ratio(grid, ell, &wi);
        if (r > report.gamma) {
            report.gamma = r;
            report.witness_n = n;
            report.witness_i = wi;
            if (r == kInf) break;
        }
    }
    return report;
}

bool nested_decay_check(const std::vector<GridInterval>& chain, double gamma, int ell) {
    if (ell < 1) throw std::invalid_argument("nested_decay_check: ell must be >= 1");
    const std::size_t window = static_cast<std::size_t>(2 * ell);
    if (chain.size() < window)
        throw std::invalid_argument("nested_decay_check: chain shorter than 2*ell");
    for (std::size_t m = 0; m + 1 < chain.size(); ++m) {
        if (!chain[m].strictly_contains(chain[m + 1]))
            throw std::invalid_argument("nested_decay_check: chain is not strictly nested");
    }
    const double ge = std::pow(gamma, ell);
    const double factor = ge / (1.0 + ge);
    for (std::size_t m = 0; m + window <= chain.size(); ++m) {
        const double first = chain[m].length();
        const double last = chain[m + window - 1].length();
        if (last > factor * first * (1.0 + 1e-14)) return false;
    }
    return true;
}

int count_points_between(const Grid& grid, const Segment& a, const Segment& b) {
    Segment lo = a, hi = b;
    if (lo.a > lo.b) std::swap(lo.a, lo.b);
    if (hi.a > hi.b) std::swap(hi.a, hi.b);
    if (lo.a == hi.a && lo.b == hi.b) return 0;
    if (lo.a > hi.a) std::swap(lo, hi);
    if (lo.b > hi.a) return 0;  // proper overlap
    const double left = lo.b, right = hi.a;
    const auto knots = grid.knots();
    auto first = std::upper_bound(knots.begin(), knots.end(), left);
    auto past = std::lower_bound(knots.begin(), knots.end(), right);
    int count = static_cast<int>(std::max<std::ptrdiff_t>(0, past - first));
    if (left == right) {
        if (grid.multiplicity(left) > 0) ++count;  // shared endpoint, once
    } else {
        if (grid.multiplicity(left) > 0) ++count;
        if (grid.multiplicity(right) > 0) ++count;
    }
    return count;
}

std::optional<std::vector<GridInterval>> sample_nested_chain(const KnotSequence& seq, int ell,
                                                             int length, int n_max, Rng& rng) {
    if (ell < 1 || ell > seq.k || length < 2) return std::nullopt;
    const int k = seq.k;
    const int last = std::min(n_max, seq.max_level());
    const double x = rng.uniform();
    std::vector<GridInterval> chain;
    std::vector<double> interior;
    for (int n = 2; n <= last; ++n) {
        const double t = seq.points[static_cast<std::size_t>(n - 2)];
        interior.insert(std::upper_bound(interior.begin(), interior.end(), t), t);
        std::vector<double> tau;
        tau.insert(tau.end(), static_cast<std::size_t>(k), 0.0);
        tau.insert(tau.end(), interior.begin(), interior.end());
        tau.insert(tau.end(), static_cast<std::size_t>(k), 1.0);
        Grid grid(k, n, std::move(tau));
        const int mu = grid.find_span(x);
        // Candidate covering ell-spans: i in [mu-ell+1, mu], clipped to range.
        const int lo = std::max(k - ell, mu - ell + 1);
        const int hi = std::min(grid.level() + k - 2, mu);
        if (lo > hi) continue;
        const int i = lo + static_cast<int>(rng.uniform_int(hi - lo + 1));
        const GridInterval cand = make_interval(grid, i, ell);
        if (cand.length() <= 0.0) continue;
        if (chain.empty() || chain.back().strictly_contains(cand)) chain.push_back(cand);
        if (static_cast<int>(chain.size()) >= length) break;
    }
    if (static_cast<int>(chain.size()) < length) return std::nullopt;
    chain.resize(static_cast<std::size_t>(length));
    return chain;
}

KnotSequence dyadic_sequence(int k, int count) {
    KnotSequence seq;
    seq.k = k;
    seq.points.reserve(static_cast<std::size_t>(count));
    for (int level = 1; static_cast<int>(seq.points.size()) < count; ++level) {
        const double h = std::ldexp(1.0, -level);
        for (int j = 1; j < (1 << level) && static_cast<int>(seq.points.size()) < count; j += 2)
            seq.points.push_back(static_cast<double>(j) * h);
    }
    return seq;
}

KnotSequence uniform_sequence(int k, int count) {
    KnotSequence seq;
    seq.k = k;
    seq.points.reserve(static_cast<std::size_t>(count));
    for (int j = 1; j <= count; ++j)
        seq.points.push_back(static_cast<double>(j) / static_cast<double>(count + 1));
    return seq;
}

KnotSequence random_sequence(int k, int count, Rng& rng, double repeat_prob) {
    KnotSequence seq;
    seq.k = k;
    seq.points.reserve(static_cast<std::size_t>(count));
    std::map<double, int> mult;
    while (static_cast<int>(seq.points.size()) < count) {
        if (repeat_prob > 0.0 && !seq.points.empty() && rng.uniform() < repeat_prob) {
            const double t =
                seq.points[static_cast<std::size_t>(rng.uniform_int(
                    static_cast<std::int64_t>(seq.points.size())))];
            if (mult[t] < k) {
                ++mult[t];
                seq.points.push_back(t);
            }
            continue;
        }
        double t = rng.uniform();
        if (t <= 0.0 || t >= 1.0) continue;
        ++mult[t];
        seq.points.push_back(t);
    }
    return seq;
}

}  // namespace splineortho
