#include "splineortho/analysis.hpp"

#include <algorithm>
#include <cmath>

#include "splineortho/quadrature.hpp"

namespace splineortho {

double StepFunction::operator()(double x) const {
    if (values.empty()) return 0.0;
    auto it = std::upper_bound(breaks.begin(), breaks.end(), x);
    std::ptrdiff_t idx = (it - breaks.begin()) - 1;
    if (idx < 0) return 0.0;
    if (idx >= static_cast<std::ptrdiff_t>(values.size()))
        idx = static_cast<std::ptrdiff_t>(values.size()) - 1;  // value at the right end
    return values[static_cast<std::size_t>(idx)];
}

double StepFunction::integral(double a, double b) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double lo = std::max(a, breaks[i]), hi = std::min(b, breaks[i + 1]);
        if (hi > lo) sum += values[i] * (hi - lo);
    }
    return sum;
}

double StepFunction::abs_integral(double a, double b) const {
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double lo = std::max(a, breaks[i]), hi = std::min(b, breaks[i + 1]);
        if (hi > lo) sum += std::abs(values[i]) * (hi - lo);
    }
    return sum;
}

double StepFunction::sup_abs(double a, double b) const {
    double sup = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
        const double lo = std::max(a, breaks[i]), hi = std::min(b, breaks[i + 1]);
        if (hi > lo) sup = std::max(sup, std::abs(values[i]));
    }
    return sup;
}

PiecewiseFunction StepFunction::as_piecewise() const {
    PiecewiseFunction f;
    f.breaks = breaks;
    f.degree = 0;
    const StepFunction copy = *this;
    f.eval = [copy](double x) { return copy(x); };
    return f;
}

double IntervalSet::measure() const {
    double m = 0.0;
    for (const auto& [lo, hi] : parts) m += hi - lo;
    return m;
}

void IntervalSet::add(double lo, double hi) {
    if (!(hi > lo)) return;
    parts.emplace_back(lo, hi);
    std::sort(parts.begin(), parts.end());
    std::vector<std::pair<double, double>> merged;
    for (const auto& p : parts) {
        if (!merged.empty() && p.first <= merged.back().second) {
            merged.back().second = std::max(merged.back().second, p.second);
        } else {
            merged.push_back(p);
        }
    }
    parts = std::move(merged);
}

IntervalSet maximal_superlevel(const IntervalSet& E, double c) {
    IntervalSet B;
    if (E.empty()) return B;
    for (const auto& [lo, hi] : E.parts) B.add(lo, hi);
    const std::size_t m = E.parts.size();
    std::vector<double> prefix(m + 1, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        prefix[i + 1] = prefix[i] + (E.parts[i].second - E.parts[i].first);
    // Every gap point x with M 1_E(x) > c is reached one-sidedly from a
    // component endpoint, so the threshold per gap is a max of hyperbola cuts.
    auto gap_bounds = [&](double g0, double g1, std::size_t left_count) {
        // Components 0..left_count-1 lie left of the gap.
        double reach_right = g0;
        for (std::size_t i = 0; i < left_count; ++i) {
            const double u = E.parts[i].first;
            const double mass = prefix[left_count] - prefix[i];
            reach_right = std::max(reach_right, u + mass / c);
        }
        double reach_left = g1;
        for (std::size_t i = left_count; i < m; ++i) {
            const double v = E.parts[i].second;
            const double mass = prefix[i + 1] - prefix[left_count];
            reach_left = std::min(reach_left, v - mass / c);
        }
        if (reach_right > g0) B.add(g0, std::min(reach_right, g1));
        if (reach_left < g1) B.add(std::max(reach_left, g0), g1);
    };
    gap_bounds(0.0, E.parts.front().first, 0);
    for (std::size_t i = 0; i + 1 < m; ++i)
        gap_bounds(E.parts[i].second, E.parts[i + 1].first, i + 1);
    gap_bounds(E.parts.back().second, 1.0, m);
    // Clip to [0, 1].
    for (auto& [lo, hi] : B.parts) {
        lo = std::max(lo, 0.0);
        hi = std::min(hi, 1.0);
    }
    return B;
}

double Atom::invariant_defect() const {
    if (constant_one) return 0.0;
    const double bound = 1.0 / length();
    double defect = 0.0;
    // Support.
    for (std::size_t i = 0; i < profile.values.size(); ++i) {
        if (profile.values[i] == 0.0) continue;
        if (profile.breaks[i] < lo - 1e-15 || profile.breaks[i + 1] > hi + 1e-15)
            defect = std::max(defect, 1.0);
    }
    // Sup bound, relative to |Gamma|^{-1}.
    const double sup = profile.sup_abs(lo, hi);
    if (sup > bound) defect = std::max(defect, (sup - bound) / bound);
    // Mean zero, relative to the atom scale.
    const double mean = profile.integral(lo, hi);
    const double scale = std::max(sup * length(), 1e-300);
    defect = std::max(defect, std::abs(mean) / scale);
    return defect;
}

PiecewiseFunction Atom::as_piecewise() const {
    if (constant_one) {
        PiecewiseFunction f;
        f.breaks = {0.0, 1.0};
        f.eval = [](double) { return 1.0; };
        f.degree = 0;
        return f;
    }
    return profile.as_piecewise();
}

Atom random_atom(Rng& rng, int max_pieces) {
    Atom atom;
    const double len = rng.uniform(0.05, 0.5);
    atom.lo = rng.uniform(0.0, 1.0 - len);
    atom.hi = atom.lo + len;
    const int pieces = 2 + static_cast<int>(rng.uniform_int(std::max(1, max_pieces - 1)));
    std::vector<double> cuts{atom.lo, atom.hi};
    for (int i = 0; i < pieces - 1; ++i) cuts.push_back(rng.uniform(atom.lo, atom.hi));
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    std::vector<double> vals(cuts.size() - 1);
    for (double& v : vals) v = rng.uniform(-1.0, 1.0);
    // Project to mean zero, then scale under the sup bound.
    double mean = 0.0;
    for (std::size_t i = 0; i < vals.size(); ++i) mean += vals[i] * (cuts[i + 1] - cuts[i]);
    mean /= len;
    double sup = 0.0;
    for (double& v : vals) {
        v -= mean;
        sup = std::max(sup, std::abs(v));
    }
    const double target = rng.uniform(0.5, 1.0) / len;
    if (sup > 0.0)
        for (double& v : vals) v *= target / sup;
    StepFunction profile;
    profile.breaks.push_back(0.0);
    profile.values.push_back(0.0);
    for (std::size_t i = 0; i < vals.size(); ++i) {
        profile.breaks.push_back(cuts[i]);
        profile.values.push_back(vals[i]);
    }
    profile.breaks.push_back(cuts.back());
    profile.values.push_back(0.0);
    profile.breaks.push_back(1.0);
    // Absorb the floating-point residue of the mean into the largest piece.
    double residue = profile.integral(atom.lo, atom.hi);
    std::size_t widest = 1;
    for (std::size_t i = 1; i + 1 < profile.values.size(); ++i)
        if (profile.breaks[i + 1] - profile.breaks[i] >
            profile.breaks[widest + 1] - profile.breaks[widest])
            widest = i;
    profile.values[widest] -= residue / (profile.breaks[widest + 1] - profile.breaks[widest]);
    atom.profile = std::move(profile);
    return atom;
}

double AtomicDecomposition::weight_sum() const {
    double sum = std::abs(eta0);
    for (const Term& t : terms) sum += std::abs(t.eta);
    return sum;
}

Expansion::Expansion(const OrthoSystem& system, std::vector<double> coeffs)
    : sys_(&system), a_(std::move(coeffs)) {
    a_.resize(static_cast<std::size_t>(system.size()), 0.0);
    prefix_.resize(a_.size());
    std::vector<double> acc(static_cast<std::size_t>(system.fine_basis().dim()), 0.0);
    for (std::size_t m = 0; m < a_.size(); ++m) {
        const auto c = system.fine_coeffs(static_cast<int>(m));
        if (a_[m] != 0.0)
            for (std::size_t i = 0; i < c.size(); ++i) acc[i] += a_[m] * c[i];
        prefix_[m] = acc;
    }
}

void Expansion::terms_at(double x, double* out) const {
    const BSplineBasis& basis = sys_->fine_basis();
    int first = 0;
    double vals[64];
    basis.evaluate_all(x, first, vals);
    const int k = basis.order();
    for (int m = 0; m < sys_->size(); ++m) {
        if (a_[static_cast<std::size_t>(m)] == 0.0) {
            out[m] = 0.0;
            continue;
        }
        const auto c = sys_->fine_coeffs(m);
        double sum = 0.0;
        for (int r = 0; r < k; ++r) {
            const int i = first + r;
            if (i >= 0 && i < static_cast<int>(c.size()))
                sum += c[static_cast<std::size_t>(i)] * vals[r];
        }
        out[m] = a_[static_cast<std::size_t>(m)] * sum;
    }
}

double Expansion::square_function(double x) const {
    const BSplineBasis& basis = sys_->fine_basis();
    int first = 0;
    double vals[64];
    basis.evaluate_all(x, first, vals);
    const int k = basis.order();
    double sum = 0.0;
    for (int m = 0; m < sys_->size(); ++m) {
        const double am = a_[static_cast<std::size_t>(m)];
        if (am == 0.0) continue;
        const auto c = sys_->fine_coeffs(m);
        double v = 0.0;
        for (int r = 0; r < k; ++r) {
            const int i = first + r;
            if (i >= 0 && i < static_cast<int>(c.size()))
                v += c[static_cast<std::size_t>(i)] * vals[r];
        }
        sum += am * am * v * v;
    }
    return std::sqrt(sum);
}

double Expansion::maximal_function(double x) const {
    const BSplineBasis& basis = sys_->fine_basis();
    int first = 0;
    double vals[64];
    basis.evaluate_all(x, first, vals);
    const int k = basis.order();
    double best = 0.0;
    for (std::size_t m = 0; m < prefix_.size(); ++m) {
        const auto& c = prefix_[m];
        double v = 0.0;
        for (int r = 0; r < k; ++r) {
            const int i = first + r;
            if (i >= 0 && i < static_cast<int>(c.size()))
                v += c[static_cast<std::size_t>(i)] * vals[r];
        }
        best = std::max(best, std::abs(v));
    }
    return best;
}

double Expansion::partial_sum(int m, double x) const {
    const BSplineBasis& basis = sys_->fine_basis();
    int first = 0;
    double vals[64];
    basis.evaluate_all(x, first, vals);
    const auto& c = prefix_[static_cast<std::size_t>(m)];
    double v = 0.0;
    for (int r = 0; r < basis.order(); ++r) {
        const int i = first + r;
        if (i >= 0 && i < static_cast<int>(c.size())) v += c[static_cast<std::size_t>(i)] * vals[r];
    }
    return v;
}

Expansion expand(const PiecewiseFunction& f, const OrthoSystem& system) {
    if (!f.eval) throw std::invalid_argument("expand: function is not evaluable");
    const Grid& grid = system.fine_grid();
    std::vector<double> breaks(f.breaks);
    for (int i = 0; i < grid.size(); ++i) breaks.push_back(grid.knot(i));
    std::sort(breaks.begin(), breaks.end());
    breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
    const int k = system.order();
    const int nodes = std::max(k, (f.degree + k + 2) / 2);
    const GaussRule& rule = gauss_rule(nodes);
    std::vector<double> a(static_cast<std::size_t>(system.size()), 0.0);
    std::vector<double> fx(static_cast<std::size_t>(system.size()), 0.0);
    for (std::size_t p = 0; p + 1 < breaks.size(); ++p) {
        const double lo = std::max(0.0, breaks[p]), hi = std::min(1.0, breaks[p + 1]);
        if (hi <= lo) continue;
        const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double x = mid + half * rule.nodes[q];
            const double w = rule.weights[q] * half * f.eval(x);
            if (w == 0.0) continue;
            system.eval_all(x, fx.data());
            for (std::size_t m = 0; m < a.size(); ++m) a[m] += w * fx[m];
        }
    }
    return Expansion(system, std::move(a));
}

double sq_norm1(const Expansion& e, double rel_tol) {
    const Grid& grid = e.system().fine_grid();
    double total = 0.0;
    for (int span = grid.order() - 1; span < grid.size() - grid.order(); ++span) {
        const double a = grid.knot(span), b = grid.knot(span + 1);
        if (b <= a) continue;
        total += adaptive_integrate([&](double x) { return e.square_function(x); }, a, b,
                                    0.1 * rel_tol);
    }
    return total;
}

double max_norm1(const Expansion& e) {
    const Grid& grid = e.system().fine_grid();
    double prev = 0.0;
    for (int nodes = 8; nodes <= 32; nodes *= 2) {
        const GaussRule& rule = gauss_rule(nodes);
        double total = 0.0;
        for (int span = grid.order() - 1; span < grid.size() - grid.order(); ++span) {
            const double a = grid.knot(span), b = grid.knot(span + 1);
            if (b <= a) continue;
            const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
            for (std::size_t q = 0; q < rule.nodes.size(); ++q)
                total += rule.weights[q] * half * e.maximal_function(mid + half * rule.nodes[q]);
        }
        if (nodes > 8 && std::abs(total - prev) <= 1e-4 * std::abs(total)) return total;
        prev = total;
    }
    return prev;
}

double hl_maximal(const StepFunction& f, double x) {
    // Candidate intervals have endpoints among the breakpoints and x itself.
    std::vector<double> pts(f.breaks);
    pts.push_back(x);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    std::vector<double> prefix(pts.size(), 0.0);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        prefix[i + 1] = prefix[i] + f.abs_integral(pts[i], pts[i + 1]);
    double best = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i] > x) break;
        for (std::size_t j = pts.size(); j-- > i + 1;) {
            if (pts[j] < x) break;
            best = std::max(best, (prefix[j] - prefix[i]) / (pts[j] - pts[i]));
        }
    }
    return best;
}

double combined_l1_norm(const OrthoSystem& system, std::span<const double> fine_coeffs) {
    const Grid& grid = system.fine_grid();
    const Spline s{system.fine_basis(), std::vector<double>(fine_coeffs.begin(), fine_coeffs.end())};
    double total = 0.0;
    for (int span = grid.order() - 1; span < grid.size() - grid.order(); ++span) {
        const double a = grid.knot(span), b = grid.knot(span + 1);
        if (b <= a) continue;
        total += integrate_abs_poly([&](double x) { return s(x); }, a, b, grid.order() - 1);
    }
    return total;
}

double sign_flip_supremum(const Expansion& e, int trials, std::uint64_t seed) {
    if (trials < 1) throw std::invalid_argument("sign_flip_supremum: trials must be >= 1");
    Rng rng(seed);
    const OrthoSystem& sys = e.system();
    std::vector<double> flipped(static_cast<std::size_t>(sys.size()), 0.0);
    double best = 0.0;
    for (int t = 0; t < trials; ++t) {
        for (std::size_t m = 0; m < flipped.size(); ++m)
            flipped[m] = static_cast<double>(rng.sign()) * e.coeffs()[m];
        const std::vector<double> combined = sys.combine(flipped);
        best = std::max(best, combined_l1_norm(sys, combined));
    }
    return best;
}

namespace {

/// g_r data: the profile equal to f off B_r and to interval averages on the
/// components of B_r.
StepFunction level_profile(const StepFunction& f, const IntervalSet& B) {
    if (B.empty()) return f;
    StepFunction g = f;
    for (const auto& [lo, hi] : B.parts) {
        if (!(hi > lo)) continue;
        const double avg = f.integral(lo, hi) / (hi - lo);
        // Splice the averaged piece into the break list.
        StepFunction next;
        next.breaks.push_back(g.breaks.front());
        for (std::size_t i = 0; i < g.values.size(); ++i) {
            const double a = g.breaks[i], b = g.breaks[i + 1];
            auto emit = [&next](double to, double value) {
                if (to > next.breaks.back()) {
                    next.values.push_back(value);
                    next.breaks.push_back(to);
                }
            };
            emit(std::min(b, std::max(a, lo)), g.values[i]);
            emit(std::min(b, std::max(a, hi)), avg);
            emit(b, g.values[i]);
        }
        g = std::move(next);
    }
    return g;
}

}  // namespace

AtomicDecomposition atomic_decompose(const Expansion& e, const AtomicDecomposeOptions& opts) {
    if (!(opts.c_threshold > 0.0 && opts.c_threshold <= 0.5))
        throw std::invalid_argument("atomic_decompose: c_threshold must lie in (0, 1/2]");
    const OrthoSystem& sys = e.system();
    const Grid& grid = sys.fine_grid();

    // Step profile of the expanded function and midpoint samples of S on a
    // refined grid (documented approximation: E_r is resolved at this grid).
    StepFunction f;
    f.breaks.push_back(0.0);
    std::vector<double> smax;
    const GaussRule& rule = gauss_rule(std::max(2, grid.order()));
    for (int span = grid.order() - 1; span < grid.size() - grid.order(); ++span) {
        const double a = grid.knot(span), b = grid.knot(span + 1);
        if (b <= a) continue;
        for (int s = 0; s < opts.subdivisions; ++s) {
            const double lo = a + (b - a) * static_cast<double>(s) / opts.subdivisions;
            const double hi = a + (b - a) * static_cast<double>(s + 1) / opts.subdivisions;
            const double mid2 = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
            double integral = 0.0;
            for (std::size_t q = 0; q < rule.nodes.size(); ++q)
                integral += rule.weights[q] * half *
                            e.reconstruction(mid2 + half * rule.nodes[q]);
            f.values.push_back(integral / (hi - lo));
            f.breaks.push_back(hi);
            smax.push_back(e.maximal_function(mid2));
        }
    }

    AtomicDecomposition dec;
    dec.eta0 = f.integral();

    double s_sup = 0.0;
    for (double s : smax) s_sup = std::max(s_sup, s);
    if (s_sup <= 0.0) return dec;

    auto stopping_set = [&](int level) {
        IntervalSet E;
        const double threshold = std::ldexp(1.0, level);
        for (std::size_t i = 0; i < smax.size(); ++i)
            if (smax[i] > threshold) E.add(f.breaks[i], f.breaks[i + 1]);
        return maximal_superlevel(E, opts.c_threshold);
    };
    auto is_full = [](const IntervalSet& B) {
        return B.parts.size() == 1 && B.parts[0].first == 0.0 && B.parts[0].second == 1.0;
    };

    // The construction telescopes from the coarsest level whose stopping-time
    // set is all of [0,1]; for max S >= 1 this is the usual start at level 0.
    // Scanning downward keeps the weight sum comparable to ||S||_1 whatever
    // the scale of the expanded function.
    const int r_hi = static_cast<int>(std::ceil(std::log2(s_sup)));
    int r_start = r_hi;
    while (r_hi - r_start < opts.levels && !is_full(stopping_set(r_start))) --r_start;
    dec.truncated = !is_full(stopping_set(r_start));

    struct RawTerm {
        int level;
        double lo, hi;
        StepFunction diff;
        double sup;
    };
    std::vector<RawTerm> raw;

    IntervalSet B_r;
    B_r.add(0.0, 1.0);
    StepFunction g_r;
    g_r.breaks = {0.0, 1.0};
    g_r.values = {dec.eta0};
    int r = r_start;
    for (; r <= r_hi + 1; ++r) {
        // E_{r+1} = [S > 2^{r+1}] on the refined grid.
        IntervalSet B_next = stopping_set(r + 1);
        // Nesting B_{r+1} within B_r (holds in exact arithmetic).
        IntervalSet clipped;
        for (const auto& [lo, hi] : B_next.parts)
            for (const auto& [plo, phi] : B_r.parts) {
                const double a = std::max(lo, plo), b = std::min(hi, phi);
                if (b > a) clipped.add(a, b);
            }
        B_next = std::move(clipped);
        const StepFunction g_next = level_profile(f, B_next);
        for (const auto& [lo, hi] : B_r.parts) {
            if (!(hi > lo)) continue;
            // diff = (g_{r+1} - g_r) restricted to this component.
            std::vector<double> cuts;
            for (double b : g_r.breaks)
                if (b >= lo && b <= hi) cuts.push_back(b);
            for (double b : g_next.breaks)
                if (b >= lo && b <= hi) cuts.push_back(b);
            cuts.push_back(lo);
            cuts.push_back(hi);
            std::sort(cuts.begin(), cuts.end());
            cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
            StepFunction diff;
            diff.breaks.push_back(0.0);
            double sup = 0.0;
            auto push = [&diff](double to, double v) {
                if (to > diff.breaks.back()) {
                    diff.values.push_back(v);
                    diff.breaks.push_back(to);
                }
            };
            push(lo, 0.0);
            for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
                const double mid2 = 0.5 * (cuts[i] + cuts[i + 1]);
                const double v = g_next(mid2) - g_r(mid2);
                sup = std::max(sup, std::abs(v));
                push(cuts[i + 1], v);
            }
            push(1.0, 0.0);
            // Differences at the noise floor of the step profile are
            // reconstruction round-off, not content.
            const double floor =
                1e-9 * (std::ldexp(1.0, r) + f.sup_abs(0.0, 1.0));
            if (sup <= floor) continue;
            raw.push_back({r, lo, hi, std::move(diff), sup});
        }
        B_r = std::move(B_next);
        g_r = g_next;
        if (B_r.empty()) break;
    }
    dec.levels_used = r - r_start;
    dec.truncated = dec.truncated || !B_r.empty();

    // Smallest power of two C with ||phi||_inf <= |Gamma|^{-1} for every atom,
    // i.e. ||g_{r+1} - g_r||_inf <= C 2^r on that atom's interval.
    double C = 1.0;
    for (const RawTerm& t : raw) {
        while (t.sup / (C * std::ldexp(1.0, t.level)) > 1.0) C *= 2.0;
    }
    dec.scale_constant = C;

    for (RawTerm& t : raw) {
        const double eta = C * std::ldexp(1.0, t.level) * (t.hi - t.lo);
        Atom atom;
        atom.lo = t.lo;
        atom.hi = t.hi;
        atom.profile = std::move(t.diff);
        for (double& v : atom.profile.values) v /= eta;
        // Absorb the floating-point residue of the mean over the pieces
        // inside Gamma; the outer pieces stay exactly zero.
        const double residue = atom.profile.integral(t.lo, t.hi) / (t.hi - t.lo);
        for (std::size_t i = 0; i < atom.profile.values.size(); ++i) {
            const double mid = 0.5 * (atom.profile.breaks[i] + atom.profile.breaks[i + 1]);
            if (mid > t.lo && mid < t.hi) atom.profile.values[i] -= residue;
        }
        dec.terms.push_back({eta, t.level, std::move(atom)});
    }

    // Reconstruction check against the decomposed step profile, in L1.
    std::vector<double> cuts(f.breaks);
    for (const auto& t : dec.terms)
        for (double b : t.atom.profile.breaks) cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    double err = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double mid = 0.5 * (cuts[i] + cuts[i + 1]);
        double v = dec.eta0;
        for (const auto& t : dec.terms) v += t.eta * t.atom.profile(mid);
        err += std::abs(v - f(mid)) * (cuts[i + 1] - cuts[i]);
    }
    dec.reconstruction_error = err;
    return dec;
}

EquivalenceReport equivalence_report(const PiecewiseFunction& f, const OrthoSystem& system,
                                     int trials, std::uint64_t seed) {
    const Expansion e = expand(f, system);
    EquivalenceReport report;
    report.atomic_weight = atomic_decompose(e).weight_sum();
    report.max_norm = max_norm1(e);
    report.square_norm = sq_norm1(e);
    report.flip_supremum = sign_flip_supremum(e, trials, seed);
    return report;
}

}  // namespace splineortho
