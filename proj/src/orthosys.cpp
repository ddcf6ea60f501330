#include "splineortho/orthosys.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "splineortho/quadrature.hpp"
#include "splineortho/util.hpp"

namespace splineortho {

namespace {

std::vector<double> multiply_by_2x_minus_1(const std::vector<double>& c) {
    std::vector<double> out(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
        out[i + 1] += 2.0 * c[i];
        out[i] -= c[i];
    }
    return out;
}

}  // namespace

std::vector<std::vector<double>> initial_polynomials(int k) {
    if (k < 2) throw std::invalid_argument("initial_polynomials: k must be >= 2");
    // Shifted Legendre via the three-term recurrence in u = 2x - 1,
    // normalized to unit L2 norm on [0, 1]; leading coefficients positive.
    // Degrees 0..k-1, one member per level n = -k+2..1.
    std::vector<std::vector<double>> legendre;
    legendre.push_back({1.0});
    legendre.push_back({-1.0, 2.0});
    for (int d = 1; d + 1 <= k - 1; ++d) {
        const auto& pd = legendre[static_cast<std::size_t>(d)];
        const auto& pm = legendre[static_cast<std::size_t>(d - 1)];
        std::vector<double> next = multiply_by_2x_minus_1(pd);
        for (double& v : next) v *= (2.0 * d + 1.0) / (d + 1.0);
        for (std::size_t i = 0; i < pm.size(); ++i)
            next[i] -= static_cast<double>(d) / (d + 1.0) * pm[i];
        legendre.push_back(std::move(next));
    }
    std::vector<std::vector<double>> out;
    out.reserve(static_cast<std::size_t>(k));
    for (int d = 0; d <= k - 1; ++d) {
        std::vector<double> f = legendre[static_cast<std::size_t>(d)];
        const double scale = std::sqrt(2.0 * d + 1.0);
        for (double& v : f) v *= scale;
        out.push_back(std::move(f));
    }
    return out;
}

AlphaVector alpha_coefficients(const Grid& grid_n, int insert_index) {
    const int k = grid_n.order();
    const int p = insert_index;
    if (p < k || p > grid_n.level() + k - 2)
        throw std::invalid_argument("alpha_coefficients: insert index out of range");
    AlphaVector alpha;
    alpha.insert_index = p;
    alpha.values.resize(static_cast<std::size_t>(k + 1));
    const double tp = grid_n.knot(p);
    for (int j = p - k; j <= p; ++j) {
        double v = ((j - p + k) % 2 == 0) ? 1.0 : -1.0;
        for (int l = p - k + 1; l <= j - 1; ++l) {
            const double den = grid_n.knot(l + k) - grid_n.knot(l);
            if (den == 0.0)
                throw std::invalid_argument("alpha_coefficients: zero-length k-span in window");
            v *= (tp - grid_n.knot(l)) / den;
        }
        for (int l = j + 1; l <= p - 1; ++l) {
            const double den = grid_n.knot(l + k) - grid_n.knot(l);
            if (den == 0.0)
                throw std::invalid_argument("alpha_coefficients: zero-length k-span in window");
            v *= (grid_n.knot(l + k) - tp) / den;
        }
        alpha.values[static_cast<std::size_t>(j - (p - k))] = v;
    }
    return alpha;
}

CharacteristicSelection characteristic_interval(const Grid& grid_n, int insert_index,
                                                const AlphaVector& alpha,
                                                double support_factor) {
    const int k = grid_n.order();
    const int p = insert_index;
    CharacteristicSelection sel;
    double min_len = std::numeric_limits<double>::infinity();
    for (int j = p - k; j <= p; ++j) min_len = std::min(min_len, grid_n.span_length(j, k));
    for (int j = p - k; j <= p; ++j)
        if (grid_n.span_length(j, k) <= support_factor * min_len) sel.lambda0.push_back(j);
    double max_alpha = 0.0;
    for (int j : sel.lambda0) max_alpha = std::max(max_alpha, std::abs(alpha.at(j)));
    for (int j : sel.lambda0)
        if (std::abs(alpha.at(j)) == max_alpha) sel.lambda1.push_back(j);
    sel.j0 = sel.lambda1.front();  // smallest index on ties
    int best = sel.j0;
    for (int m = sel.j0; m < sel.j0 + k; ++m)
        if (grid_n.span_length(m, 1) > grid_n.span_length(best, 1)) best = m;  // leftmost max
    sel.J = make_interval(grid_n, best, 1);
    return sel;
}

double OrthoFunction::operator()(double x) const {
    const Spline s{BSplineBasis(*grid), coeffs};
    return s(x);
}

std::vector<double> OrthoFunction::unnormalized() const {
    std::vector<double> w(coeffs);
    for (double& v : w) v *= gnorm;
    return w;
}

OrthoFunction orthonormal_function(const KnotSequence& seq, int n, double support_factor) {
    if (n < 2) throw std::invalid_argument("orthonormal_function: n must be >= 2");
    auto grid = std::make_shared<Grid>(seq, n);
    const int k = seq.k;
    int i0;
    if (n == 2) {
        i0 = k;  // T_1 holds only the boundary knots
    } else {
        const Grid coarser(seq, n - 1);
        i0 = grid->new_knot_index(coarser);
    }
    const AlphaVector alpha = alpha_coefficients(*grid, i0);
    const BSplineBasis basis(*grid);
    const SymmetricBandMatrix G = gram(basis);
    std::vector<int> window(static_cast<std::size_t>(k + 1));
    std::iota(window.begin(), window.end(), i0 - k);
    const GramInverseRows rows = dual_rows(G, window);

    std::vector<double> w(static_cast<std::size_t>(basis.dim()), 0.0);
    for (int j = i0 - k; j <= i0; ++j) {
        const double aj = alpha.at(j);
        const auto& row = rows.row(j);
        for (int l = 0; l < basis.dim(); ++l)
            w[static_cast<std::size_t>(l)] += aj * row[static_cast<std::size_t>(l)];
    }
    // <g, g> = sum_j alpha_j <N_j^*, g> = sum_j alpha_j w_j.
    double norm2 = 0.0;
    for (int j = i0 - k; j <= i0; ++j) norm2 += alpha.at(j) * w[static_cast<std::size_t>(j)];
    if (!(norm2 > 0.0))
        throw std::runtime_error("orthonormal_function: unnormalized function has no mass");
    const double gnorm = std::sqrt(norm2);

    const CharacteristicSelection sel = characteristic_interval(*grid, i0, alpha, support_factor);
    double sign = w[static_cast<std::size_t>(sel.j0)] >= 0.0 ? 1.0 : -1.0;
    OrthoFunction f;
    f.n = n;
    f.i0 = i0;
    f.grid = std::move(grid);
    f.coeffs.resize(w.size());
    for (std::size_t l = 0; l < w.size(); ++l) f.coeffs[l] = sign * w[l] / gnorm;
    f.gnorm = gnorm;
    f.j0 = sel.j0;
    f.J = sel.J;
    return f;
}

namespace {

double dist_to_interval(double lo, double hi, const GridInterval& J) {
    if (hi < J.left) return J.left - hi;
    if (lo > J.right) return lo - J.right;
    return 0.0;
}

}  // namespace

DecayReport decay_report(const OrthoFunction& f) {
    const Grid& grid = *f.grid;
    const int k = grid.order();
    const BSplineBasis basis(grid);
    const std::vector<double> w = f.unnormalized();
    const GridInterval& J = f.J;
    const double lenJ = J.length();

    struct Sample {
        double lhs;
        int d;
        double shape;
    };
    std::vector<Sample> samples;

    // Coefficient bound |w_j| <= C q^{d_n(tau_j)} / (|J| + dist(supp N_j, J) + |D_j|).
    std::vector<double> log_w, dist_w;
    for (int j = 0; j < basis.dim(); ++j) {
        const double shape =
            lenJ + dist_to_interval(basis.support_left(j), basis.support_right(j), J) +
            grid.span_length(j, k);
        const int d = count_points_between(grid, Segment(grid.knot(j)), Segment(J));
        samples.push_back({std::abs(w[static_cast<std::size_t>(j)]) * shape, d, 1.0});
        if (std::abs(w[static_cast<std::size_t>(j)]) > 1e-300) {
            log_w.push_back(std::log(std::abs(w[static_cast<std::size_t>(j)])));
            dist_w.push_back(static_cast<double>(d));
        }
    }

    // One-sided tails at grid points: ||f||_{L^p(0,x)} for x left of J and
    // ||f||_{L^p(x,1)} right of J, p in {1, 2, inf}.
    const Spline s{basis, f.coeffs};
    std::vector<double> span_abs, span_sq, span_sup, span_right;
    for (int m = k - 1; m < grid.size() - k; ++m) {
        const double a = grid.knot(m), b = grid.knot(m + 1);
        if (b <= a) continue;
        span_right.push_back(b);
        span_abs.push_back(integrate_abs_poly([&](double x) { return s(x); }, a, b, k - 1));
        span_sq.push_back(gauss_integrate([&](double x) { const double v = s(x); return v * v; },
                                          a, b, k));
        double sup = 0.0;
        for (int q = 0; q <= k + 2; ++q) {
            const double x = a + (b - a) * static_cast<double>(q) / (k + 2);
            sup = std::max(sup, std::abs(s(x)));
        }
        span_sup.push_back(sup);
    }
    const std::size_t nspans = span_right.size();
    std::vector<double> pre_abs(nspans + 1, 0.0), pre_sq(nspans + 1, 0.0), pre_sup(nspans + 1, 0.0);
    std::vector<double> suf_abs(nspans + 1, 0.0), suf_sq(nspans + 1, 0.0), suf_sup(nspans + 1, 0.0);
    for (std::size_t m = 0; m < nspans; ++m) {
        pre_abs[m + 1] = pre_abs[m] + span_abs[m];
        pre_sq[m + 1] = pre_sq[m] + span_sq[m];
        pre_sup[m + 1] = std::max(pre_sup[m], span_sup[m]);
    }
    for (std::size_t m = nspans; m-- > 0;) {
        suf_abs[m] = suf_abs[m + 1] + span_abs[m];
        suf_sq[m] = suf_sq[m + 1] + span_sq[m];
        suf_sup[m] = std::max(suf_sup[m + 1], span_sup[m]);
    }
    auto add_tail = [&](double x, double l1, double l2, double sup) {
        const int d = count_points_between(grid, Segment(x), Segment(J));
        const double dist = std::max(0.0, x < J.left ? J.left - x : x - J.right);
        const double base = lenJ + dist;
        const double rootJ = std::sqrt(lenJ);
        // p = 1: (|J|+dist)^0; p = 2: (...)^{1/2}; p = inf: (...)^1.
        samples.push_back({l1 / rootJ, d, 1.0});
        samples.push_back({std::sqrt(l2) * std::sqrt(base) / rootJ, d, 1.0});
        samples.push_back({sup * base / rootJ, d, 1.0});
    };
    {
        // Walk unique knot values; prefix index m counts spans fully left of v.
        std::size_t m = 0;
        double prev = 0.0;
        for (int i = 0; i < grid.size(); ++i) {
            const double v = grid.knot(i);
            if (v == prev && i > 0) continue;
            prev = v;
            while (m < nspans && span_right[m] <= v) ++m;
            if (v < J.left) add_tail(v, pre_abs[m], pre_sq[m], pre_sup[m]);
            if (v > J.right) add_tail(v, suf_abs[m], suf_sq[m], suf_sup[m]);
        }
    }

    DecayReport report;
    for (int step = 10; step <= 19; ++step) {
        const double q = static_cast<double>(step) / 20.0;  // 0.50, 0.55, ..., 0.95
        double C = 0.0;
        for (const Sample& smp : samples) C = std::max(C, smp.lhs / std::pow(q, smp.d));
        report.ladder_q.push_back(q);
        report.ladder_C.push_back(C);
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < report.ladder_C.size(); ++i)
        if (report.ladder_C[i] < report.ladder_C[best]) best = i;
    report.q = report.ladder_q[best];
    report.C = report.ladder_C[best];
    report.coeff_slope = fit_line(dist_w, log_w).slope;

    report.concentration_l1 = spline_lp_norm(s, 1.0, J.left, J.right) / spline_lp_norm(s, 1.0, 0.0, 1.0);
    report.concentration_l2 = spline_lp_norm(s, 2.0, J.left, J.right) / spline_lp_norm(s, 2.0, 0.0, 1.0);
    const double inf = std::numeric_limits<double>::infinity();
    report.concentration_sup = spline_lp_norm(s, inf, J.left, J.right) / spline_lp_norm(s, inf, 0.0, 1.0);

    const SymmetricBandMatrix G = gram(basis);
    const int j0arr[1] = {f.j0};
    const GramInverseRows row = dual_rows(G, j0arr);
    const double bj0 = row.row(f.j0)[static_cast<std::size_t>(f.j0)];
    report.peak_ratio = std::abs(w[static_cast<std::size_t>(f.j0)]) / bj0;
    return report;
}

OrthoSystem::OrthoSystem(KnotSequence seq, int max_level, std::vector<std::vector<double>> poly,
                         std::vector<OrthoFunction> funcs)
    : seq_(std::move(seq)),
      level_(max_level),
      poly_(std::move(poly)),
      funcs_(std::move(funcs)),
      fine_grid_(funcs_.empty() ? std::make_shared<Grid>(seq_, level_) : funcs_.back().grid),
      fine_basis_(*fine_grid_) {
    fine_coeffs_.resize(static_cast<std::size_t>(size()));
    parallel_for(static_cast<std::size_t>(size()), [&](std::size_t m) {
        const int member = static_cast<int>(m);
        if (is_polynomial(member)) {
            fine_coeffs_[m] = polynomial_on_grid(poly_[m], *fine_grid_);
            return;
        }
        const OrthoFunction& f = funcs_[static_cast<std::size_t>(member - order())];
        std::vector<double> knots(f.grid->knots().begin(), f.grid->knots().end());
        std::vector<double> coeffs = f.coeffs;
        for (int lvl = f.n + 1; lvl <= level_; ++lvl) {
            const double x = seq_.points[static_cast<std::size_t>(lvl - 2)];
            coeffs = insert_knot(knots, order(), coeffs, x);
            knots.insert(std::upper_bound(knots.begin(), knots.end(), x), x);
        }
        fine_coeffs_[m] = std::move(coeffs);
    });
}

const std::vector<double>& OrthoSystem::polynomial_coeffs(int member) const {
    if (!is_polynomial(member))
        throw std::invalid_argument("OrthoSystem: member is not part of the polynomial part");
    return poly_[static_cast<std::size_t>(member)];
}

const OrthoFunction& OrthoSystem::function(int member) const {
    if (is_polynomial(member))
        throw std::invalid_argument("OrthoSystem: member belongs to the polynomial part");
    return funcs_[static_cast<std::size_t>(member - order())];
}

std::span<const double> OrthoSystem::fine_coeffs(int member) const {
    return fine_coeffs_[static_cast<std::size_t>(member)];
}

double OrthoSystem::eval(int member, double x) const {
    int first = 0;
    double vals[64];
    fine_basis_.evaluate_all(x, first, vals);
    const auto& c = fine_coeffs_[static_cast<std::size_t>(member)];
    double sum = 0.0;
    for (int r = 0; r < order(); ++r) {
        const int i = first + r;
        if (i >= 0 && i < static_cast<int>(c.size())) sum += c[static_cast<std::size_t>(i)] * vals[r];
    }
    return sum;
}

std::vector<double> OrthoSystem::combine(std::span<const double> a) const {
    std::vector<double> out(static_cast<std::size_t>(fine_basis_.dim()), 0.0);
    for (int m = 0; m < size() && m < static_cast<int>(a.size()); ++m) {
        const double am = a[static_cast<std::size_t>(m)];
        if (am == 0.0) continue;
        const auto& c = fine_coeffs_[static_cast<std::size_t>(m)];
        for (std::size_t i = 0; i < c.size(); ++i) out[i] += am * c[i];
    }
    return out;
}

void OrthoSystem::eval_all(double x, double* out) const {
    int first = 0;
    double vals[64];
    fine_basis_.evaluate_all(x, first, vals);
    for (int m = 0; m < size(); ++m) {
        const auto& c = fine_coeffs_[static_cast<std::size_t>(m)];
        double sum = 0.0;
        for (int r = 0; r < order(); ++r) {
            const int i = first + r;
            if (i >= 0 && i < static_cast<int>(c.size()))
                sum += c[static_cast<std::size_t>(i)] * vals[r];
        }
        out[m] = sum;
    }
}

OrthoSystem build_system(const KnotSequence& seq, int max_level, double support_factor) {
    seq.validate();
    if (max_level < 2) throw std::invalid_argument("build_system: N must be >= 2");
    if (max_level > seq.max_level())
        throw std::invalid_argument("build_system: N exceeds the sequence length");
    std::vector<std::vector<double>> poly = initial_polynomials(seq.k);
    std::vector<OrthoFunction> funcs(static_cast<std::size_t>(max_level - 1));
    parallel_for(funcs.size(), [&](std::size_t idx) {
        funcs[idx] = orthonormal_function(seq, static_cast<int>(idx) + 2, support_factor);
    });
    return OrthoSystem(seq, max_level, std::move(poly), std::move(funcs));
}

double orthonormality_defect(const OrthoSystem& system) {
    const SymmetricBandMatrix G = gram(system.fine_basis());
    const int n = system.size();
    std::vector<std::vector<double>> gc(static_cast<std::size_t>(n));
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t m) {
        gc[m] = G.multiply(system.fine_coeffs(static_cast<int>(m)));
    });
    std::vector<double> worst(static_cast<std::size_t>(n), 0.0);
    parallel_for(static_cast<std::size_t>(n), [&](std::size_t a) {
        const auto ca = system.fine_coeffs(static_cast<int>(a));
        double w = 0.0;
        for (std::size_t b = a; b < static_cast<std::size_t>(n); ++b) {
            double dot = 0.0;
            const auto& gb = gc[b];
            for (std::size_t i = 0; i < gb.size(); ++i) dot += ca[i] * gb[i];
            const double target = a == b ? 1.0 : 0.0;
            w = std::max(w, std::abs(dot - target));
        }
        worst[a] = w;
    });
    return *std::max_element(worst.begin(), worst.end());
}

CharCombinatorics char_combinatorics(const OrthoSystem& system,
                                     const CharCombinatoricsParams& params) {
    CharCombinatorics out;
    Rng rng(params.seed);
    const int k = system.order();
    const int N = system.max_level();

    // Knot values: sequence points plus the boundary.
    std::vector<double> values(system.sequence().points.begin(),
                               system.sequence().points.begin() + (N - 1));
    values.push_back(0.0);
    values.push_back(1.0);
    std::sort(values.begin(), values.end());
    values.erase(std::unique(values.begin(), values.end()), values.end());

    std::vector<std::pair<double, double>> pairs;
    const std::size_t total = values.size() * (values.size() - 1) / 2;
    if (total <= static_cast<std::size_t>(params.max_pairs)) {
        for (std::size_t a = 0; a < values.size(); ++a)
            for (std::size_t b = a + 1; b < values.size(); ++b)
                pairs.emplace_back(values[a], values[b]);
    } else {
        for (int m = 0; m < params.max_pairs; ++m) {
            const std::size_t a = static_cast<std::size_t>(rng.uniform_int(
                static_cast<std::int64_t>(values.size())));
            std::size_t b = static_cast<std::size_t>(rng.uniform_int(
                static_cast<std::int64_t>(values.size())));
            if (a == b) continue;
            pairs.emplace_back(values[std::min(a, b)], values[std::max(a, b)]);
        }
    }
    for (const auto& [x, y] : pairs) {
        const double half = 0.5 * (y - x);
        int count = 0;
        for (int n = 2; n <= N; ++n) {
            const GridInterval& J = system.function_at_level(n).J;
            if (J.left >= x && J.right <= y && J.length() >= half) ++count;
        }
        out.n0_max = std::max(out.n0_max, static_cast<double>(count));
    }

    // Off-support mass: sum_{J_n in V} |J_n|^{1/2} int_{V^c} |f_n| / |V|.
    for (int trial = 0; trial < params.max_intervals; ++trial) {
        double a = rng.uniform(), b = rng.uniform();
        if (a > b) std::swap(a, b);
        if (b - a < 1e-6) continue;
        double sum = 0.0;
        for (int n = 2; n <= N; ++n) {
            const OrthoFunction& f = system.function_at_level(n);
            if (f.J.left < a || f.J.right > b) continue;
            const Spline s{BSplineBasis(*f.grid), f.coeffs};
            const double outer = spline_lp_norm(s, 1.0, 0.0, a) + spline_lp_norm(s, 1.0, b, 1.0);
            sum += std::sqrt(f.J.length()) * outer;
        }
        out.offsupport_ratio_max = std::max(out.offsupport_ratio_max, sum / (b - a));
    }

    // N(Delta) and M(Delta, l) sums over sampled (k-1)-spans Delta.
    for (int trial = 0; trial < params.max_intervals; ++trial) {
        const int m = 2 + static_cast<int>(rng.uniform_int(N - 1));
        const Grid& gm = *system.function_at_level(m).grid;
        const int lo = 1, hi = m + k - 2;  // valid left indices of (k-1)-spans
        const int i = lo + static_cast<int>(rng.uniform_int(hi - lo + 1));
        const GridInterval delta = make_interval(gm, i, k - 1);
        if (delta.length() <= 0.0) continue;
        double nsum = 0.0;
        std::vector<double> msum;
        for (int n = 2; n <= N; ++n) {
            const OrthoFunction& f = system.function_at_level(n);
            const auto knots = f.grid->knots();
            const auto first = std::lower_bound(knots.begin(), knots.end(), delta.left);
            const auto past = std::upper_bound(knots.begin(), knots.end(), delta.right);
            const int card = static_cast<int>(past - first);
            const GridInterval& J = f.J;
            if (card == k && delta.contains(J)) nsum += J.length();
            const bool disjoint = J.right <= delta.left || J.left >= delta.right;
            if (card >= k && disjoint) {
                const int l = count_points_between(*f.grid, Segment(delta), Segment(J));
                const double dist = dist_to_interval(J.left, J.right, delta);
                if (static_cast<std::size_t>(l) >= msum.size())
                    msum.resize(static_cast<std::size_t>(l) + 1, 0.0);
                msum[static_cast<std::size_t>(l)] += J.length() / (dist + delta.length());
            }
        }
        out.nsum_max = std::max(out.nsum_max, nsum / delta.length());
        for (std::size_t l = 0; l < msum.size(); ++l) {
            const double norm = static_cast<double>((l + 1) * (l + 1));
            out.msum_max = std::max(out.msum_max, msum[l] / norm);
        }
    }
    return out;
}

}  // namespace splineortho
