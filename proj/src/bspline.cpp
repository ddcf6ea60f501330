#include "splineortho/bspline.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "splineortho/quadrature.hpp"

namespace splineortho {

BSplineBasis::BSplineBasis(const Grid& grid, int order) : grid_(&grid), order_(order) {
    if (order < 1 || order > grid.order())
        throw std::invalid_argument("BSplineBasis: order must lie in [1, grid order]");
    if (order > 64) throw std::invalid_argument("BSplineBasis: order above 64 is unsupported");
}

void BSplineBasis::evaluate_all(double x, int& first_index, double* values) const {
    const int p = order_;
    const Grid& g = *grid_;
    const int mu = g.find_span(x);
    first_index = mu - p + 1;
    values[0] = 1.0;
    // Triangular recursion over the orders; left/right distances to the span.
    double left[64], right[64];
    for (int j = 1; j < p; ++j) {
        left[j] = x - g.knot(mu + 1 - j);
        right[j] = g.knot(mu + j) - x;
        double saved = 0.0;
        for (int r = 0; r < j; ++r) {
            const double den = right[r + 1] + left[j - r];
            const double term = den != 0.0 ? values[r] / den : 0.0;
            values[r] = saved + right[r + 1] * term;
            saved = left[j - r] * term;
        }
        values[j] = saved;
    }
}

double BSplineBasis::evaluate(int i, double x) const {
    if (i < 0 || i >= dim()) throw std::invalid_argument("BSplineBasis: index out of range");
    if (x < support_left(i) || x > support_right(i)) return 0.0;
    int first = 0;
    double vals[64];
    evaluate_all(x, first, vals);
    const int offset = i - first;
    if (offset < 0 || offset >= order_) return 0.0;
    return vals[offset];
}

double Spline::operator()(double x) const {
    int first = 0;
    double vals[64];
    basis.evaluate_all(x, first, vals);
    double sum = 0.0;
    for (int r = 0; r < basis.order(); ++r) {
        const int i = first + r;
        if (i >= 0 && i < static_cast<int>(coeffs.size())) sum += coeffs[static_cast<std::size_t>(i)] * vals[r];
    }
    return sum;
}

Spline derivative(const Spline& s) {
    const int k = s.basis.order();
    if (k < 2) throw std::invalid_argument("derivative: order must be >= 2");
    const Grid& g = s.basis.grid();
    BSplineBasis dbasis(g, k - 1);
    std::vector<double> d(static_cast<std::size_t>(dbasis.dim()), 0.0);
    for (int m = 1; m <= dbasis.dim() - 2; ++m) {
        const double den = g.knot(m + k - 1) - g.knot(m);
        if (den == 0.0) continue;  // zero-length (k-1)-span, B-spline vanishes a.e.
        d[static_cast<std::size_t>(m)] = (k - 1) *
                                         (s.coeffs[static_cast<std::size_t>(m)] -
                                          s.coeffs[static_cast<std::size_t>(m - 1)]) /
                                         den;
    }
    return Spline{dbasis, std::move(d)};
}

SymmetricBandMatrix::SymmetricBandMatrix(int dim, int bandwidth)
    : dim_(dim), bw_(bandwidth),
      data_(static_cast<std::size_t>(dim) * static_cast<std::size_t>(bandwidth + 1), 0.0) {}

double SymmetricBandMatrix::at(int i, int j) const {
    if (i > j) std::swap(i, j);
    if (j - i > bw_) return 0.0;
    return data_[static_cast<std::size_t>(i) * static_cast<std::size_t>(bw_ + 1) +
                 static_cast<std::size_t>(j - i)];
}

void SymmetricBandMatrix::add(int i, int j, double v) {
    if (i > j) std::swap(i, j);
    data_[static_cast<std::size_t>(i) * static_cast<std::size_t>(bw_ + 1) +
          static_cast<std::size_t>(j - i)] += v;
}

void SymmetricBandMatrix::set(int i, int j, double v) {
    if (i > j) std::swap(i, j);
    data_[static_cast<std::size_t>(i) * static_cast<std::size_t>(bw_ + 1) +
          static_cast<std::size_t>(j - i)] = v;
}

SymmetricBandMatrix SymmetricBandMatrix::cholesky() const {
    // Lower factor L with the same bandwidth, stored transposed in the upper
    // layout: factor.at(j, i) = L(i, j) for i >= j.
    SymmetricBandMatrix factor(dim_, bw_);
    for (int i = 0; i < dim_; ++i) {
        const int lo = std::max(0, i - bw_);
        for (int j = lo; j <= i; ++j) {
            double s = at(j, i);
            for (int m = std::max(0, i - bw_); m < j; ++m)
                s -= factor.at(m, i) * factor.at(m, j);
            if (j < i) {
                factor.set(j, i, s / factor.at(j, j));
            } else {
                if (!(s > 0.0))
                    throw factorization_error(
                        "cholesky: non-positive pivot at index " + std::to_string(i), i);
                factor.set(i, i, std::sqrt(s));
            }
        }
    }
    return factor;
}

std::vector<double> SymmetricBandMatrix::solve_with_factor(std::span<const double> rhs) const {
    // Forward L y = rhs, then backward L' x = y; L(i, j) stored at (j, i).
    std::vector<double> x(rhs.begin(), rhs.end());
    for (int i = 0; i < dim_; ++i) {
        double s = x[static_cast<std::size_t>(i)];
        for (int j = std::max(0, i - bw_); j < i; ++j)
            s -= at(j, i) * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(i)] = s / at(i, i);
    }
    for (int i = dim_ - 1; i >= 0; --i) {
        double s = x[static_cast<std::size_t>(i)];
        const int hi = std::min(dim_ - 1, i + bw_);
        for (int j = i + 1; j <= hi; ++j) s -= at(i, j) * x[static_cast<std::size_t>(j)];
        x[static_cast<std::size_t>(i)] = s / at(i, i);
    }
    return x;
}

double SymmetricBandMatrix::quadratic_form(std::span<const double> x) const {
    double sum = 0.0;
    for (int i = 0; i < dim_; ++i) {
        sum += at(i, i) * x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(i)];
        const int hi = std::min(dim_ - 1, i + bw_);
        for (int j = i + 1; j <= hi; ++j)
            sum += 2.0 * at(i, j) * x[static_cast<std::size_t>(i)] * x[static_cast<std::size_t>(j)];
    }
    return sum;
}

std::vector<double> SymmetricBandMatrix::multiply(std::span<const double> x) const {
    std::vector<double> y(static_cast<std::size_t>(dim_), 0.0);
    for (int i = 0; i < dim_; ++i) {
        double s = 0.0;
        const int lo = std::max(0, i - bw_), hi = std::min(dim_ - 1, i + bw_);
        for (int j = lo; j <= hi; ++j) s += at(i, j) * x[static_cast<std::size_t>(j)];
        y[static_cast<std::size_t>(i)] = s;
    }
    return y;
}

SymmetricBandMatrix gram(const BSplineBasis& basis) {
    const Grid& g = basis.grid();
    const int p = basis.order();
    SymmetricBandMatrix m(basis.dim(), p - 1);
    const GaussRule& rule = gauss_rule(p);
    double vals[64];
    for (int span = p - 1; span < g.size() - p; ++span) {
        const double a = g.knot(span), b = g.knot(span + 1);
        if (b <= a) continue;
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
            const double x = mid + half * rule.nodes[q];
            const double w = rule.weights[q] * half;
            int first = 0;
            basis.evaluate_all(x, first, vals);
            for (int r = 0; r < p; ++r) {
                const int i = first + r;
                if (i < 0 || i >= basis.dim()) continue;
                for (int c = r; c < p; ++c) {
                    const int j = first + c;
                    if (j < 0 || j >= basis.dim()) continue;
                    m.add(i, j, w * vals[r] * vals[c]);
                }
            }
        }
    }
    return m;
}

const std::vector<double>& GramInverseRows::row(int j) const {
    for (std::size_t m = 0; m < row_indices.size(); ++m)
        if (row_indices[m] == j) return rows[m];
    throw std::invalid_argument("GramInverseRows: row " + std::to_string(j) + " not computed");
}

GramInverseRows dual_rows(const SymmetricBandMatrix& g, std::span<const int> rows) {
    const int n = g.dim();
    // Diagonal scaling keeps the factorization well conditioned when knot
    // spans vary over many orders of magnitude.
    std::vector<double> scale(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double d = g.at(i, i);
        if (!(d > 0.0))
            throw factorization_error("dual_rows: non-positive diagonal at index " +
                                          std::to_string(i),
                                      i);
        scale[static_cast<std::size_t>(i)] = 1.0 / std::sqrt(d);
    }
    SymmetricBandMatrix scaled(n, g.bandwidth());
    for (int i = 0; i < n; ++i)
        for (int j = i; j <= std::min(n - 1, i + g.bandwidth()); ++j)
            scaled.set(i, j, g.at(i, j) * scale[static_cast<std::size_t>(i)] *
                                 scale[static_cast<std::size_t>(j)]);
    const SymmetricBandMatrix factor = scaled.cholesky();
    GramInverseRows out;
    out.row_indices.assign(rows.begin(), rows.end());
    out.rows.reserve(rows.size());
    std::vector<double> e(static_cast<std::size_t>(n), 0.0);
    for (int j : rows) {
        if (j < 0 || j >= n) throw std::invalid_argument("dual_rows: row index out of range");
        e[static_cast<std::size_t>(j)] = 1.0;
        std::vector<double> y = factor.solve_with_factor(e);
        e[static_cast<std::size_t>(j)] = 0.0;
        for (int i = 0; i < n; ++i)
            y[static_cast<std::size_t>(i)] *=
                scale[static_cast<std::size_t>(i)] * scale[static_cast<std::size_t>(j)];
        out.rows.push_back(std::move(y));
    }
    return out;
}

double spline_lp_norm(const Spline& s, double p, double a, double b) {
    const Grid& g = s.basis.grid();
    const int order = s.basis.order();
    const bool sup = std::isinf(p);
    double acc = 0.0;
    for (int span = order - 1; span < g.size() - order; ++span) {
        const double lo = std::max(a, g.knot(span)), hi = std::min(b, g.knot(span + 1));
        if (hi <= lo) continue;
        if (sup) {
            const int samples = order + 3;
            for (int m = 0; m <= samples; ++m) {
                const double x = lo + (hi - lo) * static_cast<double>(m) / samples;
                acc = std::max(acc, std::abs(s(x)));
            }
        } else if (p == 1.0) {
            acc += integrate_abs_poly([&](double x) { return s(x); }, lo, hi, order - 1);
        } else if (p == 2.0) {
            acc += gauss_integrate([&](double x) { const double v = s(x); return v * v; }, lo, hi,
                                   order);
        } else {
            acc += adaptive_integrate([&](double x) { return std::pow(std::abs(s(x)), p); }, lo,
                                      hi, 1e-10);
        }
    }
    return sup ? acc : std::pow(acc, 1.0 / p);
}

StabilityReport stability_report(const Spline& s, double p) {
    StabilityReport report;
    const Grid& g = s.basis.grid();
    const int k = s.basis.order();
    const bool sup = std::isinf(p);
    bool all_zero = true;
    for (double c : s.coeffs) all_zero = all_zero && c == 0.0;
    if (all_zero) return report;

    double local = 0.0;
    for (int j = 0; j < s.basis.dim(); ++j) {
        const double aj = s.coeffs[static_cast<std::size_t>(j)];
        if (aj == 0.0) continue;
        // Largest knot interval J_j inside [tau_j, tau_{j+k}].
        int best = j;
        for (int m = j; m < j + k; ++m)
            if (g.span_length(m, 1) > g.span_length(best, 1)) best = m;
        const double len = g.span_length(best, 1);
        if (len <= 0.0) continue;
        const double norm = spline_lp_norm(s, p, g.knot(best), g.knot(best + 1));
        if (norm <= 0.0) continue;
        const double weight = sup ? 1.0 : std::pow(len, 1.0 / p);
        local = std::max(local, std::abs(aj) * weight / norm);
    }
    report.local_ratio = local;

    double coeff_norm = 0.0;
    for (int j = 0; j < s.basis.dim(); ++j) {
        const double aj = std::abs(s.coeffs[static_cast<std::size_t>(j)]);
        const double dj = g.span_length(j, k);
        if (sup) {
            coeff_norm = std::max(coeff_norm, aj);
        } else {
            coeff_norm += std::pow(aj, p) * dj;
        }
    }
    if (!sup) coeff_norm = std::pow(coeff_norm, 1.0 / p);
    const double norm = spline_lp_norm(s, p, 0.0, 1.0);
    report.global_ratio = coeff_norm > 0.0 ? norm / coeff_norm : 1.0;
    return report;
}

std::vector<double> insert_knot(std::span<const double> knots, int order,
                                std::span<const double> coeffs, double x) {
    const int m = static_cast<int>(knots.size());
    if (static_cast<int>(coeffs.size()) != m - order)
        throw std::invalid_argument("insert_knot: coefficient count does not match knots/order");
    // Rightmost span with knots[mu] <= x < knots[mu+1].
    int mu = static_cast<int>(std::upper_bound(knots.begin(), knots.end(), x) - knots.begin()) - 1;
    mu = std::clamp(mu, order - 1, m - order - 1);
    std::vector<double> out(coeffs.size() + 1, 0.0);
    for (int i = 0; i < static_cast<int>(out.size()); ++i) {
        if (i <= mu - order + 1) {
            out[static_cast<std::size_t>(i)] = coeffs[static_cast<std::size_t>(i)];
        } else if (i >= mu + 1) {
            out[static_cast<std::size_t>(i)] = coeffs[static_cast<std::size_t>(i - 1)];
        } else {
            const double den = knots[static_cast<std::size_t>(i + order - 1)] -
                               knots[static_cast<std::size_t>(i)];
            const double beta = den > 0.0 ? (x - knots[static_cast<std::size_t>(i)]) / den : 0.0;
            out[static_cast<std::size_t>(i)] = beta * coeffs[static_cast<std::size_t>(i)] +
                                               (1.0 - beta) * coeffs[static_cast<std::size_t>(i - 1)];
        }
    }
    return out;
}

std::vector<double> monomial_to_bernstein(std::span<const double> mono, int order) {
    const int d = order - 1;
    if (static_cast<int>(mono.size()) > order)
        throw std::invalid_argument("monomial_to_bernstein: degree too high for the order");
    // x^m = sum_{i>=m} [C(i,m)/C(d,m)] B_{i,d}(x).
    std::vector<std::vector<double>> binom(static_cast<std::size_t>(d + 1),
                                           std::vector<double>(static_cast<std::size_t>(d + 1), 0.0));
    for (int i = 0; i <= d; ++i) {
        binom[static_cast<std::size_t>(i)][0] = 1.0;
        for (int j = 1; j <= i; ++j)
            binom[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] =
                binom[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j - 1)] +
                binom[static_cast<std::size_t>(i - 1)][static_cast<std::size_t>(j)];
    }
    std::vector<double> b(static_cast<std::size_t>(order), 0.0);
    for (int m = 0; m < static_cast<int>(mono.size()); ++m) {
        const double am = mono[static_cast<std::size_t>(m)];
        if (am == 0.0) continue;
        for (int i = m; i <= d; ++i)
            b[static_cast<std::size_t>(i)] += am *
                                              binom[static_cast<std::size_t>(i)][static_cast<std::size_t>(m)] /
                                              binom[static_cast<std::size_t>(d)][static_cast<std::size_t>(m)];
    }
    return b;
}

std::vector<double> polynomial_on_grid(std::span<const double> mono, const Grid& grid) {
    const int k = grid.order();
    std::vector<double> coeffs = monomial_to_bernstein(mono, k);
    std::vector<double> knots(static_cast<std::size_t>(2 * k), 0.0);
    for (int i = 0; i < k; ++i) knots[static_cast<std::size_t>(k + i)] = 1.0;
    for (int i = k; i < grid.size() - k; ++i) {
        const double x = grid.knot(i);
        coeffs = insert_knot(knots, k, coeffs, x);
        knots.insert(std::upper_bound(knots.begin(), knots.end(), x), x);
    }
    return coeffs;
}

}  // namespace splineortho
