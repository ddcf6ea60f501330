#include "splineortho/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace splineortho {

namespace {

GaussRule compute_rule(int n) {
    GaussRule rule;
    rule.nodes.resize(static_cast<std::size_t>(n));
    rule.weights.resize(static_cast<std::size_t>(n));
    // Newton iteration on P_n, symmetric roots.
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(M_PI * (static_cast<double>(i) + 0.75) / (static_cast<double>(n) + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = static_cast<double>(n) * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        rule.nodes[static_cast<std::size_t>(i)] = -x;
        rule.nodes[static_cast<std::size_t>(n - 1 - i)] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        rule.weights[static_cast<std::size_t>(i)] = w;
        rule.weights[static_cast<std::size_t>(n - 1 - i)] = w;
    }
    return rule;
}

}  // namespace

const GaussRule& gauss_rule(int n) {
    if (n < 1) throw std::invalid_argument("gauss_rule: n must be >= 1");
    static std::map<int, GaussRule> cache;
    static std::mutex mtx;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, compute_rule(n)).first;
    return it->second;
}

double gauss_integrate(const std::function<double(double)>& f, double a, double b, int n) {
    if (a == b) return 0.0;
    const GaussRule& rule = gauss_rule(n);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        sum += rule.weights[i] * f(mid + half * rule.nodes[i]);
    return sum * half;
}

namespace {

double simpson(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptive_step(const std::function<double(double)>& f, double a, double fa, double b,
                     double fb, double m, double fm, double whole, double tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(a, fa, m, fm, flm);
    const double right = simpson(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
    return adaptive_step(f, a, fa, m, fm, lm, flm, left, 0.5 * tol, depth - 1) +
           adaptive_step(f, m, fm, b, fb, rm, frm, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_integrate(const std::function<double(double)>& f, double a, double b,
                          double rel_tol, int max_depth) {
    if (a == b) return 0.0;
    const double fa = f(a), fb = f(b), m = 0.5 * (a + b), fm = f(m);
    const double whole = simpson(a, fa, b, fb, fm);
    const double tol = std::max(std::abs(whole), 1e-30) * rel_tol;
    return adaptive_step(f, a, fa, b, fb, m, fm, whole, tol, max_depth);
}

double integrate_abs_poly(const std::function<double(double)>& f, double a, double b, int degree,
                          double rel_tol) {
    if (a >= b) return 0.0;
    const int probes = degree + 3;
    struct Frame { double a, b; int depth; };
    double total = 0.0;
    std::vector<Frame> stack{{a, b, 0}};
    while (!stack.empty()) {
        const Frame fr = stack.back();
        stack.pop_back();
        bool pos = false, neg = false;
        for (int i = 0; i <= probes; ++i) {
            const double x = fr.a + (fr.b - fr.a) * static_cast<double>(i) / probes;
            const double v = f(x);
            pos = pos || v > 0;
            neg = neg || v < 0;
        }
        if (!pos || !neg || fr.depth > 48 || (fr.b - fr.a) < rel_tol * (b - a)) {
            // One sign (or interval negligibly small): Gauss of f is exact.
            const int n = degree / 2 + 1;
            total += std::abs(gauss_integrate(f, fr.a, fr.b, n));
            continue;
        }
        const double m = 0.5 * (fr.a + fr.b);
        stack.push_back({fr.a, m, fr.depth + 1});
        stack.push_back({m, fr.b, fr.depth + 1});
    }
    return total;
}

}  // namespace splineortho
