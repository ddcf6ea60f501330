#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "splineortho/orthosys.hpp"
#include "splineortho/quadrature.hpp"

using namespace splineortho;

namespace {

double poly_inner(const std::vector<double>& a, const std::vector<double>& b) {
    // Exact <x^i, x^j> = 1/(i+j+1) on [0,1].
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            sum += a[i] * b[j] / static_cast<double>(i + j + 1);
    return sum;
}

/// Max relative coefficient difference after aligning the global sign.
double oracle_distance(const KnotSequence& seq, const OrthoFunction& f) {
    const std::vector<double> ref = test::reference_orthonormal_coeffs(seq, f.n);
    REQUIRE(ref.size() == f.coeffs.size());
    double scale = 0.0;
    std::size_t peak = 0;
    for (std::size_t i = 0; i < ref.size(); ++i)
        if (std::abs(ref[i]) > scale) {
            scale = std::abs(ref[i]);
            peak = i;
        }
    const double sign = (ref[peak] > 0.0) == (f.coeffs[peak] > 0.0) ? 1.0 : -1.0;
    double worst = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i)
        worst = std::max(worst, std::abs(f.coeffs[i] - sign * ref[i]) / scale);
    return worst;
}

}  // namespace

TEST_CASE("initial polynomials are the shifted Legendre system") {
    for (int k = 2; k <= 4; ++k) {
        const auto polys = initial_polynomials(k);
        REQUIRE(static_cast<int>(polys.size()) == k);
        CHECK(polys[0] == std::vector<double>{1.0});
        for (std::size_t a = 0; a < polys.size(); ++a) {
            CHECK(polys[a].back() > 0.0);  // positive leading coefficient
            for (std::size_t b = 0; b < polys.size(); ++b) {
                const double target = a == b ? 1.0 : 0.0;
                CHECK(std::abs(poly_inner(polys[a], polys[b]) - target) < 1e-12);
            }
        }
    }
    const auto k2 = initial_polynomials(2);
    CHECK(k2[1][0] == doctest::Approx(-std::sqrt(3.0)).epsilon(1e-15));
    CHECK(k2[1][1] == doctest::Approx(2.0 * std::sqrt(3.0)).epsilon(1e-15));
}

TEST_CASE("alpha coefficients on uniform grids") {
    {
        const KnotSequence seq{2, {0.5}};
        const Grid g(seq, 2);
        const AlphaVector alpha = alpha_coefficients(g, 2);
        CHECK(alpha.at(0) == doctest::Approx(0.5).epsilon(1e-15));
        CHECK(alpha.at(1) == doctest::Approx(-1.0).epsilon(1e-15));
        CHECK(alpha.at(2) == doctest::Approx(0.5).epsilon(1e-15));
    }
    {
        const KnotSequence seq = uniform_sequence(2, 7);
        const Grid g(seq, 8);
        const Grid coarser(seq, 7);
        const int i0 = g.new_knot_index(coarser);
        const AlphaVector alpha = alpha_coefficients(g, i0);
        CHECK(alpha.at(i0 - 2) == doctest::Approx(0.5).epsilon(1e-14));
        CHECK(alpha.at(i0 - 1) == doctest::Approx(-1.0).epsilon(1e-14));
        CHECK(alpha.at(i0) == doctest::Approx(0.5).epsilon(1e-14));
    }
}

TEST_CASE("alpha signs alternate and magnitudes stay within one") {
    Rng rng(19);
    for (int k = 2; k <= 4; ++k) {
        const KnotSequence seq = random_sequence(k, 30, rng, 0.1);
        for (int n = 3; n <= seq.max_level(); ++n) {
            const Grid g(seq, n);
            const Grid coarser(seq, n - 1);
            const int i0 = g.new_knot_index(coarser);
            const AlphaVector alpha = alpha_coefficients(g, i0);
            for (int j = i0 - k; j <= i0; ++j) {
                const double expected_sign = ((j - i0 + k) % 2 == 0) ? 1.0 : -1.0;
                CHECK(alpha.at(j) * expected_sign >= 0.0);
                CHECK(std::abs(alpha.at(j)) <= 1.0 + 1e-14);
            }
            // For k = 2 both defining products at j = i0 - 1 are empty.
            if (k == 2) CHECK(alpha.at(i0 - 1) == -1.0);
        }
    }
}

TEST_CASE("characteristic interval selection on uniform grids") {
    const KnotSequence seq = uniform_sequence(2, 7);
    const Grid g(seq, 8);
    const Grid coarser(seq, 7);
    const int i0 = g.new_knot_index(coarser);
    const AlphaVector alpha = alpha_coefficients(g, i0);
    const CharacteristicSelection sel = characteristic_interval(g, i0, alpha);
    CHECK(sel.lambda0.size() == 3);  // all windows tie
    REQUIRE(sel.lambda1.size() == 1);
    CHECK(sel.lambda1[0] == i0 - 1);  // |alpha| = 1 wins
    CHECK(sel.j0 == i0 - 1);
    CHECK(sel.J.left == g.knot(i0 - 1));  // leftmost longest grid interval
    CHECK(sel.J.right == g.knot(i0));
}

TEST_CASE("first refinement of the unit interval selects its left half") {
    const KnotSequence seq{2, {0.5}};
    const Grid g(seq, 2);
    const AlphaVector alpha = alpha_coefficients(g, 2);
    const CharacteristicSelection sel = characteristic_interval(g, 2, alpha);
    CHECK(sel.J.left == 0.0);
    CHECK(sel.J.right == 0.5);
}

TEST_CASE("a much shorter support window forces the selection") {
    // One window is more than twice shorter than every other; the first
    // selection step keeps only it, whatever alpha says.
    const KnotSequence seq{2, {0.5, 0.5 + 1e-4, 0.5 - 1e-4}};
    const Grid g(seq, 4);
    const Grid coarser(seq, 3);
    const int i0 = g.new_knot_index(coarser);  // inserts 0.5 - 1e-4
    const AlphaVector alpha = alpha_coefficients(g, i0);
    const CharacteristicSelection sel = characteristic_interval(g, i0, alpha);
    double min_len = 1e300;
    for (int j = i0 - 2; j <= i0; ++j) min_len = std::min(min_len, g.span_length(j, 2));
    for (int j : sel.lambda0) CHECK(g.span_length(j, 2) <= 2.0 * min_len);
    CHECK(sel.lambda0.size() == 1);
}

TEST_CASE("the first orthonormal spline function matches the oracle") {
    const KnotSequence seq{2, {0.5}};
    const OrthoFunction f = orthonormal_function(seq, 2);
    CHECK(oracle_distance(seq, f) < 1e-9);
    CHECK(f.coeffs[static_cast<std::size_t>(f.j0)] > 0.0);
}

TEST_CASE("orthonormal functions are orthogonal to the coarser space") {
    Rng rng(23);
    for (int k = 2; k <= 4; ++k) {
        const KnotSequence seq = random_sequence(k, 24, rng, 0.1);
        for (int n : {2, 7, 15, 24}) {
            const OrthoFunction f = orthonormal_function(seq, n);
            const Spline fn{BSplineBasis(*f.grid), f.coeffs};
            std::vector<double> coarse_knots;
            if (n == 2) {
                coarse_knots.assign(static_cast<std::size_t>(2 * k), 0.0);
                for (int i = 0; i < k; ++i) coarse_knots[static_cast<std::size_t>(k + i)] = 1.0;
            } else {
                const Grid cg(seq, n - 1);
                coarse_knots.assign(cg.knots().begin(), cg.knots().end());
            }
            std::vector<long double> ck(coarse_knots.begin(), coarse_knots.end());
            const int dim_coarse = static_cast<int>(coarse_knots.size()) - k;
            for (int i = 0; i < dim_coarse; ++i) {
                double inner = 0.0;
                for (int span = k - 1; span < f.grid->size() - k; ++span) {
                    const double a = f.grid->knot(span), b = f.grid->knot(span + 1);
                    if (b <= a) continue;
                    inner += gauss_integrate(
                        [&](double x) {
                            return fn(x) * static_cast<double>(test::bspline_recursive(
                                               ck, i, k, static_cast<long double>(x)));
                        },
                        a, b, k + 1);
                }
                CHECK(std::abs(inner) < 1e-10);
            }
            const SymmetricBandMatrix G = gram(BSplineBasis(*f.grid));
            CHECK(std::abs(G.quadratic_form(f.coeffs) - 1.0) < 1e-10);
        }
    }
}

TEST_CASE("window coefficients inherit the checkerboard cancellation") {
    Rng rng(29);
    const KnotSequence seq = random_sequence(3, 30, rng);
    for (int n : {5, 12, 30}) {
        const Grid g(seq, n);
        const Grid coarser(seq, n - 1);
        const int i0 = g.new_knot_index(coarser);
        const AlphaVector alpha = alpha_coefficients(g, i0);
        const SymmetricBandMatrix G = gram(BSplineBasis(g));
        std::vector<int> window;
        for (int j = i0 - 3; j <= i0; ++j) window.push_back(j);
        const GramInverseRows rows = dual_rows(G, window);
        for (int l = 0; l < G.dim(); ++l) {
            double signed_sum = 0.0, abs_sum = 0.0;
            for (int j : window) {
                const double term = alpha.at(j) * rows.row(j)[static_cast<std::size_t>(l)];
                signed_sum += term;
                abs_sum += std::abs(term);
            }
            CHECK(abs_sum - std::abs(signed_sum) <= 1e-12 * (1.0 + abs_sum));
        }
    }
}

TEST_CASE("build_system produces an orthonormal family") {
    {
        const OrthoSystem system = build_system(dyadic_sequence(2, 14), 15);
        CHECK(orthonormality_defect(system) < 1e-9);
    }
    {
        Rng rng(31);
        const KnotSequence seq = random_sequence(3, 99, rng);
        const OrthoSystem system = build_system(seq, 100);
        CHECK(orthonormality_defect(system) < 1e-9);
        double worst = 0.0;
        for (int n = 2; n <= 100; ++n)
            worst = std::max(worst, oracle_distance(seq, system.function_at_level(n)));
        CHECK(worst < 1e-7);
    }
}

TEST_CASE("systems stay orthonormal with repeated interior knots") {
    // Multiplicity up to k, i.e. members may be discontinuous.
    for (int k = 2; k <= 4; ++k) {
        Rng rng(5000 + k);
        const KnotSequence seq = random_sequence(k, 60, rng, 0.35);
        int max_mult = 0;
        for (double t : seq.points) {
            int c = 0;
            for (double u : seq.points) c += u == t ? 1 : 0;
            max_mult = std::max(max_mult, c);
        }
        CHECK(max_mult >= 2);
        CHECK(orthonormality_defect(build_system(seq, 60)) < 1e-9);
    }
}

TEST_CASE("a system at N = 2 has k + 1 members") {
    for (int k = 2; k <= 4; ++k) {
        const KnotSequence seq{k, {0.5}};
        const OrthoSystem system = build_system(seq, 2);
        CHECK(system.size() == k + 1);
    }
}

TEST_CASE("sign convention and fine-grid representation") {
    Rng rng(37);
    const KnotSequence seq = random_sequence(2, 40, rng);
    const OrthoSystem system = build_system(seq, 40);
    for (int n = 2; n <= 40; ++n) {
        const OrthoFunction& f = system.function_at_level(n);
        CHECK(f.coeffs[static_cast<std::size_t>(f.j0)] > 0.0);
        CHECK(f.J.left >= f.grid->knot(f.j0));
        CHECK(f.J.right <= f.grid->knot(f.j0 + system.order()));
    }
    for (int t = 0; t < 50; ++t) {
        const double x = rng.uniform();
        for (int n : {2, 17, 40}) {
            const int member = system.member_of_level(n);
            const OrthoFunction& f = system.function_at_level(n);
            CHECK(system.eval(member, x) == doctest::Approx(f(x)).epsilon(1e-11));
        }
    }
}

TEST_CASE("decay report finds exponential coefficient decay") {
    const KnotSequence seq = dyadic_sequence(2, 255);
    const OrthoSystem system = build_system(seq, 256);
    double min_concentration = 1e300, worst_C = 0.0;
    for (int n : {2, 3, 17, 63, 64, 200, 256}) {
        const DecayReport rep = decay_report(system.function_at_level(n));
        CHECK(rep.q <= 0.95);
        CHECK(std::isfinite(rep.C));
        worst_C = std::max(worst_C, rep.C);
        min_concentration = std::min(min_concentration, rep.concentration_l2);
        CHECK(rep.peak_ratio > 0.0);
        if (n > 4) CHECK(rep.coeff_slope < 0.0);
    }
    CHECK(min_concentration >= 0.1);
    CHECK(worst_C < 1e300);
}

TEST_CASE("decay report at the first refinement") {
    const KnotSequence seq{3, {0.4, 0.7}};
    const DecayReport rep = decay_report(orthonormal_function(seq, 2));
    CHECK(rep.q < 1.0);
    CHECK(std::isfinite(rep.C));
    CHECK(rep.concentration_l2 > 0.0);
    CHECK(rep.concentration_l2 <= 1.0 + 1e-12);
}

TEST_CASE("characteristic interval combinatorics stay bounded") {
    const OrthoSystem system = build_system(dyadic_sequence(2, 127), 128);
    CharCombinatoricsParams params;
    params.seed = 5;
    const CharCombinatorics rep = char_combinatorics(system, params);
    CHECK(rep.n0_max <= 4.0);
    CHECK(rep.n0_max >= 1.0);
    CHECK(rep.offsupport_ratio_max < 100.0);
    CHECK(rep.nsum_max < 100.0);
    CHECK(rep.msum_max < 100.0);

    const OrthoSystem sys3 = build_system(dyadic_sequence(3, 127), 128);
    const CharCombinatorics rep3 = char_combinatorics(sys3, params);
    CHECK(rep3.n0_max < 20.0);
    CHECK(rep3.offsupport_ratio_max < 100.0);
}

TEST_CASE("build_system validates its inputs") {
    const KnotSequence seq = dyadic_sequence(2, 7);
    CHECK_THROWS_AS(build_system(seq, 1), std::invalid_argument);
    CHECK_THROWS_AS(build_system(seq, 100), std::invalid_argument);
}
