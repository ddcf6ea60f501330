#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "splineortho/knots.hpp"

using namespace splineortho;

TEST_CASE("make_grid assembles T_n with k-fold boundary knots") {
    {
        KnotSequence seq{2, {0.5}};
        const Grid g = make_grid(seq, 2);
        const std::vector<double> expected{0, 0, 0.5, 1, 1};
        REQUIRE(g.size() == 5);
        for (int i = 0; i < g.size(); ++i) CHECK(g.knot(i) == expected[static_cast<std::size_t>(i)]);
    }
    {
        KnotSequence seq{3, {0.5, 0.5}};
        const Grid g = make_grid(seq, 3);
        const std::vector<double> expected{0, 0, 0, 0.5, 0.5, 1, 1, 1};
        REQUIRE(g.size() == 8);
        for (int i = 0; i < g.size(); ++i) CHECK(g.knot(i) == expected[static_cast<std::size_t>(i)]);
    }
    {
        KnotSequence seq{2, {0.5, 0.25, 0.75}};
        const Grid g = make_grid(seq, 4);
        const std::vector<double> expected{0, 0, 0.25, 0.5, 0.75, 1, 1};
        REQUIRE(g.size() == 7);
        for (int i = 0; i < g.size(); ++i) CHECK(g.knot(i) == expected[static_cast<std::size_t>(i)]);
    }
}

TEST_CASE("make_grid rejects bad input") {
    KnotSequence seq{2, {0.5, 0.5, 0.5}};
    CHECK_THROWS_AS(make_grid(seq, 1), admissibility_error);
    CHECK_THROWS_AS(make_grid(seq, 4), admissibility_error);  // 0.5 three times, k = 2
    KnotSequence outside{2, {1.5}};
    CHECK_THROWS_AS(make_grid(outside, 2), admissibility_error);
}

TEST_CASE("grids at consecutive levels differ by one inserted point") {
    Rng rng(7);
    const KnotSequence seq = random_sequence(3, 40, rng, 0.2);
    for (int n = 3; n <= seq.max_level(); ++n) {
        const Grid a(seq, n - 1), b(seq, n);
        REQUIRE(b.size() == a.size() + 1);
        std::multiset<double> ma(a.knots().begin(), a.knots().end());
        std::multiset<double> mb(b.knots().begin(), b.knots().end());
        ma.insert(seq.points[static_cast<std::size_t>(n - 2)]);
        CHECK(ma == mb);
        const int idx = b.new_knot_index(a);
        CHECK(b.knot(idx) == seq.points[static_cast<std::size_t>(n - 2)]);
    }
}

TEST_CASE("dyadic midpoint sequence is 1-regular with gamma exactly 2") {
    const KnotSequence seq = dyadic_sequence(2, 30);
    const RegularityReport rep = regularity_parameter(seq, 1, 31);

    // Independent enumeration over all grids with a multiset.
    double worst = 1.0;
    std::multiset<double> knots{0.0, 1.0};
    for (int n = 2; n <= 31; ++n) {
        knots.insert(seq.points[static_cast<std::size_t>(n - 2)]);
        std::vector<double> sorted(knots.begin(), knots.end());
        for (std::size_t i = 0; i + 2 < sorted.size(); ++i) {
            const double a = sorted[i + 1] - sorted[i], b = sorted[i + 2] - sorted[i + 1];
            if (a > 0 && b > 0) worst = std::max(worst, std::max(a / b, b / a));
        }
    }
    CHECK(worst == 2.0);
    CHECK(rep.gamma == 2.0);
    CHECK(rep.ell == 1);
}

TEST_CASE("uniform grid at a full dyadic level has gamma 1") {
    const KnotSequence seq = uniform_sequence(2, 7);  // spacing 1/8, exact in binary
    const Grid g(seq, 8);
    CHECK(grid_regularity_ratio(g, 1) == 1.0);
}

TEST_CASE("a tiny interior gap drives gamma to the neighbor ratio") {
    const double eps = 1e-6;
    const KnotSequence seq{2, {0.5, 0.5 + eps}};
    const RegularityReport rep = regularity_parameter(seq, 1, 3);
    const double gap = (0.5 + eps) - 0.5;  // the stored neighbor of the tiny gap
    CHECK(rep.gamma == 0.5 / gap);
    CHECK(rep.gamma == doctest::Approx((0.5 - eps) / eps).epsilon(1e-5));
    CHECK(rep.witness_n == 3);
}

TEST_CASE("zero-length spans beside positive ones give infinite gamma") {
    const KnotSequence seq{2, {0.5, 0.5}};
    const RegularityReport rep = regularity_parameter(seq, 1, 3);
    CHECK(std::isinf(rep.gamma));
}

TEST_CASE("regularity_parameter is monotone in n_max") {
    Rng rng(11);
    const KnotSequence seq = random_sequence(2, 60, rng);
    double prev = 1.0;
    for (int n_max = 2; n_max <= seq.max_level(); n_max += 7) {
        const double gamma = regularity_parameter(seq, 1, n_max).gamma;
        CHECK(gamma >= prev);
        prev = gamma;
    }
}

TEST_CASE("k-regularity parameter stays below the squared (k-1) parameter") {
    // Empirical diagnostic observed on every test sequence.
    Rng rng(13);
    for (int k = 3; k <= 4; ++k) {
        const KnotSequence seqs[] = {dyadic_sequence(k, 40), uniform_sequence(k, 40),
                                     random_sequence(k, 40, rng)};
        for (const KnotSequence& seq : seqs) {
            const double glow = regularity_parameter(seq, k - 1, seq.max_level()).gamma;
            const double ghigh = regularity_parameter(seq, k, seq.max_level()).gamma;
            CHECK(ghigh <= glow * glow * (1 + 1e-12));
        }
    }
}

TEST_CASE("regularity_parameter validates ell") {
    const KnotSequence seq = dyadic_sequence(2, 7);
    CHECK_THROWS_AS(regularity_parameter(seq, 3, 7), std::invalid_argument);
    CHECK_THROWS_AS(regularity_parameter(seq, 0, 7), std::invalid_argument);
}

TEST_CASE("nested_decay_check on a halving dyadic chain") {
    const KnotSequence seq = dyadic_sequence(2, 63);
    std::vector<GridInterval> chain;
    // D^{(1)} intervals [0, 2^-m] appear once the midpoint sequence fills in.
    chain.push_back(GridInterval{2, 1, 1, 0.0, 0.5});
    chain.push_back(GridInterval{4, 1, 1, 0.0, 0.25});
    CHECK(nested_decay_check(chain, 1.0, 1));  // bound |V_2| <= |V_1| / 2 with equality
}

TEST_CASE("nested_decay_check fails when lengths do not contract") {
    std::vector<GridInterval> chain;
    chain.push_back(GridInterval{2, 1, 1, 0.0, 1.0});
    chain.push_back(GridInterval{3, 1, 1, 0.0, 1.0 - 1e-12});
    CHECK_FALSE(nested_decay_check(chain, 1.0, 1));
}

TEST_CASE("nested_decay_check rejects non-nested chains") {
    std::vector<GridInterval> chain;
    chain.push_back(GridInterval{2, 1, 1, 0.0, 0.5});
    chain.push_back(GridInterval{3, 1, 1, 0.25, 0.75});
    CHECK_THROWS_AS(nested_decay_check(chain, 1.0, 1), std::invalid_argument);
    chain.pop_back();
    CHECK_THROWS_AS(nested_decay_check(chain, 1.0, 1), std::invalid_argument);  // too short
}

TEST_CASE("nested decay bound holds on sampled chains of regular sequences") {
    Rng rng(17);
    struct Case {
        KnotSequence seq;
        int ell;
    };
    const Case cases[] = {{dyadic_sequence(2, 63), 1},
                          {dyadic_sequence(3, 63), 2},
                          {random_sequence(2, 63, rng), 1}};
    for (const Case& c : cases) {
        const double gamma = regularity_parameter(c.seq, c.ell, c.seq.max_level()).gamma;
        int produced = 0;
        for (int trial = 0; trial < 10000 && produced < 2000; ++trial) {
            auto chain = sample_nested_chain(c.seq, c.ell, 2 * c.ell, c.seq.max_level(), rng);
            if (!chain) continue;
            ++produced;
            CHECK(nested_decay_check(*chain, gamma, c.ell));
        }
        CHECK(produced > 100);
    }
}

TEST_CASE("count_points_between follows the endpoint conventions") {
    const KnotSequence seq{2, {0.25, 0.5, 0.75}};
    const Grid g(seq, 4);  // knots 0,0,0.25,0.5,0.75,1,1
    CHECK(count_points_between(g, Segment(0.1), Segment(0.75, 1.0)) == 3);
    CHECK(count_points_between(g, Segment(0.0, 0.5), Segment(0.5, 1.0)) == 1);
    CHECK(count_points_between(g, Segment(0.25, 0.5), Segment(0.25, 0.5)) == 0);
    // Non-knot facing endpoints are not counted.
    CHECK(count_points_between(g, Segment(0.1), Segment(0.9)) == 3);
    // Multiplicities of strictly inner knots count in full.
    const KnotSequence rep{3, {0.5, 0.5, 0.3}};
    const Grid g2(rep, 4);
    CHECK(count_points_between(g2, Segment(0.4), Segment(0.9)) == 2);
}

TEST_CASE("sequence generators produce valid sequences") {
    Rng rng(23);
    for (int k = 2; k <= 4; ++k) {
        dyadic_sequence(k, 100).validate();
        uniform_sequence(k, 100).validate();
        random_sequence(k, 100, rng, 0.3).validate();
    }
    const KnotSequence d = dyadic_sequence(2, 7);
    const std::vector<double> expected{0.5, 0.25, 0.75, 0.125, 0.375, 0.625, 0.875};
    CHECK(d.points == expected);
}
