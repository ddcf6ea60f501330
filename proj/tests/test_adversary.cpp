#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "splineortho/adversary.hpp"
#include "splineortho/quadrature.hpp"

using namespace splineortho;

namespace {

AdversarialConfig config(int k, int stages, double A = 8.0, double delta = 2e-8) {
    AdversarialConfig cfg;
    cfg.k = k;
    cfg.gamma = 4.0;
    cfg.stages = stages;
    cfg.A = A;
    cfg.delta = delta;
    return cfg;
}

}  // namespace

TEST_CASE("a single-stage construction satisfies all six properties") {
    AdversarialConfig cfg = config(2, 1, 2.0, 1e-4);
    const AdversarialSequence adv = generate(cfg);
    const StagePropertyReport rep = verify_stage_properties(adv, cfg.A);
    for (int i = 0; i < 6; ++i) {
        INFO("item ", i + 1, " witness: ", rep.items[i].witness);
        CHECK(rep.items[i].pass);
    }
    // With one stage the pairwise items hold vacuously.
    CHECK(rep.items[0].witness.empty());
    CHECK(rep.items[1].witness.empty());
}

TEST_CASE("all six properties hold across orders and ladder depths") {
    for (int k = 2; k <= 4; ++k) {
        for (int stages : {1, 4, 8}) {
            const AdversarialSequence adv = generate(config(k, stages));
            CHECK(static_cast<int>(adv.stages.size()) == stages);
            const StagePropertyReport rep = verify_stage_properties(adv, 8.0);
            CHECK(rep.all_pass());
        }
    }
}

TEST_CASE("infeasible ladders are rejected with the largest feasible depth") {
    AdversarialConfig cfg = config(2, 20, 2.0, 0.1);
    try {
        generate(cfg);
        FAIL("expected feasibility_error");
    } catch (const feasibility_error& e) {
        CHECK(e.max_feasible_stages < 20);
        CHECK(e.max_feasible_stages >= 0);
    }
}

TEST_CASE("generated sequences are k-regular but badly non-(k-1)-regular") {
    for (int k = 2; k <= 4; ++k) {
        const AdversarialConfig cfg = config(k, 4);
        const AdversarialSequence adv = generate(cfg);
        const double gk = regularity_parameter(adv.seq, k, adv.seq.max_level()).gamma;
        const double glow = regularity_parameter(adv.seq, k - 1, adv.seq.max_level()).gamma;
        CHECK(gk <= cfg.gamma);
        CHECK(glow >= cfg.A);
        CHECK(glow > 10.0 * cfg.gamma);
    }
}

TEST_CASE("a duplicated stage violates the disjointness item") {
    AdversarialSequence adv = generate(config(2, 2));
    adv.stages.push_back(adv.stages.back());
    const StagePropertyReport rep = verify_stage_properties(adv, 8.0);
    CHECK_FALSE(rep.items[0].pass);
    CHECK_FALSE(rep.items[0].witness.empty());
}

TEST_CASE("the adversarial atom is the two-step profile at the cluster edge") {
    const double delta = 1e-4;
    const AdversarialSequence adv = generate(config(2, 1, 2.0, delta));
    const Atom phi = adversarial_atom(adv);
    CHECK(phi.length() == doctest::Approx(4.0 * delta).epsilon(1e-12));
    CHECK(phi.invariant_defect() <= 1e-12);
    const double height = 1.0 / (4.0 * delta);
    CHECK(phi.profile.sup_abs(0.0, 1.0) == doctest::Approx(height).epsilon(1e-10));
    const double tau = adv.stages.front().lambda_right;
    CHECK(phi.profile((tau + phi.lo) / 2) == doctest::Approx(height).epsilon(1e-10));
    CHECK(phi.profile((tau + phi.hi) / 2) == doctest::Approx(-height).epsilon(1e-10));

    // Moments: the atom annihilates constants and pairs with x to -|Lambda_0|.
    const double m0 = phi.profile.integral(0.0, 1.0);
    CHECK(std::abs(m0) < 1e-12);
    double m1 = 0.0;
    for (std::size_t i = 0; i < phi.profile.values.size(); ++i) {
        const double a = phi.profile.breaks[i], b = phi.profile.breaks[i + 1];
        m1 += phi.profile.values[i] * 0.5 * (b * b - a * a);
    }
    CHECK(m1 == doctest::Approx(-delta).epsilon(1e-6));
}

TEST_CASE("atoms that would leave the unit interval are rejected") {
    AdversarialSequence adv = generate(config(2, 1));
    adv.stages.front().lambda_left = 1e-12;
    adv.stages.front().lambda_right = 0.5;  // width 0.5, support would spill over 1
    CHECK_THROWS_AS(adversarial_atom(adv), std::invalid_argument);
}

TEST_CASE("a single stage already contributes to the divergence integral") {
    const DivergenceTable table = divergence_experiment({1}, config(2, 1));
    REQUIRE(table.rows.size() == 1);
    CHECK(table.rows[0].G > 0.0);
    CHECK(table.rows[0].stage_sum > 0.0);
    CHECK(table.rows[0].stage_sum <= table.rows[0].G + 1e-9);
}

TEST_CASE("stage sums grow linearly along the ladder") {
    for (int k = 2; k <= 3; ++k) {
        const DivergenceTable table = divergence_experiment({2, 4, 8}, config(k, 1));
        CHECK(table.stage_sum_fit.slope > 0.0);
        CHECK(table.stage_sum_fit.r2 > 0.9);
        double lo = 1e300, hi = 0.0;
        for (const DivergenceRow& row : table.rows) {
            CHECK(row.stage_sum <= row.G + 1e-9);
            lo = std::min(lo, row.min_coeff_product);
            hi = std::max(hi, row.min_coeff_product);
        }
        CHECK(lo > 0.0);
        CHECK(hi / lo < 1.5);  // the coefficient lower-bound scale is stable
    }
}

TEST_CASE("deep ladders with tiny clusters stay well conditioned") {
    AdversarialConfig cfg = config(2, 20, 8.0, 1e-9);
    const AdversarialSequence adv = generate(cfg);
    CHECK(verify_stage_properties(adv, cfg.A).all_pass());
    const DivergenceTable table = divergence_experiment({4, 16, 20}, cfg);
    CHECK(table.stage_sum_fit.slope > 0.0);
    CHECK(table.stage_sum_fit.r2 > 0.99);
    for (const DivergenceRow& row : table.rows)
        CHECK(row.min_coeff_product == doctest::Approx(0.4076).epsilon(0.05));
}

TEST_CASE("the dyadic control keeps the square function flat") {
    const DivergenceTable table = divergence_experiment({2, 4, 8}, config(2, 1));
    double lo = 1e300, hi = 0.0;
    for (const DivergenceRow& row : table.rows) {
        lo = std::min(lo, row.control_square_norm);
        hi = std::max(hi, row.control_square_norm);
    }
    CHECK(lo > 0.0);
    CHECK(hi / lo < 3.0);
}

TEST_CASE("config validation") {
    AdversarialConfig cfg = config(2, 1);
    cfg.A = 1.0;
    CHECK_THROWS_AS(generate(cfg), std::invalid_argument);
    cfg = config(1, 1);
    CHECK_THROWS_AS(generate(cfg), std::invalid_argument);
    cfg = config(2, 1);
    cfg.gamma = 1.0;
    CHECK_THROWS_AS(generate(cfg), std::invalid_argument);
}
