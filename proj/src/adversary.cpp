#include "splineortho/adversary.hpp"

#include <algorithm>
#include <cmath>

#include "splineortho/quadrature.hpp"

namespace splineortho {

void AdversarialConfig::validate() const {
    if (k < 2) throw std::invalid_argument("AdversarialConfig: k must be >= 2");
    if (!(gamma > 1.0)) throw std::invalid_argument("AdversarialConfig: gamma must exceed 1");
    if (stages < 1) throw std::invalid_argument("AdversarialConfig: stages must be >= 1");
    if (!(A >= 2.0)) throw std::invalid_argument("AdversarialConfig: A must be >= 2");
    if (!(delta > 0.0)) throw std::invalid_argument("AdversarialConfig: delta must be positive");
}

namespace {

int max_feasible_stages(double A, double delta) {
    // s_0 = 2^stages * A * delta must stay below 1/32 so the graded skeleton
    // can host the window.
    int stages = 0;
    double s = 2.0 * A * delta;
    while (s < 1.0 / 32.0 && stages < 60) {
        ++stages;
        s *= 2.0;
    }
    return stages;
}

}  // namespace

AdversarialSequence generate(const AdversarialConfig& cfg) {
    cfg.validate();
    const int k = cfg.k;
    const int ell = cfg.stages;
    const int feasible = max_feasible_stages(cfg.A, cfg.delta);
    if (ell > feasible)
        throw feasibility_error(
            "generate: ladder of " + std::to_string(ell) + " stages does not fit in (0,1); at most " +
                std::to_string(feasible) + " are feasible for this A and delta",
            feasible);
    const double s0 = std::ldexp(1.0, ell) * cfg.A * cfg.delta;  // |L_0|, final |L_j| = 2 A delta
    const double delta = cfg.delta;

    AdversarialSequence adv;
    adv.config = cfg;
    adv.seq.k = k;
    auto& points = adv.seq.points;

    // Window edges around the anchor a, then graded chains grown outward by
    // repeated bisection toward the edges, alternating sides so that the two
    // innermost gaps stay within a factor 2 of each other. Single bisections
    // keep the k-span neighbor ratios of every prefix grid bounded.
    const double a = 0.4;
    const double bL = a - 2.0 * s0;
    const double bR = a + delta + 2.0 * s0;
    points.push_back(bL);
    points.push_back(bR);
    double lu = 0.0, rv = 1.0;  // innermost untouched gap endpoints
    while (bL - lu >= 4.0 * s0 || rv - bR >= 4.0 * s0) {
        if (bL - lu >= rv - bR) {
            const double mid = 0.5 * (lu + bL);
            points.push_back(mid);
            lu = mid;
        } else {
            const double mid = 0.5 * (bR + rv);
            points.push_back(mid);
            rv = mid;
        }
    }

    // The cluster: anchor a plus k-1 points spanning [a, a + delta].
    points.push_back(a);
    for (int i = 1; i <= k - 1; ++i)
        points.push_back(a + delta * static_cast<double>(i) / (k - 1));
    const double cluster_right = points.back();

    // Interleaved mirrored ladders: q_j = a - s_j, then the stage point
    // p_j = cluster_right + s_j with s_j = s_0 / 2^j.
    std::vector<int> stage_levels;
    for (int j = 0; j < ell; ++j) {
        const double sj = std::ldexp(s0, -j);
        points.push_back(a - sj);
        points.push_back(cluster_right + sj);
        stage_levels.push_back(static_cast<int>(points.size()) + 1);  // n of this insertion
    }
    adv.seq.validate();

    // The construction is designed for gamma >= ~3; confirm the target holds.
    const RegularityReport reg = regularity_parameter(adv.seq, k, adv.seq.max_level());
    if (reg.gamma > cfg.gamma)
        throw feasibility_error("generate: construction reaches k-regularity parameter " +
                                    std::to_string(reg.gamma) + " above the requested gamma",
                                feasible);

    // Stage metadata re-derived from the grids themselves.
    for (int j = 0; j < ell; ++j) {
        const int n = stage_levels[static_cast<std::size_t>(j)];
        const Grid grid(adv.seq, n);
        const Grid coarser(adv.seq, n - 1);
        const int i0 = grid.new_knot_index(coarser);
        AdversarialStage st;
        st.n = n;
        st.insert_index = i0;
        st.lambda_left = grid.knot(i0 - k);
        st.lambda_right = grid.knot(i0 - 1);
        st.L_left = grid.knot(i0 - 1);
        st.L_right = grid.knot(i0);
        st.R_left = grid.knot(i0);
        st.R_right = grid.knot(i0 + 1);
        adv.stages.push_back(st);
    }
    return adv;
}

StagePropertyReport verify_stage_properties(const AdversarialSequence& adv, double A) {
    StagePropertyReport report;
    const int k = adv.seq.k;
    const double gamma = adv.config.gamma;
    const double slack = 1.0 + 1e-12;
    auto fail = [&report](int item, const std::string& witness) {
        report.items[item].pass = false;
        if (report.items[item].witness.empty()) report.items[item].witness = witness;
    };

    std::vector<AdversarialStage> stages;
    for (const AdversarialStage& meta : adv.stages) {
        const Grid grid(adv.seq, meta.n);
        const Grid coarser(adv.seq, meta.n - 1);
        const int i0 = grid.new_knot_index(coarser);
        AdversarialStage st;
        st.n = meta.n;
        st.insert_index = i0;
        st.lambda_left = grid.knot(i0 - k);
        st.lambda_right = grid.knot(i0 - 1);
        st.L_left = grid.knot(i0 - 1);
        st.L_right = grid.knot(i0);
        st.R_left = grid.knot(i0);
        st.R_right = grid.knot(i0 + 1);
        stages.push_back(st);

        // (3): the grid interval left of the cluster is comparable to |L_j|.
        const double left_len = grid.knot(i0 - k) - grid.knot(i0 - k - 1);
        const double L = st.L_length();
        if (!(left_len <= (2.0 * gamma - 1.0) * L * slack) ||
            !(left_len * slack >= L / (2.0 * gamma)))
            fail(2, "stage " + std::to_string(st.n));
        // (4) and (5).
        if (!(st.R_length() <= (2.0 * gamma - 1.0) * L * slack))
            fail(3, "stage " + std::to_string(st.n));
        if (!(L <= 2.0 * (gamma + 1.0) * k * st.R_length() * slack))
            fail(4, "stage " + std::to_string(st.n));
        // (6).
        if (!(std::min(L, st.R_length()) * slack >= A * st.lambda_length()))
            fail(5, "stage " + std::to_string(st.n));
    }
    for (std::size_t i = 0; i < stages.size(); ++i) {
        for (std::size_t j = i + 1; j < stages.size(); ++j) {
            const auto& si = stages[i];
            const auto& sj = stages[j];
            const bool disjoint = si.R_right <= sj.R_left || sj.R_right <= si.R_left;
            if (!disjoint)
                fail(0, "stages " + std::to_string(si.n) + "," + std::to_string(sj.n));
            if (si.lambda_left != sj.lambda_left || si.lambda_right != sj.lambda_right)
                fail(1, "stages " + std::to_string(si.n) + "," + std::to_string(sj.n));
        }
    }
    return report;
}

Atom adversarial_atom(const AdversarialSequence& adv) {
    if (adv.stages.empty()) throw std::invalid_argument("adversarial_atom: no stages");
    const AdversarialStage& st0 = adv.stages.front();
    const double width = st0.lambda_length();
    if (!(width > 0.0)) throw std::invalid_argument("adversarial_atom: |Lambda_0| must be positive");
    const double tau = st0.lambda_right;
    const double x = tau - 2.0 * width, y = tau + 2.0 * width;
    if (x < 0.0 || y > 1.0)
        throw std::invalid_argument("adversarial_atom: support leaves the unit interval");
    Atom atom;
    atom.lo = x;
    atom.hi = y;
    const double h = 1.0 / (y - x);
    atom.profile.breaks = {0.0, x, tau, y, 1.0};
    atom.profile.values = {0.0, h, -h, 0.0};
    // Absorb the floating-point residue of the mean.
    const double residue = atom.profile.integral(x, y) / (y - x);
    atom.profile.values[1] -= residue;
    atom.profile.values[2] -= residue;
    return atom;
}

namespace {

double term_sup_norm1(const Expansion& e) {
    const Grid& grid = e.system().fine_grid();
    const int size = e.system().size();
    std::vector<double> terms(static_cast<std::size_t>(size));
    double prev = 0.0;
    for (int nodes = 8; nodes <= 32; nodes *= 2) {
        const GaussRule& rule = gauss_rule(nodes);
        double total = 0.0;
        for (int span = grid.order() - 1; span < grid.size() - grid.order(); ++span) {
            const double a = grid.knot(span), b = grid.knot(span + 1);
            if (b <= a) continue;
            const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
            for (std::size_t q = 0; q < rule.nodes.size(); ++q) {
                const double x = mid + half * rule.nodes[q];
                e.terms_at(x, terms.data());
                double sup = 0.0;
                for (double t : terms) sup = std::max(sup, std::abs(t));
                total += rule.weights[q] * half * sup;
            }
        }
        if (nodes > 8 && std::abs(total - prev) <= 1e-4 * std::abs(total)) return total;
        prev = total;
    }
    return prev;
}

}  // namespace

DivergenceTable divergence_experiment(const std::vector<int>& ladder,
                                      const AdversarialConfig& base) {
    DivergenceTable table;
    std::vector<double> xs, ys;
    for (int ell : ladder) {
        AdversarialConfig cfg = base;
        cfg.stages = ell;
        const AdversarialSequence adv = generate(cfg);
        const int N = adv.seq.max_level();
        const OrthoSystem system = build_system(adv.seq, N);
        const Atom phi = adversarial_atom(adv);
        const Expansion e = expand(phi.as_piecewise(), system);

        DivergenceRow row;
        row.stages = ell;
        row.G = term_sup_norm1(e);
        row.square_norm = sq_norm1(e);
        double min_coeff = std::numeric_limits<double>::infinity();
        for (const AdversarialStage& st : adv.stages) {
            const int member = system.member_of_level(st.n);
            const double an = e.coeffs()[static_cast<std::size_t>(member)];
            row.stage_sum += std::abs(an) *
                             integrate_abs_poly([&](double x) { return system.eval(member, x); },
                                                st.R_left, st.R_right, system.order() - 1);
            min_coeff = std::min(min_coeff, std::abs(an) * std::sqrt(st.L_length()));
        }
        row.min_coeff_product = min_coeff;

        const KnotSequence control = dyadic_sequence(cfg.k, N - 1);
        const OrthoSystem control_system = build_system(control, N);
        const Expansion ce = expand(phi.as_piecewise(), control_system);
        row.control_square_norm = sq_norm1(ce);

        table.rows.push_back(row);
        xs.push_back(static_cast<double>(ell));
        ys.push_back(row.stage_sum);
    }
    table.stage_sum_fit = fit_line(xs, ys);
    return table;
}

}  // namespace splineortho
