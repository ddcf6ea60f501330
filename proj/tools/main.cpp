#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "splineortho/analysis.hpp"
#include "splineortho/adversary.hpp"
#include "splineortho/io.hpp"

using namespace splineortho;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;   // invariant or experiment failure
constexpr int kExitUsage = 2;     // bad arguments

struct GenOptions {
    std::string kind = "dyadic";
    int k = 2;
    int count = 31;
    std::uint64_t seed = 1;
    double repeat_prob = 0.0;
    int stages = 4;
    double gamma = 4.0;
    double A = 8.0;
    double delta = 1e-6;
    std::string out;
    std::string format = "json";
    std::string stages_out;
};

int run_knots_gen(const GenOptions& opt) {
    KnotSequence seq;
    if (opt.kind == "dyadic") {
        seq = dyadic_sequence(opt.k, opt.count);
    } else if (opt.kind == "uniform") {
        seq = uniform_sequence(opt.k, opt.count);
    } else if (opt.kind == "random") {
        Rng rng(opt.seed);
        seq = random_sequence(opt.k, opt.count, rng, opt.repeat_prob);
    } else if (opt.kind == "adversarial") {
        AdversarialConfig cfg;
        cfg.k = opt.k;
        cfg.gamma = opt.gamma;
        cfg.stages = opt.stages;
        cfg.A = opt.A;
        cfg.delta = opt.delta;
        cfg.seed = opt.seed;
        const AdversarialSequence adv = generate(cfg);
        seq = adv.seq;
        if (!opt.stages_out.empty()) save_stages(adv, opt.stages_out);
    } else {
        std::cerr << "unknown kind: " << opt.kind << "\n";
        return kExitUsage;
    }
    save_knot_sequence(seq, opt.out, opt.format == "json");
    std::cout << "wrote " << opt.out << " (" << seq.points.size() << " points, k=" << seq.k
              << ")\n";
    return kExitOk;
}

int run_knots_check(const std::string& in, int ell, int n_max) {
    const KnotSequence seq = load_knot_sequence(in);
    if (ell != 0 && (ell < 1 || ell > seq.k)) {
        std::cerr << "ell must lie in [1, k=" << seq.k << "]\n";
        return kExitUsage;
    }
    const int last = n_max > 0 ? std::min(n_max, seq.max_level()) : seq.max_level();
    const int lo = ell != 0 ? ell : 1;
    const int hi = ell != 0 ? ell : seq.k;
    for (int l = lo; l <= hi; ++l) {
        const RegularityReport rep = regularity_parameter(seq, l, last);
        std::cout << "ell=" << l << " gamma=" << rep.gamma << " witness n=" << rep.witness_n
                  << " i=" << rep.witness_i << "\n";
    }
    return kExitOk;
}

int verify_system(const OrthoSystem& system, double tol_orth) {
    int failures = 0;
    const double defect = orthonormality_defect(system);
    const bool orth_ok = defect <= tol_orth;
    std::cout << (orth_ok ? "ok" : "FAIL") << " orthonormality: defect " << defect << " (tol "
              << tol_orth << ")\n";
    failures += orth_ok ? 0 : 1;

    bool signs_ok = true, selection_ok = true;
    for (int n = 2; n <= system.max_level(); ++n) {
        const OrthoFunction& f = system.function_at_level(n);
        if (!(f.coeffs[static_cast<std::size_t>(f.j0)] > 0.0)) signs_ok = false;
        const AlphaVector alpha = alpha_coefficients(*f.grid, f.i0);
        const CharacteristicSelection sel = characteristic_interval(*f.grid, f.i0, alpha);
        if (sel.j0 != f.j0 || sel.J.left != f.J.left || sel.J.right != f.J.right)
            selection_ok = false;
    }
    std::cout << (signs_ok ? "ok" : "FAIL") << " sign convention: w_{j0} > 0\n";
    std::cout << (selection_ok ? "ok" : "FAIL") << " characteristic interval selection\n";
    failures += (signs_ok ? 0 : 1) + (selection_ok ? 0 : 1);

    double worst_q = 0.0, worst_C = 0.0, min_concentration = 1e300;
    for (int n = 2; n <= system.max_level(); ++n) {
        const DecayReport rep = decay_report(system.function_at_level(n));
        worst_q = std::max(worst_q, rep.q);
        worst_C = std::max(worst_C, rep.C);
        min_concentration = std::min(min_concentration, rep.concentration_l2);
    }
    const bool decay_ok = worst_q < 1.0 && std::isfinite(worst_C);
    std::cout << (decay_ok ? "ok" : "FAIL") << " decay: q<=" << worst_q << " C<=" << worst_C
              << " min L2 concentration " << min_concentration << "\n";
    failures += decay_ok ? 0 : 1;

    CharCombinatoricsParams params;
    const CharCombinatorics comb = char_combinatorics(system, params);
    std::cout << "ok combinatorics: N0<=" << comb.n0_max << " offsupport<="
              << comb.offsupport_ratio_max << " nsum<=" << comb.nsum_max << " msum<="
              << comb.msum_max << "\n";
    return failures == 0 ? kExitOk : kExitFailure;
}

std::vector<int> parse_ladder(const std::string& text) {
    std::vector<int> ladder;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) ladder.push_back(std::stoi(item));
    return ladder;
}

json ratio_band(const std::vector<double>& num, const std::vector<double>& den) {
    double lo = 1e300, hi = 0.0;
    for (std::size_t i = 0; i < num.size(); ++i) {
        if (den[i] == 0.0) continue;
        const double r = num[i] / den[i];
        lo = std::min(lo, r);
        hi = std::max(hi, r);
    }
    return json{{"min", lo}, {"max", hi}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Orthonormal spline systems on arbitrary knot sequences"};
    app.require_subcommand(1);

    // knots
    auto* knots = app.add_subcommand("knots", "generate and inspect knot sequences");
    knots->require_subcommand(1);
    GenOptions gen;
    auto* knots_gen = knots->add_subcommand("gen", "generate a sequence");
    knots_gen->add_option("--kind", gen.kind, "dyadic | uniform | random | adversarial");
    knots_gen->add_option("--k", gen.k, "spline order");
    knots_gen->add_option("--n", gen.count, "number of points");
    knots_gen->add_option("--seed", gen.seed, "rng seed");
    knots_gen->add_option("--repeat-prob", gen.repeat_prob, "repeated-knot probability (random)");
    knots_gen->add_option("--ell", gen.stages, "adversarial stages");
    knots_gen->add_option("--gamma", gen.gamma, "adversarial k-regularity target");
    knots_gen->add_option("--A", gen.A, "adversarial separation factor");
    knots_gen->add_option("--delta", gen.delta, "adversarial cluster width");
    knots_gen->add_option("--out", gen.out, "output file")->required();
    knots_gen->add_option("--format", gen.format, "json | txt");
    knots_gen->add_option("--stages-out", gen.stages_out, "stages sidecar (adversarial)");

    std::string check_in;
    int check_ell = 0, check_nmax = 0;
    auto* knots_check = knots->add_subcommand("check", "print regularity reports");
    knots_check->add_option("--in", check_in, "knot-sequence file")->required();
    knots_check->add_option("--ell", check_ell, "only this ell (default: 1..k)");
    knots_check->add_option("--n-max", check_nmax, "largest grid level to scan");

    // system
    auto* system_cmd = app.add_subcommand("system", "build and verify orthonormal systems");
    system_cmd->require_subcommand(1);
    std::string sys_in, sys_out, sys_dump;
    int sys_N = 0, curve_member = 0;
    double tol_orth = 1e-9, curve_step = 1e-3;
    auto* system_build = system_cmd->add_subcommand("build", "build and dump a system");
    system_build->add_option("--in", sys_in, "knot-sequence file")->required();
    system_build->add_option("--N", sys_N, "largest level")->required();
    system_build->add_option("--out", sys_out, "system dump")->required();
    auto* system_verify = system_cmd->add_subcommand("verify", "run the invariant suite");
    system_verify->add_option("--in", sys_in, "knot-sequence file")->required();
    system_verify->add_option("--N", sys_N, "largest level");
    system_verify->add_option("--dump", sys_dump, "verify this dump instead of a fresh build");
    system_verify->add_option("--tol-orth", tol_orth, "orthonormality tolerance");
    std::string spline_out;
    auto* system_curve = system_cmd->add_subcommand("curve", "export one member as CSV");
    system_curve->add_option("--in", sys_in, "knot-sequence file")->required();
    system_curve->add_option("--N", sys_N, "largest level")->required();
    system_curve->add_option("--member", curve_member, "member index (0-based)")->required();
    system_curve->add_option("--step", curve_step, "sampling step");
    system_curve->add_option("--out", sys_out, "curve CSV")->required();
    system_curve->add_option("--spline-out", spline_out, "member spline dump (JSON)");

    // experiment
    auto* exper = app.add_subcommand("experiment", "numerical experiments");
    exper->require_subcommand(1);
    std::string exp_in, exp_out, ladder_text = "2,4,8,16", control_out, ps_curve_out;
    int exp_N = 0, exp_atoms = 50, exp_trials = 200;
    double tol_quad = 1e-6, ps_step = 1e-3;
    std::uint64_t exp_seed = 1;
    AdversarialConfig adv_cfg;
    adv_cfg.A = 8.0;
    adv_cfg.delta = 2e-8;
    auto* exp_eq = exper->add_subcommand("equivalence", "norm equivalences over an atom corpus");
    exp_eq->add_option("--in", exp_in, "knot-sequence file")->required();
    exp_eq->add_option("--N", exp_N, "largest level")->required();
    exp_eq->add_option("--atoms", exp_atoms, "corpus size");
    exp_eq->add_option("--trials", exp_trials, "sign-flip trials");
    exp_eq->add_option("--seed", exp_seed, "rng seed");
    exp_eq->add_option("--tol-quad", tol_quad, "quadrature tolerance for ||P||_1");
    exp_eq->add_option("--out", exp_out, "report JSON")->required();
    auto* exp_div = exper->add_subcommand("divergence", "adversarial growth experiment");
    exp_div->add_option("--ladder", ladder_text, "comma-separated stage counts");
    exp_div->add_option("--k", adv_cfg.k, "spline order");
    exp_div->add_option("--gamma", adv_cfg.gamma, "k-regularity target");
    exp_div->add_option("--A", adv_cfg.A, "separation factor");
    exp_div->add_option("--delta", adv_cfg.delta, "cluster width");
    exp_div->add_option("--seed", adv_cfg.seed, "rng seed");
    exp_div->add_option("--out", exp_out, "growth CSV")->required();
    exp_div->add_option("--control-out", control_out, "control norms CSV");
    auto* exp_kh = exper->add_subcommand("khinchin", "sign-flip supremum sweep");
    exp_kh->add_option("--in", exp_in, "knot-sequence file")->required();
    exp_kh->add_option("--N", exp_N, "largest level")->required();
    exp_kh->add_option("--atoms", exp_atoms, "corpus size");
    exp_kh->add_option("--trials", exp_trials, "sign-flip trials");
    exp_kh->add_option("--seed", exp_seed, "rng seed");
    exp_kh->add_option("--tol-quad", tol_quad, "quadrature tolerance for ||P||_1");
    exp_kh->add_option("--ps-curve", ps_curve_out, "x,P,S curve CSV for the first atom");
    exp_kh->add_option("--curve-step", ps_step, "sampling step of the curve export");
    exp_kh->add_option("--out", exp_out, "report JSON")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return e.get_exit_code() == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (knots_gen->parsed()) return run_knots_gen(gen);
        if (knots_check->parsed()) return run_knots_check(check_in, check_ell, check_nmax);

        if (system_build->parsed()) {
            const KnotSequence seq = load_knot_sequence(sys_in);
            const OrthoSystem system = build_system(seq, sys_N);
            save_system(system, sys_out);
            std::cout << "wrote " << sys_out << " (" << system.size() << " members)\n";
            return kExitOk;
        }
        if (system_verify->parsed()) {
            const KnotSequence seq = load_knot_sequence(sys_in);
            if (!sys_dump.empty()) {
                const OrthoSystem system = load_system(seq, sys_dump);
                return verify_system(system, tol_orth);
            }
            if (sys_N < 2) {
                std::cerr << "--N is required without --dump\n";
                return kExitUsage;
            }
            const OrthoSystem system = build_system(seq, sys_N);
            return verify_system(system, tol_orth);
        }
        if (system_curve->parsed()) {
            const KnotSequence seq = load_knot_sequence(sys_in);
            const OrthoSystem system = build_system(seq, sys_N);
            if (curve_member < 0 || curve_member >= system.size()) {
                std::cerr << "member index out of range\n";
                return kExitUsage;
            }
            save_curve([&](double x) { return system.eval(curve_member, x); }, curve_step,
                       sys_out);
            if (!spline_out.empty()) {
                const auto fc = system.fine_coeffs(curve_member);
                const Spline member{system.fine_basis(), {fc.begin(), fc.end()}};
                save_spline(member, spline_out);
            }
            return kExitOk;
        }

        if (exp_eq->parsed() || exp_kh->parsed()) {
            const KnotSequence seq = load_knot_sequence(exp_in);
            const OrthoSystem system = build_system(seq, exp_N);
            Rng rng(exp_seed);
            std::vector<double> ws, ss, ps, flips;
            for (int i = 0; i < exp_atoms; ++i) {
                const Atom atom = random_atom(rng);
                const Expansion e = expand(atom.as_piecewise(), system);
                ps.push_back(sq_norm1(e, tol_quad));
                flips.push_back(sign_flip_supremum(e, exp_trials, rng.next()));
                if (exp_eq->parsed()) {
                    ss.push_back(max_norm1(e));
                    ws.push_back(atomic_decompose(e).weight_sum());
                }
                if (i == 0 && exp_kh->parsed() && !ps_curve_out.empty())
                    save_ps_curve(e, ps_step, ps_curve_out);
            }
            json report;
            report["params"] = {{"k", seq.k},       {"N", exp_N},       {"atoms", exp_atoms},
                                {"trials", exp_trials}, {"seed", exp_seed}};
            if (exp_eq->parsed()) {
                report["norms"] = {{"atomic_weight", ws}, {"S", ss}, {"P", ps}, {"flip", flips}};
                report["ratios"] = {{"atomic_over_S", ratio_band(ws, ss)},
                                    {"S_over_P", ratio_band(ss, ps)},
                                    {"P_over_flip", ratio_band(ps, flips)},
                                    {"atomic_over_P", ratio_band(ws, ps)}};
            } else {
                report["norms"] = {{"P", ps}, {"flip", flips}};
                report["ratios"] = {{"P_over_flip", ratio_band(ps, flips)}};
            }
            std::ofstream out(exp_out, std::ios::binary);
            out << report.dump(2) << "\n";
            std::cout << "wrote " << exp_out << "\n";
            return kExitOk;
        }
        if (exp_div->parsed()) {
            const std::vector<int> ladder = parse_ladder(ladder_text);
            if (ladder.empty()) {
                std::cerr << "empty ladder\n";
                return kExitUsage;
            }
            const DivergenceTable table = divergence_experiment(ladder, adv_cfg);
            save_growth_table(table, exp_out);
            if (!control_out.empty()) {
                std::ostringstream out;
                out.precision(17);
                out << "ell,P_adv,P_control\n";
                for (const DivergenceRow& row : table.rows)
                    out << row.stages << "," << row.square_norm << ","
                        << row.control_square_norm << "\n";
                std::ofstream f(control_out, std::ios::binary);
                f << out.str();
            }
            std::cout << "stage-sum fit: slope " << table.stage_sum_fit.slope << " r2 "
                      << table.stage_sum_fit.r2 << "\n";
            return table.stage_sum_fit.slope > 0.0 ? kExitOk : kExitFailure;
        }
    } catch (const feasibility_error& e) {
        std::cerr << "infeasible: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "invalid arguments: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitFailure;
    }
    return kExitUsage;
}
