#pragma once

#include <string>
#include <vector>

#include "splineortho/analysis.hpp"

namespace splineortho {

/// Raised when no admissible construction exists for the requested stage
/// count; names the largest feasible one.
class feasibility_error : public std::runtime_error {
public:
    feasibility_error(const std::string& msg, int max_stages)
        : std::runtime_error(msg), max_feasible_stages(max_stages) {}
    int max_feasible_stages;
};

struct AdversarialConfig {
    int k = 2;
    double gamma = 4.0;   // target k-regularity parameter
    int stages = 1;       // ladder length
    double A = 8.0;       // separation factor, >= 2
    double delta = 1e-6;  // cluster width |Lambda_0|
    std::uint64_t seed = 1;

    void validate() const;
};

/// One stage: the level n_j whose insertion realizes the stage, the inserted
/// knot's index, and the three adjacent intervals.
struct AdversarialStage {
    int n = 0;
    int insert_index = 0;
    double lambda_left = 0.0, lambda_right = 0.0;  // the fixed cluster
    double L_left = 0.0, L_right = 0.0;
    double R_left = 0.0, R_right = 0.0;

    double lambda_length() const { return lambda_right - lambda_left; }
    double L_length() const { return L_right - L_left; }
    double R_length() const { return R_right - R_left; }
};

struct AdversarialSequence {
    AdversarialConfig config;
    KnotSequence seq;
    std::vector<AdversarialStage> stages;
};

/// Synthesizes a k-regular but non-(k-1)-regular sequence: a graded skeleton,
/// a (k-1)-point cluster of total width delta, and two mirrored ladders of
/// halving gaps closing in on the cluster. Stage j inserts the right-ladder
/// point splitting L_{j-1} in half.
AdversarialSequence generate(const AdversarialConfig& cfg);

struct StagePropertyReport {
    struct Item {
        bool pass = true;
        std::string witness;  // empty when the item passes
    };
    Item items[6];

    bool all_pass() const {
        for (const Item& item : items)
            if (!item.pass) return false;
        return true;
    }
};

/// Re-derives the stage intervals from the raw knots and checks the six
/// interval properties with the configured gamma and the given A.
StagePropertyReport verify_stage_properties(const AdversarialSequence& adv, double A);

/// The two-step atom of total width 4|Lambda_0| centered at the cluster's
/// right endpoint. Throws std::invalid_argument when it would leave [0, 1].
Atom adversarial_atom(const AdversarialSequence& adv);

struct DivergenceRow {
    int stages = 0;
    double G = 0.0;               // int sup_n |a_n f_n|
    double stage_sum = 0.0;       // sum_j int_{R_j} |a_{n_j} f_{n_j}|
    double min_coeff_product = 0.0;  // min_j |a_{n_j}| |L_j|^{1/2}
    double square_norm = 0.0;     // ||P phi||_1 on the adversarial system
    double control_square_norm = 0.0;  // ||P phi||_1 on a dyadic control of equal size
};

struct DivergenceTable {
    std::vector<DivergenceRow> rows;
    LinearFit stage_sum_fit;  // stage_sum against the stage count
};

/// Runs the growth experiment over a ladder of stage counts; the control
/// expands the same atom against a dyadic sequence of equal size.
DivergenceTable divergence_experiment(const std::vector<int>& ladder,
                                      const AdversarialConfig& base);

}  // namespace splineortho
