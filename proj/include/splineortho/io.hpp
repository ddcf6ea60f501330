#pragma once

#include <filesystem>
#include <string>

#include "splineortho/adversary.hpp"
#include "splineortho/orthosys.hpp"

namespace splineortho {

/// Knot-sequence files: JSON {"k": int, "points": [...]} or plain text with a
/// "k=<int>" header line followed by one point per line. Loading detects the
/// format from the content.
KnotSequence load_knot_sequence(const std::filesystem::path& path);
void save_knot_sequence(const KnotSequence& seq, const std::filesystem::path& path,
                        bool as_json = true);

/// Spline dump {"k": int, "n": int, "coeffs": [...]}.
void save_spline(const Spline& s, const std::filesystem::path& path);

/// System dump: JSON array; the polynomial part as {"n", "poly"} records with
/// monomial coefficients, spline members as {"n", "i0", "w", "norm2", "J",
/// "j0"} with 0-based indices.
void save_system(const OrthoSystem& system, const std::filesystem::path& path);

/// Rebuilds a system from a dump; grids come from the sequence, coefficients
/// from the file. Throws std::runtime_error on malformed or mismatched dumps.
OrthoSystem load_system(const KnotSequence& seq, const std::filesystem::path& path);

/// Adversarial stages sidecar.
void save_stages(const AdversarialSequence& adv, const std::filesystem::path& path);

/// Growth table CSV: header "ell,G,stage_sum,min_coeff_product".
void save_growth_table(const DivergenceTable& table, const std::filesystem::path& path);

/// Curve CSV with header "x,value".
void save_curve(const std::function<double(double)>& f, double step,
                const std::filesystem::path& path);

/// Curve CSV with header "x,P,S".
void save_ps_curve(const Expansion& e, double step, const std::filesystem::path& path);

}  // namespace splineortho
