#include "splineortho/io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace splineortho {

namespace {

using nlohmann::json;

json read_json(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    json j;
    in >> j;
    return j;
}

void write_text(const std::filesystem::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << text;
}

}  // namespace

KnotSequence load_knot_sequence(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::string first;
    std::getline(in, first);
    KnotSequence seq;
    if (first.find('{') != std::string::npos) {
        const json j = read_json(path);
        seq.k = j.at("k").get<int>();
        seq.points = j.at("points").get<std::vector<double>>();
    } else {
        const auto eq = first.find('=');
        if (first.rfind("k", 0) != 0 || eq == std::string::npos)
            throw std::runtime_error(path.string() + ": expected a 'k=<int>' header line");
        seq.k = std::stoi(first.substr(eq + 1));
        std::string line;
        while (std::getline(in, line)) {
            std::istringstream ls(line);
            double v;
            if (ls >> v) seq.points.push_back(v);
        }
    }
    seq.validate();
    return seq;
}

void save_knot_sequence(const KnotSequence& seq, const std::filesystem::path& path, bool as_json) {
    if (as_json) {
        json j;
        j["k"] = seq.k;
        j["points"] = seq.points;
        write_text(path, j.dump(2) + "\n");
        return;
    }
    std::ostringstream out;
    out << "k=" << seq.k << "\n";
    out.precision(17);
    for (double t : seq.points) out << t << "\n";
    write_text(path, out.str());
}

void save_spline(const Spline& s, const std::filesystem::path& path) {
    json j;
    j["k"] = s.basis.order();
    j["n"] = s.basis.grid().level();
    j["coeffs"] = s.coeffs;
    write_text(path, j.dump(2) + "\n");
}

void save_system(const OrthoSystem& system, const std::filesystem::path& path) {
    json arr = json::array();
    for (int m = 0; m < system.size(); ++m) {
        json rec;
        rec["n"] = system.level_of(m);
        if (system.is_polynomial(m)) {
            rec["poly"] = system.polynomial_coeffs(m);
        } else {
            const OrthoFunction& f = system.function(m);
            rec["i0"] = f.i0;
            rec["w"] = f.coeffs;
            rec["norm2"] = f.gnorm;
            rec["J"] = {f.J.left, f.J.right};
            rec["j0"] = f.j0;
        }
        arr.push_back(std::move(rec));
    }
    write_text(path, arr.dump(2) + "\n");
}

OrthoSystem load_system(const KnotSequence& seq, const std::filesystem::path& path) {
    const json arr = read_json(path);
    if (!arr.is_array() || arr.empty()) throw std::runtime_error("system dump: expected an array");
    std::vector<std::vector<double>> poly;
    std::vector<OrthoFunction> funcs;
    int max_level = 1;
    for (const json& rec : arr) {
        const int n = rec.at("n").get<int>();
        if (n <= 1) {
            poly.push_back(rec.at("poly").get<std::vector<double>>());
            continue;
        }
        OrthoFunction f;
        f.n = n;
        f.i0 = rec.at("i0").get<int>();
        f.grid = std::make_shared<Grid>(seq, n);
        f.coeffs = rec.at("w").get<std::vector<double>>();
        if (static_cast<int>(f.coeffs.size()) != f.grid->dim())
            throw std::runtime_error("system dump: coefficient count mismatch at n=" +
                                     std::to_string(n));
        f.gnorm = rec.at("norm2").get<double>();
        f.j0 = rec.at("j0").get<int>();
        const auto J = rec.at("J").get<std::vector<double>>();
        int idx = f.grid->find_span(J.at(0));
        f.J = GridInterval{n, idx, 1, J.at(0), J.at(1)};
        funcs.push_back(std::move(f));
        max_level = std::max(max_level, n);
    }
    if (static_cast<int>(poly.size()) != seq.k)
        throw std::runtime_error("system dump: polynomial part has wrong size");
    return OrthoSystem(seq, max_level, std::move(poly), std::move(funcs));
}

void save_stages(const AdversarialSequence& adv, const std::filesystem::path& path) {
    json j;
    j["k"] = adv.config.k;
    j["gamma"] = adv.config.gamma;
    j["A"] = adv.config.A;
    j["delta"] = adv.config.delta;
    json stages = json::array();
    for (const AdversarialStage& st : adv.stages) {
        json rec;
        rec["n"] = st.n;
        rec["i"] = st.insert_index;
        rec["Lambda"] = {st.lambda_left, st.lambda_right};
        rec["L"] = {st.L_left, st.L_right};
        rec["R"] = {st.R_left, st.R_right};
        stages.push_back(std::move(rec));
    }
    j["stages"] = std::move(stages);
    write_text(path, j.dump(2) + "\n");
}

void save_growth_table(const DivergenceTable& table, const std::filesystem::path& path) {
    std::ostringstream out;
    out.precision(17);
    out << "ell,G,stage_sum,min_coeff_product\n";
    for (const DivergenceRow& row : table.rows)
        out << row.stages << "," << row.G << "," << row.stage_sum << ","
            << row.min_coeff_product << "\n";
    write_text(path, out.str());
}

void save_curve(const std::function<double(double)>& f, double step,
                const std::filesystem::path& path) {
    std::ostringstream out;
    out.precision(17);
    out << "x,value\n";
    for (double x = 0.0; x <= 1.0 + 0.5 * step; x += step) {
        const double xx = std::min(x, 1.0);
        out << xx << "," << f(xx) << "\n";
    }
    write_text(path, out.str());
}

void save_ps_curve(const Expansion& e, double step, const std::filesystem::path& path) {
    std::ostringstream out;
    out.precision(17);
    out << "x,P,S\n";
    for (double x = 0.0; x <= 1.0 + 0.5 * step; x += step) {
        const double xx = std::min(x, 1.0);
        out << xx << "," << e.square_function(xx) << "," << e.maximal_function(xx) << "\n";
    }
    write_text(path, out.str());
}

}  // namespace splineortho
