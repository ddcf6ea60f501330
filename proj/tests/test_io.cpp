#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "splineortho/io.hpp"

using namespace splineortho;
namespace fs = std::filesystem;

namespace {

fs::path work_dir() {
    static const fs::path dir = [] {
        fs::path d = fs::temp_directory_path() / "splineortho_io_tests";
        fs::remove_all(d);
        fs::create_directories(d);
        return d;
    }();
    return dir;
}

}  // namespace

TEST_CASE("knot sequences round-trip through both file formats") {
    Rng rng(3);
    const KnotSequence seq = random_sequence(3, 25, rng, 0.2);
    const fs::path js = work_dir() / "seq.json";
    const fs::path tx = work_dir() / "seq.txt";
    save_knot_sequence(seq, js, true);
    save_knot_sequence(seq, tx, false);
    const KnotSequence from_json = load_knot_sequence(js);
    const KnotSequence from_text = load_knot_sequence(tx);
    CHECK(from_json.k == seq.k);
    CHECK(from_json.points == seq.points);  // bit-exact
    CHECK(from_text.k == seq.k);
    CHECK(from_text.points == seq.points);
}

TEST_CASE("spline dumps carry order, level and coefficients") {
    const KnotSequence seq = dyadic_sequence(2, 7);
    const Grid grid(seq, 8);
    const BSplineBasis basis(grid);
    Spline s{basis, std::vector<double>(static_cast<std::size_t>(basis.dim()), 0.0)};
    s.coeffs[3] = 1.25;
    const fs::path path = work_dir() / "spline.json";
    save_spline(s, path);
    std::ifstream in(path);
    nlohmann::json j;
    in >> j;
    CHECK(j.at("k").get<int>() == 2);
    CHECK(j.at("n").get<int>() == 8);
    CHECK(j.at("coeffs").get<std::vector<double>>() == s.coeffs);
}

TEST_CASE("system dumps reload into an equivalent system") {
    const KnotSequence seq = dyadic_sequence(2, 15);
    const OrthoSystem system = build_system(seq, 16);
    const fs::path path = work_dir() / "system.json";
    save_system(system, path);
    const OrthoSystem loaded = load_system(seq, path);
    REQUIRE(loaded.size() == system.size());
    CHECK(orthonormality_defect(loaded) < 1e-9);
    for (int n = 2; n <= 16; ++n) {
        const OrthoFunction& a = system.function_at_level(n);
        const OrthoFunction& b = loaded.function_at_level(n);
        CHECK(a.coeffs == b.coeffs);  // dumps are bit-exact
        CHECK(a.j0 == b.j0);
        CHECK(a.J.left == b.J.left);
        CHECK(a.J.right == b.J.right);
    }
}

TEST_CASE("system dumps are rejected when they do not match the sequence") {
    const KnotSequence seq = dyadic_sequence(2, 15);
    const OrthoSystem system = build_system(seq, 16);
    const fs::path path = work_dir() / "system2.json";
    save_system(system, path);
    const KnotSequence other = dyadic_sequence(3, 15);
    CHECK_THROWS_AS(load_system(other, path), std::runtime_error);
}

TEST_CASE("growth tables use the documented CSV header") {
    DivergenceTable table;
    table.rows.push_back(DivergenceRow{2, 1.0, 0.5, 0.4, 3.0, 1e-6});
    const fs::path path = work_dir() / "growth.csv";
    save_growth_table(table, path);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "ell,G,stage_sum,min_coeff_product");
}

TEST_CASE("curve exports sample the unit interval inclusively") {
    const fs::path path = work_dir() / "curve.csv";
    save_curve([](double x) { return 2.0 * x; }, 0.25, path);
    std::ifstream in(path);
    std::string line;
    std::getline(in, line);
    CHECK(line == "x,value");
    int rows = 0;
    double last_x = -1.0;
    while (std::getline(in, line)) {
        ++rows;
        last_x = std::stod(line.substr(0, line.find(',')));
    }
    CHECK(rows == 5);
    CHECK(last_x == 1.0);
}
