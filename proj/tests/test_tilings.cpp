#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <limits>
#include <map>
#include <random>
#include <set>

#include "cnp/datasets.hpp"
#include "cnp/io.hpp"
#include "cnp/tilings.hpp"

using namespace cnp;

namespace {

const double kStep = std::sqrt(3.0) / 2.0;

// Gap of the regular-hexagon colouring computed straight from the definition:
// the tile against its translates by the sublattice generated by w and its
// 60 degree rotation, best over every w of norm k.
double regular_oracle(std::int64_t k) {
    const Polygon h = regular_polygon(6, 0.5, kPi / 6.0);
    double result = 0.0;
    for (const LatticeVector& w : vectors_of_norm(k)) {
        const LatticeVector r = rotate60(w);
        double gap = std::numeric_limits<double>::infinity();
        for (std::int64_t i = -3; i <= 3; ++i)
            for (std::int64_t j = -3; j <= 3; ++j) {
                if (i == 0 && j == 0) continue;
                const LatticeVector g{i * w.u + j * r.u, i * w.v + j * r.v};
                gap = std::min(gap, min_distance(h, h.translated(to_cartesian(g, kStep))));
            }
        result = std::max(result, gap);
    }
    return result;
}

std::int64_t divisor_sum(std::int64_t k) {
    std::int64_t s = 0;
    for (std::int64_t a = 1; a <= k; ++a)
        if (k % a == 0) s += a;
    return s;
}

// Membership of (x, y) in the lattice spanned by (a, 0) and (c, b).
bool in_hnf_lattice(LatticeVector p, const std::array<std::int64_t, 3>& hnf) {
    const auto [a, c, b] = hnf;
    if (p.v % b != 0) return false;
    return (p.u - c * (p.v / b)) % a == 0;
}

TilingSpec unit_squares() {
    const double s = 1.0 / std::sqrt(2.0);
    TilingSpec spec;
    spec.region = PeriodicRegion{{s, 0.0}, {0.0, s}};
    spec.k = 1;
    spec.tiles.push_back({Polygon({{0, 0}, {s, 0}, {s, s}, {0, s}}), 0});
    return spec;
}

std::vector<int> parse_list(const std::string& text) {
    std::vector<int> out;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t used = 0;
        out.push_back(std::stoi(text.substr(pos), &used));
        pos += used;
        while (pos < text.size() && (text[pos] == ',' || text[pos] == ' ')) ++pos;
    }
    return out;
}

}  // namespace

TEST_CASE("regular sublattice distances") {
    CHECK(regular_sublattice_distance(7) == doctest::Approx(1.32288).epsilon(1e-5));
    CHECK(regular_sublattice_distance(9) == doctest::Approx(1.73205).epsilon(1e-5));
    CHECK(regular_sublattice_distance(1) == doctest::Approx(0.0));
    CHECK_THROWS_AS(regular_sublattice_distance(2), std::invalid_argument);
    CHECK_THROWS_AS(regular_sublattice_distance(0), std::invalid_argument);
}

TEST_CASE("regular distances agree with a direct sublattice search") {
    for (std::int64_t k : {1, 3, 4, 7, 9, 12, 13, 16, 19, 21, 25, 27, 28, 31, 37, 48, 49})
        CHECK(regular_sublattice_distance(k) == doctest::Approx(regular_oracle(k)).epsilon(1e-9));
}

TEST_CASE("regular colourings verify to their own distance with unit width") {
    for (std::int64_t k : {3, 7, 12, 13}) {
        const SublatticeColoring c = regular_sublattice_coloring(k);
        const TilingReport r = verify_tiling(c.to_spec());
        CHECK(r.proper());
        CHECK(r.max_width == doctest::Approx(1.0));
        CHECK(r.min_same_color_gap == doctest::Approx(c.d).epsilon(1e-6));
    }
}

TEST_CASE("bundled tilings") {
    const auto dir = default_data_dir() / "tilings";
    const TilingReport nine = verify_tiling(tiling_from_json(read_json_file((dir / "sublattice_k9.json").string())));
    CHECK(nine.max_width == doctest::Approx(1.0));
    CHECK(nine.min_same_color_gap == doctest::Approx(1.73205).epsilon(1e-5));
    const TilingReport twelve = verify_tiling(tiling_from_json(read_json_file((dir / "sublattice_k12.json").string())));
    CHECK(twelve.min_same_color_gap == doctest::Approx(2.0).epsilon(1e-6));
    const TilingReport seven = verify_tiling(tiling_from_json(read_json_file((dir / "sublattice_k7.json").string())));
    CHECK(seven.min_same_color_gap == doctest::Approx(std::sqrt(7.0) / 2.0).epsilon(1e-6));
    const TilingReport radial = verify_tiling(tiling_from_json(read_json_file((dir / "radial_k3.json").string())));
    CHECK(radial.min_same_color_gap == doctest::Approx(2.0 * std::sin(2.0 * kPi / 9.0)).epsilon(1e-6));
    CHECK(radial.max_width <= 1.0 + 1e-9);
}

TEST_CASE("one colour of edge-to-edge squares touches itself") {
    const TilingReport r = verify_tiling(unit_squares());
    CHECK(r.min_same_color_gap == doctest::Approx(0.0));
    CHECK(r.max_width == doctest::Approx(1.0));
    CHECK_FALSE(r.proper());
}

TEST_CASE("overlaps and holes are rejected") {
    TilingSpec spec = unit_squares();
    spec.tiles.push_back({spec.tiles[0].shape.translated({0.1, 0.1}), 0});
    CHECK_THROWS_AS(verify_tiling(spec), TilingError);
    TilingSpec holes = unit_squares();
    auto& region = std::get<PeriodicRegion>(holes.region);
    region.period1 = 2.0 * region.period1;
    CHECK_THROWS_AS(verify_tiling(holes), TilingError);
}

TEST_CASE("oversized tiles are reported") {
    TilingSpec spec = unit_squares().scaled(2.0);
    const TilingReport r = verify_tiling(spec);
    CHECK(r.oversized == std::vector<int>{0});
}

TEST_CASE("property: scaling a tiling scales width and gap") {
    const TilingSpec base = regular_sublattice_coloring(7).to_spec();
    const TilingReport r = verify_tiling(base);
    for (double t : {0.5, 1.7, 3.0}) {
        const TilingReport s = verify_tiling(base.scaled(t));
        CHECK(s.max_width == doctest::Approx(t * r.max_width).epsilon(1e-9));
        CHECK(s.min_same_color_gap == doctest::Approx(t * r.min_same_color_gap).epsilon(1e-9));
    }
}

TEST_CASE("property: the two-period shell finds the same gap as the three-period shell") {
    for (std::int64_t k : {3, 4, 7, 9, 12, 13, 19}) {
        const TilingSpec spec = regular_sublattice_coloring(k).to_spec();
        CHECK(verify_tiling(spec, 2).min_same_color_gap == doctest::Approx(verify_tiling(spec, 3).min_same_color_gap));
    }
    for (std::int64_t k : {5, 8}) {
        const TilingSpec spec = general_sublattice_coloring(k, 2, 3).to_spec();
        CHECK(verify_tiling(spec, 2).min_same_color_gap == doctest::Approx(verify_tiling(spec, 3).min_same_color_gap));
    }
}

TEST_CASE("sublattice enumeration") {
    CHECK(sublattices_of_index(1).size() == 1);
    for (std::int64_t k = 1; k <= 30; ++k) {
        const auto all = sublattices_of_index(k);
        CHECK(static_cast<std::int64_t>(all.size()) == divisor_sum(k));
        for (const auto& [a, c, b] : all) {
            CHECK(a * b == k);
            CHECK(0 <= c);
            CHECK(c < a);
        }
    }
}

TEST_CASE("property: Hermite normal form spans the same lattice") {
    CHECK(hermite_normal_form({2, 0}, {1, 3}) == std::array<std::int64_t, 3>{2, 1, 3});
    std::mt19937_64 rng(19);
    std::uniform_int_distribution<std::int64_t> c(-9, 9);
    for (int trial = 0; trial < 300; ++trial) {
        const LatticeVector g1{c(rng), c(rng)}, g2{c(rng), c(rng)};
        const std::int64_t det = g1.u * g2.v - g1.v * g2.u;
        if (det == 0) continue;
        const auto hnf = hermite_normal_form(g1, g2);
        CHECK(hnf[0] * hnf[2] == std::llabs(det));
        CHECK(in_hnf_lattice(g1, hnf));
        CHECK(in_hnf_lattice(g2, hnf));
        CHECK(hermite_normal_form(g2, g1) == hnf);
    }
}

TEST_CASE("general sublattice colourings") {
    const SublatticeColoring five = general_sublattice_coloring(5, 8, 1);
    CHECK(five.d == doctest::Approx(0.83333).epsilon(2e-2));
    const SublatticeColoring eight = general_sublattice_coloring(8, 8, 1);
    CHECK(eight.d == doctest::Approx(1.4).epsilon(2e-2));
    for (const SublatticeColoring* c : {&five, &eight}) {
        const TilingReport r = verify_tiling(c->to_spec());
        CHECK(r.max_width <= 1.0 + 1e-6);
        CHECK(r.min_same_color_gap == doctest::Approx(c->d).epsilon(1e-6));
    }
}

TEST_CASE("property: general colourings never fall below the regular ones") {
    for (std::int64_t k : {3, 4, 7}) {
        const SublatticeColoring g = general_sublattice_coloring(k, 2, 11);
        CHECK(g.d >= regular_sublattice_distance(k) - 1e-6);
    }
}

TEST_CASE("hexagon objective rejects non-convex input") {
    const std::vector<double> clockwise{0.5, 0.0, 0.0, -0.5, -0.5, 0.0};
    CHECK(hexagon_objective(clockwise, {1, 0, 3}) == -1.0);
}

TEST_CASE("classification reproduces the published classes") {
    const auto rows = read_sublattice_table(default_data_dir() / "table2.csv");
    REQUIRE(rows.size() == 200);
    // The table is rounded to six significant digits; where it agrees with the
    // regular colouring to that precision the exact regular value is used.
    std::vector<double> best;
    for (const auto& r : rows) {
        double d = r.d;
        if (r.loeschian) {
            const double regular = regular_sublattice_distance(r.k);
            if (std::abs(d - regular) <= 6e-5) d = regular;
        }
        best.push_back(d);
    }

    std::map<int, std::string> expected;
    const std::map<std::string, std::string> published{
        {"L+", "3, 4, 7, 9, 12, 13, 16, 19, 21, 25, 27, 28, 31, 36, 39, 43, 48, 49, 52, 57, 61, 63, 64, 67, 73, 76, 79, "
               "81, 84, 91, 97, 100, 103, 108, 109, 111, 117, 121, 124, 127, 129, 133, 139, 144, 147, 151, 157, 163, "
               "169, 172, 175, 181, 183, 189, 192, 193, 196, 199"},
        {"L-", "37, 75, 93, 112, 148, 171"},
        {"Lbar+", "6, 8, 20, 24, 30, 33, 34, 41, 42, 46, 54, 56, 60, 69, 70, 72, 86, 89, 90, 94, 96, 99, 105, 110, "
                  "114, 116, 120, 126, 131, 132, 136, 142, 143, 149, 152, 154, 155, 160, 162, 166, 168, 174, 177, "
                  "180, 182, 186, 195"},
        {"Lbar-", "1, 2, 5, 10, 11, 14, 15, 17, 18, 22, 23, 26, 29, 32, 35, 38, 40, 44, 45, 47, 50, 51, 53, 55, 58, "
                  "59, 62, 65, 66, 68, 71, 74, 77, 78, 80, 82, 83, 85, 87, 88, 92, 95, 98, 101, 102, 104, 106, 107, "
                  "113, 115, 118, 119, 122, 123, 125, 128, 130, 134, 135, 137, 138, 140, 141, 145, 146, 150, 153, "
                  "158, 159, 161, 164, 165, 167, 170, 173, 176, 178, 179, 184, 185, 187, 188, 190, 191, 194, 197, "
                  "198, 200"},
    };
    for (const auto& [label, list] : published)
        for (int k : parse_list(list)) expected[k] = label;
    REQUIRE(expected.size() == 199);  // 156 is listed separately

    auto label = [](TilingClass c) {
        switch (c) {
            case TilingClass::l_plus: return std::string("L+");
            case TilingClass::l_minus: return std::string("L-");
            case TilingClass::lbar_plus: return std::string("Lbar+");
            case TilingClass::lbar_minus: return std::string("Lbar-");
        }
        return std::string();
    };
    for (int k = 2; k <= 200; ++k) {
        std::optional<double> regular;
        if (is_loeschian(k)) regular = regular_sublattice_distance(k);
        const Classification c = classify_k(k, best, regular);
        INFO("k = " << k);
        if (k == 156 || k == 192) {
            // Irregular and regular tilings both set a record. The published
            // table flags only 156; 192 satisfies the same condition
            // (11.0148 irregular, 11.0 regular, previous best 10.9659).
            CHECK(c.primary == TilingClass::l_plus);
            REQUIRE(c.secondary);
            CHECK(*c.secondary == TilingClass::lbar_plus);
            continue;
        }
        CHECK_FALSE(c.secondary);
        if (k == 15) {
            // Published as a non-record, but its distance 2.18661 exceeds the
            // 2.17945 of k = 13 and 14 in the same table.
            CHECK(c.primary == TilingClass::lbar_plus);
            continue;
        }
        CHECK(label(c.primary) == expected.at(k));
    }
    // One colour is Loeschian yet published with the non-Loeschian members:
    // its distance 0 sets no record, so the computed class is L-.
    CHECK(classify_k(1, best, 0.0).primary == TilingClass::l_minus);
}

TEST_CASE("property: Loeschian table matches the membership flags of the sublattice table") {
    for (const auto& r : read_sublattice_table(default_data_dir() / "table2.csv")) CHECK(is_loeschian(r.k) == r.loeschian);
}

TEST_CASE("sector geometry") {
    const double theta = 2.0 * kPi / 9.0;
    const double cap = sector_width_cap(theta);
    CHECK(sector_width(theta, cap) == doctest::Approx(1.0));
    CHECK(sector_width(theta, 1.2856) == doctest::Approx(0.87940).epsilon(1e-5));
    CHECK(sector_width(kPi / 3.0, 1.0) == doctest::Approx(1.0));
}

TEST_CASE("radial optimum reproduces the published radial column") {
    const auto rows = read_annulus_table(default_data_dir() / "table4.csv");
    REQUIRE(rows.size() >= 10);
    for (const auto& row : rows) {
        if (row.k > 12) continue;
        const RadialColoring c = radial_optimum(row.k, 4 * row.k);
        INFO("k = " << row.k);
        CHECK(c.d == doctest::Approx(row.radial).epsilon(1e-6));
        CHECK(c.feasible);
    }
    CHECK(radial_optimum(3, 9).d == doctest::Approx(2.0 * std::sin(2.0 * kPi / 9.0)).epsilon(1e-12));
    CHECK_THROWS_AS(radial_optimum(1, 4), std::invalid_argument);
    CHECK_THROWS_AS(radial_optimum(4, 3), std::invalid_argument);
}

TEST_CASE("property: radial colourings verify and are rotation invariant") {
    std::mt19937_64 rng(23);
    std::uniform_real_distribution<double> phase(0.0, kTwoPi);
    for (int k : {3, 4, 5, 6}) {
        const RadialColoring c = radial_optimum(k, 3 * k);
        std::vector<double> angles = c.angles;
        for (int shift = 0; shift < c.n; ++shift) {
            std::rotate(angles.begin(), angles.begin() + 1, angles.end());
            CHECK(radial_distance(angles, k) == doctest::Approx(c.d).epsilon(1e-12));
        }
        // d is capped by the outer radius, so the gap may exceed it when the
        // width constraint binds.
        const TilingReport r = verify_tiling(c.to_spec(phase(rng)));
        CHECK(r.min_same_color_gap >= c.d - 1e-6);
        CHECK(r.max_width <= 1.0 + 1e-6);
        CHECK((r.min_same_color_gap == doctest::Approx(c.d).epsilon(1e-6) || r.max_width == doctest::Approx(1.0).epsilon(1e-6)));
    }
}

TEST_CASE("property: perturbed radial angles never beat the optimum by much") {
    std::mt19937_64 rng(29);
    std::normal_distribution<double> noise(0.0, 0.01);
    const RadialColoring c = radial_optimum(4, 8);
    for (int trial = 0; trial < 200; ++trial) {
        std::vector<double> angles = c.angles;
        double total = 0.0;
        for (double& a : angles) total += (a = std::max(1e-3, a + noise(rng)));
        for (double& a : angles) a *= kTwoPi / total;
        CHECK(radial_distance(angles, 4) <= c.d + 1e-9);
    }
}
