#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>
#include <stdexcept>

#include "cnp/geometry.hpp"
#include "cnp/lattice.hpp"

using namespace cnp;

namespace {

// Independent membership oracle: enumerate u, v >= 0 directly.
std::set<std::int64_t> brute_loeschian(std::int64_t limit) {
    std::set<std::int64_t> out;
    for (std::int64_t u = 0; u * u <= limit; ++u)
        for (std::int64_t v = 0; u * u + u * v + v * v <= limit; ++v) out.insert(u * u + u * v + v * v);
    return out;
}

}  // namespace

TEST_CASE("norm of small vectors") {
    CHECK(loeschian_norm({0, 0}) == 0);
    CHECK(loeschian_norm({1, 2}) == 7);
    CHECK(loeschian_norm({5, 6}) == 91);
    CHECK(loeschian_norm({1, -1}) == 1);
    CHECK(loeschian_norm({2, -1}) == 3);
}

TEST_CASE("norm rejects coordinates that could overflow") {
    CHECK_THROWS_AS(loeschian_norm({kMaxLatticeCoordinate + 1, 0}), std::overflow_error);
    CHECK_THROWS_AS(loeschian_norm({0, -kMaxLatticeCoordinate - 1}), std::overflow_error);
    CHECK_NOTHROW(loeschian_norm({kMaxLatticeCoordinate, kMaxLatticeCoordinate}));
}

TEST_CASE("table up to 13") {
    const LoeschianTable t = loeschian_upto(13);
    CHECK(t.members() == std::vector<std::int64_t>{0, 1, 3, 4, 7, 9, 12, 13});
    CHECK_FALSE(t.contains(2));
    CHECK(loeschian_upto(200).contains(199));
    CHECK_FALSE(loeschian_upto(200).contains(200));
}

TEST_CASE("table agrees with brute force enumeration") {
    for (std::int64_t limit : {0, 1, 2, 50, 1000, 5000}) {
        const auto oracle = brute_loeschian(limit);
        const LoeschianTable t = loeschian_upto(limit);
        CHECK(std::vector<std::int64_t>(oracle.begin(), oracle.end()) == t.members());
        for (std::int64_t n = 0; n <= limit; ++n) CHECK(is_loeschian(n) == (oracle.count(n) == 1));
    }
}

TEST_CASE("interval counts") {
    CHECK(loeschian_count_in(13, 21) == 4);
    CHECK(loeschian_count_in(27, 76) == 18);
    CHECK(loeschian_count_in(0, 0) == 1);
    CHECK(loeschian_count_in(2, 2) == 0);
}

TEST_CASE("interval count equals a difference of prefix counts") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<std::int64_t> pick(1, 3000);
    for (int i = 0; i < 200; ++i) {
        std::int64_t a = pick(rng), b = pick(rng);
        if (a > b) std::swap(a, b);
        CHECK(loeschian_count_in(a, b) == loeschian_upto(b).count() - loeschian_upto(a - 1).count());
    }
}

TEST_CASE("cartesian embedding") {
    const Point p = to_cartesian({1, 0}, 1.0);
    CHECK(p.x == doctest::Approx(1.0));
    CHECK(p.y == doctest::Approx(0.0));
    const Point q = to_cartesian({0, 1}, 1.0);
    CHECK(q.x == doctest::Approx(0.5));
    CHECK(q.y == doctest::Approx(std::sqrt(3.0) / 2.0));
    CHECK(distance(to_cartesian({0, 0}, 1.0), to_cartesian({1, 2}, 1.0)) == doctest::Approx(std::sqrt(7.0)));
}

TEST_CASE("property: squared distance equals step^2 times the norm") {
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<std::int64_t> c(-60, 60);
    std::uniform_real_distribution<double> s(0.01, 5.0);
    for (int i = 0; i < 1000; ++i) {
        const LatticeVector w1{c(rng), c(rng)}, w2{c(rng), c(rng)};
        const double step = s(rng);
        const double d = distance(to_cartesian(w1, step), to_cartesian(w2, step));
        const double expected = step * step * static_cast<double>(loeschian_norm(w1 - w2));
        CHECK(d * d == doctest::Approx(expected).epsilon(1e-12));
    }
}

TEST_CASE("property: norm is invariant under the twelve lattice symmetries") {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<std::int64_t> c(-1000, 1000);
    for (int i = 0; i < 500; ++i) {
        const LatticeVector w{c(rng), c(rng)};
        const std::int64_t n = loeschian_norm(w);
        CHECK(n >= 0);
        CHECK((n == 0) == (w == LatticeVector{0, 0}));
        CHECK(loeschian_norm({w.v, w.u}) == n);
        LatticeVector r = w;
        for (int k = 0; k < 6; ++k) {
            r = rotate60(r);
            CHECK(loeschian_norm(r) == n);
            CHECK(loeschian_norm(reflect(r)) == n);
        }
        CHECK(r == w);
        CHECK(loeschian_upto(n).contains(n));
    }
}

TEST_CASE("rotation by 60 degrees matches the cartesian rotation") {
    const LatticeVector w{3, -5};
    const Point expected = rotate(to_cartesian(w, 1.0), kPi / 3.0);
    const Point got = to_cartesian(rotate60(w), 1.0);
    CHECK(got.x == doctest::Approx(expected.x));
    CHECK(got.y == doctest::Approx(expected.y));
}

TEST_CASE("vectors of a given norm") {
    CHECK(vectors_of_norm(1).size() == 6);
    CHECK(vectors_of_norm(7).size() == 12);
    CHECK(vectors_of_norm(2).empty());
    for (const LatticeVector& w : vectors_of_norm(49)) CHECK(loeschian_norm(w) == 49);
    // Brute-force count over a box that contains every solution.
    std::size_t count = 0;
    for (std::int64_t u = -20; u <= 20; ++u)
        for (std::int64_t v = -20; v <= 20; ++v) count += loeschian_norm({u, v}) == 91;
    CHECK(vectors_of_norm(91).size() == count);
}

TEST_CASE("neighbouring members") {
    CHECK(previous_loeschian(21) == 19);
    CHECK(previous_loeschian(1) == 0);
    CHECK(previous_loeschian(0) == -1);
    CHECK(next_loeschian(21) == 25);
    CHECK(next_loeschian(0) == 1);
    CHECK(loeschian_at_least(21) == 21);
    CHECK(loeschian_at_least(22) == 25);
}

TEST_CASE("hex ring distance") {
    CHECK(hex_ring({0, 0}) == 0);
    CHECK(hex_ring({1, -1}) == 1);
    CHECK(hex_ring({2, 1}) == 3);
    CHECK(hex_ring({-2, 1}) == 2);
}
