#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "cnp/geometry.hpp"

using namespace cnp;

namespace {

Polygon square(Point corner, double side = 1.0) {
    return Polygon({corner, corner + Point{side, 0}, corner + Point{side, side}, corner + Point{0, side}});
}

// Dense boundary samples, arcs included, as a brute-force oracle.
std::vector<Point> boundary_samples(const Polygon& p, int per_edge) {
    std::vector<Point> out;
    for (std::size_t e = 0; e < p.edge_count(); ++e) {
        for (int i = 0; i < per_edge; ++i) {
            const double t = static_cast<double>(i) / per_edge;
            if (p.is_arc(e)) {
                const Arc a = p.arc(e);
                out.push_back(a.point_at(a.start + t * a.sweep));
            } else {
                const Segment s = p.segment(e);
                out.push_back(s.a + t * (s.b - s.a));
            }
        }
    }
    return out;
}

double sampled_min_distance(const Polygon& p, const Polygon& q, int per_edge) {
    const auto a = boundary_samples(p, per_edge), b = boundary_samples(q, per_edge);
    double best = 1e300;
    for (Point x : a)
        for (Point y : b) best = std::min(best, distance(x, y));
    return best;
}

double sampled_diameter(const Polygon& p, int per_edge) {
    const auto a = boundary_samples(p, per_edge);
    double best = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = i + 1; j < a.size(); ++j) best = std::max(best, distance(a[i], a[j]));
    return best;
}

Polygon random_convex(std::mt19937_64& rng, Point centre) {
    std::uniform_real_distribution<double> r(0.3, 1.0);
    std::uniform_int_distribution<int> n(3, 8);
    const int sides = n(rng);
    std::vector<double> angles;
    std::uniform_real_distribution<double> a(0.0, kTwoPi);
    for (int i = 0; i < sides; ++i) angles.push_back(a(rng));
    std::sort(angles.begin(), angles.end());
    std::vector<Point> pts;
    const double radius = r(rng);
    for (double t : angles) pts.push_back(centre + Point{radius * std::cos(t), radius * std::sin(t)});
    return Polygon(pts);
}

}  // namespace

TEST_CASE("diameter examples") {
    CHECK(diameter(square({0, 0})) == doctest::Approx(std::sqrt(2.0)));
    CHECK(diameter(regular_polygon(6, 0.5)) == doctest::Approx(1.0));
}

TEST_CASE("diameter of an annular sector") {
    const double d = 1.2856, theta = kTwoPi / 9.0;
    const Polygon s = annular_sector(1.0, d, 0.0, theta);
    const double chord = 2.0 * d * std::sin(theta / 2.0);
    const double diagonal = std::sqrt(1.0 + d * d - 2.0 * d * std::cos(theta));
    CHECK(diameter(s) == doctest::Approx(std::max(chord, diagonal)).epsilon(1e-9));
    CHECK(diameter(s) == doctest::Approx(0.87940).epsilon(1e-5));
}

TEST_CASE("degenerate polygons are rejected") {
    CHECK_THROWS(Polygon({{0, 0}, {1, 0}}));
    CHECK_THROWS_AS(diameter(Polygon({{0, 0}, {1, 0}, {2, 0}})), std::domain_error);
    CHECK_THROWS(Polygon({{0, 0}, {1, 0}, {0, std::nan("")}}));
}

TEST_CASE("min_distance examples") {
    CHECK(min_distance(square({0, 0}), square({1, 0})) == doctest::Approx(0.0));
    CHECK(min_distance(square({0, 0}), square({3, 0})) == doctest::Approx(2.0));
    const double step = std::sqrt(3.0) / 2.0;
    // Pointy-top hexagons: flat sides face along e1.
    const Polygon h = regular_polygon(6, 0.5, kPi / 6.0);
    CHECK(min_distance(h, h.translated({3.0 * step, 0.0})) == doctest::Approx(std::sqrt(3.0)));
    // Lattice vector (2, 1) on the hexagon lattice of step sqrt(3)/2.
    const Point g{step * (2.0 + 0.5), step * (std::sqrt(3.0) / 2.0)};
    CHECK(min_distance(h, h.translated(g)) == doctest::Approx(std::sqrt(7.0) / 2.0).epsilon(1e-9));
}

TEST_CASE("overlapping interiors are an error") {
    CHECK_THROWS_AS(min_distance(square({0, 0}), square({0.5, 0.5})), std::domain_error);
    CHECK(interiors_overlap(square({0, 0}), square({0.5, 0.5})));
    CHECK_FALSE(interiors_overlap(square({0, 0}), square({1, 0})));
}

TEST_CASE("arc primitives") {
    const Arc unit{1.0, -0.5, 1.0};
    CHECK(segment_arc_distance({{2, 0}, {3, 0}}, unit) == doctest::Approx(1.0));
    CHECK(arc_arc_distance(Arc{1.0, 0.0, 1.0}, Arc{2.0, 0.5, 1.0}) == doctest::Approx(1.0));
    const double deg = kPi / 180.0;
    CHECK(arc_arc_distance(Arc{1.0, 0.0, 10 * deg}, Arc{1.0, 50 * deg, 10 * deg}) ==
          doctest::Approx(2.0 * std::sin(20 * deg)));
    CHECK(point_arc_distance({0, 0}, unit) == doctest::Approx(1.0));
    CHECK(point_arc_farthest({-1, 0}, Arc{1.0, -0.1, 0.2}) == doctest::Approx(2.0));
}

TEST_CASE("property: min_distance brackets dense sampling and is symmetric") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> c(-3.0, 3.0);
    int checked = 0;
    while (checked < 40) {
        const Polygon p = random_convex(rng, {c(rng), c(rng)});
        const Polygon q = random_convex(rng, {c(rng), c(rng)});
        if (interiors_overlap(p, q)) continue;
        ++checked;
        const double d = min_distance(p, q);
        CHECK(d == doctest::Approx(min_distance(q, p)).epsilon(1e-12));
        const double sampled = sampled_min_distance(p, q, 400);
        CHECK(d <= sampled + 1e-9);
        CHECK(sampled - d < 1e-2);
    }
}

TEST_CASE("property: diameter matches sampling and is invariant under rigid motion") {
    std::mt19937_64 rng(9);
    std::uniform_real_distribution<double> a(0.0, kTwoPi);
    for (int i = 0; i < 30; ++i) {
        const Polygon p = random_convex(rng, {0, 0});
        const double d = diameter(p);
        CHECK(d == doctest::Approx(sampled_diameter(p, 50)).epsilon(1e-9));
        CHECK(diameter(p.rotated(a(rng)).translated({3.0, -2.0})) == doctest::Approx(d).epsilon(1e-9));
    }
}

TEST_CASE("property: sector diameters match boundary sampling") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> outer(1.0, 3.0), sweep(0.05, 2.5), start(0.0, kTwoPi);
    for (int i = 0; i < 30; ++i) {
        const Polygon s = annular_sector(1.0, outer(rng), start(rng), sweep(rng));
        const double d = diameter(s);
        const double sampled = sampled_diameter(s, 600);
        CHECK(d >= sampled - 1e-9);
        CHECK(d - sampled < 1e-3);
    }
}

TEST_CASE("property: distances between annular sectors match sampling") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> sweep(0.1, 1.2), start(0.0, kTwoPi);
    int checked = 0;
    while (checked < 30) {
        const Polygon s = annular_sector(1.0, 1.5, start(rng), sweep(rng));
        const Polygon t = annular_sector(1.0, 1.5, start(rng), sweep(rng));
        if (interiors_overlap(s, t)) continue;
        ++checked;
        const double d = min_distance(s, t);
        const double sampled = sampled_min_distance(s, t, 600);
        CHECK(d <= sampled + 1e-9);
        CHECK(sampled - d < 1e-2);
    }
}

TEST_CASE("property: triangle inequality through a third polygon") {
    std::mt19937_64 rng(21);
    std::uniform_real_distribution<double> c(-4.0, 4.0);
    int checked = 0;
    while (checked < 40) {
        const Polygon p1 = random_convex(rng, {c(rng), c(rng)});
        const Polygon p2 = random_convex(rng, {c(rng), c(rng)});
        const Polygon p3 = random_convex(rng, {c(rng), c(rng)});
        if (interiors_overlap(p1, p2) || interiors_overlap(p2, p3) || interiors_overlap(p1, p3)) continue;
        ++checked;
        CHECK(min_distance(p1, p3) <= min_distance(p1, p2) + diameter(p2) + min_distance(p2, p3) + 1e-9);
    }
}

TEST_CASE("areas and containment") {
    CHECK(square({0, 0}, 2.0).signed_area() == doctest::Approx(4.0));
    const Polygon h = regular_polygon(6, 0.5);
    CHECK(h.area() == doctest::Approx(3.0 * std::sqrt(3.0) / 2.0 * 0.25));
    const Polygon s = annular_sector(1.0, 2.0, 0.0, kPi / 2.0);
    CHECK(s.area() == doctest::Approx(kPi / 4.0 * 3.0).epsilon(1e-9));
    CHECK(s.contains({1.2, 0.7}));
    CHECK_FALSE(s.contains({0.5, 0.5}));
}

TEST_CASE("point to convex polygon distance") {
    const std::vector<Point> sq{{0, 0}, {1, 0}, {1, 1}, {0, 1}};
    CHECK(point_convex_distance({0.5, 0.5}, sq) == doctest::Approx(0.0));
    CHECK(point_convex_distance({2, 0.5}, sq) == doctest::Approx(1.0));
    CHECK(point_convex_distance({2, 2}, sq) == doctest::Approx(std::sqrt(2.0)));
}

TEST_CASE("reduced basis spans the same lattice with shortest vectors") {
    const auto [b1, b2] = reduce_basis({1, 0}, {7.5, 0.5});
    CHECK(std::abs(cross(b1, b2)) == doctest::Approx(0.5));
    CHECK(norm(b1) <= norm(b2) + 1e-12);
    CHECK(std::abs(dot(b1, b2)) <= 0.5 * dot(b1, b1) + 1e-12);
}
