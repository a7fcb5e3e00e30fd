#include "cnp/tilings.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "cnp/optimize.hpp"

namespace cnp {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kAreaRelTol = 1e-6;

struct Bound {
    Point centre;
    double radius = 0.0;
};

Bound bounding_circle(const Polygon& p) {
    const std::vector<Point> pts = p.arcs().empty() ? p.vertices() : p.flattened(0.01);
    Bound b{p.centroid_hint(), 0.0};
    for (const Point& x : pts) b.radius = std::max(b.radius, distance(x, b.centre));
    // Chords of flattened arcs lie inside the arc by at most step^2 / (8r).
    b.radius += 1e-3;
    return b;
}

std::string tile_list(const std::vector<int>& tiles) {
    std::ostringstream out;
    for (std::size_t i = 0; i < tiles.size(); ++i) out << (i ? ", " : "") << tiles[i];
    return out.str();
}

void check_colors(const TilingSpec& spec) {
    if (spec.k < 1) throw std::invalid_argument("tiling needs k >= 1");
    if (spec.tiles.empty()) throw std::invalid_argument("tiling has no tiles");
    for (std::size_t i = 0; i < spec.tiles.size(); ++i) {
        const int c = spec.tiles[i].color;
        if (c < 0 || c >= spec.k)
            throw TilingError("tile " + std::to_string(i) + " has colour outside [0, k)", {static_cast<int>(i)});
    }
}

void check_area(const TilingSpec& spec, double expected) {
    double total = 0.0;
    std::vector<int> all;
    for (std::size_t i = 0; i < spec.tiles.size(); ++i) {
        total += spec.tiles[i].shape.area();
        all.push_back(static_cast<int>(i));
    }
    if (std::abs(total - expected) > kAreaRelTol * expected) {
        std::ostringstream msg;
        msg.precision(12);
        msg << "tile areas sum to " << total << " but the region has area " << expected << "; tiles: " << tile_list(all);
        throw TilingError(msg.str(), all);
    }
}

// Tile j shifted by `shift`, for every j and every shift of the shell, paired
// with tile i; calls visit(i, j, shift) for each unordered pair once.
template <class Visit>
void for_each_pair(std::size_t count, const std::vector<Point>& shifts, Visit&& visit) {
    for (std::size_t i = 0; i < count; ++i)
        for (std::size_t j = i; j < count; ++j)
            for (std::size_t s = 0; s < shifts.size(); ++s) {
                const bool origin = shifts[s].x == 0.0 && shifts[s].y == 0.0;
                if (i == j && origin) continue;
                visit(static_cast<int>(i), static_cast<int>(j), shifts[s]);
            }
}

TilingReport measure(const TilingSpec& spec, const std::vector<Point>& shifts) {
    const std::size_t n = spec.tiles.size();
    std::vector<Bound> bounds;
    bounds.reserve(n);
    for (const ColoredTile& t : spec.tiles) bounds.push_back(bounding_circle(t.shape));

    auto shifted = [&](int j, Point s) {
        return (s.x == 0.0 && s.y == 0.0) ? spec.tiles[j].shape : spec.tiles[j].shape.translated(s);
    };

    for_each_pair(n, shifts, [&](int i, int j, Point s) {
        const double gap = distance(bounds[i].centre, bounds[j].centre + s) - bounds[i].radius - bounds[j].radius;
        if (gap >= 0.0) return;
        if (interiors_overlap(spec.tiles[i].shape, shifted(j, s))) {
            std::ostringstream msg;
            msg << "tiles " << i << " and " << j << " (shifted by " << s.x << ", " << s.y << ") overlap";
            throw TilingError(msg.str(), {i, j});
        }
    });

    TilingReport report;
    report.min_same_color_gap = kInf;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = diameter(spec.tiles[i].shape);
        report.max_width = std::max(report.max_width, w);
        if (w > 1.0 + report.tolerance) report.oversized.push_back(static_cast<int>(i));
    }
    for_each_pair(n, shifts, [&](int i, int j, Point s) {
        if (spec.tiles[i].color != spec.tiles[j].color) return;
        const double lower = distance(bounds[i].centre, bounds[j].centre + s) - bounds[i].radius - bounds[j].radius;
        if (lower > report.min_same_color_gap && lower > report.tolerance) return;
        const double gap = min_distance(spec.tiles[i].shape, shifted(j, s));
        const TilePair pair{i, j, s, gap};
        if (gap <= report.tolerance) report.touching.push_back(pair);
        if (gap < report.min_same_color_gap) {
            report.min_same_color_gap = gap;
            report.closest = pair;
        }
    });
    return report;
}

}  // namespace

TilingSpec TilingSpec::scaled(double factor) const {
    if (!(factor > 0.0)) throw std::invalid_argument("scale factor must be positive");
    TilingSpec out;
    out.k = k;
    if (const auto* p = std::get_if<PeriodicRegion>(&region))
        out.region = PeriodicRegion{factor * p->period1, factor * p->period2};
    else {
        const auto& a = std::get<AnnulusRegion>(region);
        out.region = AnnulusRegion{factor * a.inner, factor * a.outer};
    }
    for (const ColoredTile& t : tiles) out.tiles.push_back({t.shape.scaled(factor), t.color});
    return out;
}

TilingReport verify_tiling(const TilingSpec& spec, int shell) {
    check_colors(spec);
    if (shell < 1) throw std::invalid_argument("shell must be at least 1");

    if (const auto* p = std::get_if<PeriodicRegion>(&spec.region)) {
        const auto [b1, b2] = reduce_basis(p->period1, p->period2);
        const double det = std::abs(cross(b1, b2));
        if (!(det > kGeomTol)) throw std::invalid_argument("period vectors are degenerate");
        for (std::size_t i = 0; i < spec.tiles.size(); ++i)
            if (!spec.tiles[i].shape.arcs().empty())
                throw TilingError("periodic tilings take straight-edged tiles only", {static_cast<int>(i)});
        check_area(spec, det);
        std::vector<Point> shifts;
        for (int x = -shell; x <= shell; ++x)
            for (int y = -shell; y <= shell; ++y) shifts.push_back(static_cast<double>(x) * b1 + static_cast<double>(y) * b2);
        return measure(spec, shifts);
    }

    const auto& ring = std::get<AnnulusRegion>(spec.region);
    if (!(ring.inner > 0.0 && ring.outer > ring.inner)) throw std::invalid_argument("annulus needs 0 < inner < outer");
    for (std::size_t i = 0; i < spec.tiles.size(); ++i) {
        for (const Point& v : spec.tiles[i].shape.vertices()) {
            const double r = norm(v);
            if (r < ring.inner - kGeomTol || r > ring.outer + kGeomTol)
                throw TilingError("tile " + std::to_string(i) + " leaves the annulus", {static_cast<int>(i)});
        }
        for (const ArcEdge& a : spec.tiles[i].shape.arcs())
            if (std::abs(a.radius - ring.inner) > kGeomTol && std::abs(a.radius - ring.outer) > kGeomTol)
                throw TilingError("tile " + std::to_string(i) + " has an arc off the annulus boundary",
                                  {static_cast<int>(i)});
    }
    check_area(spec, kPi * (ring.outer * ring.outer - ring.inner * ring.inner));
    return measure(spec, {Point{}});
}

// ---------------------------------------------------------------------------
// Sublattice colourings

Point SublatticeColoring::s1() const { return static_cast<double>(hnf[0]) * t1; }

Point SublatticeColoring::s2() const {
    return static_cast<double>(hnf[1]) * t1 + static_cast<double>(hnf[2]) * t2;
}

TilingSpec SublatticeColoring::to_spec() const {
    TilingSpec spec;
    spec.k = k;
    spec.region = PeriodicRegion{s1(), s2()};
    const auto [a, c, b] = hnf;
    for (std::int64_t y = 0; y < b; ++y)
        for (std::int64_t x = 0; x < a; ++x) {
            const Point at = static_cast<double>(x) * t1 + static_cast<double>(y) * t2;
            spec.tiles.push_back({tile.translated(at), static_cast<int>(y * a + x)});
        }
    return spec;
}

std::vector<std::array<std::int64_t, 3>> sublattices_of_index(std::int64_t k) {
    if (k < 1) throw std::invalid_argument("sublattice index must be positive");
    std::vector<std::array<std::int64_t, 3>> out;
    for (std::int64_t a = 1; a <= k; ++a) {
        if (k % a) continue;
        for (std::int64_t c = 0; c < a; ++c) out.push_back({a, c, k / a});
    }
    return out;
}

std::array<std::int64_t, 3> hermite_normal_form(LatticeVector g1, LatticeVector g2) {
    const std::int64_t det = g1.u * g2.v - g1.v * g2.u;
    if (det == 0) throw std::invalid_argument("generators are linearly dependent");
    // Extended Euclid on the second coordinates.
    std::int64_t r0 = g1.v, r1 = g2.v, x0 = 1, x1 = 0, y0 = 0, y1 = 1;
    while (r1 != 0) {
        const std::int64_t q = r0 / r1;
        std::tie(r0, r1) = std::pair{r1, r0 - q * r1};
        std::tie(x0, x1) = std::pair{x1, x0 - q * x1};
        std::tie(y0, y1) = std::pair{y1, y0 - q * y1};
    }
    if (r0 < 0) r0 = -r0, x0 = -x0, y0 = -y0;
    const std::int64_t b = r0;
    const std::int64_t c_raw = x0 * g1.u + y0 * g2.u;
    const std::int64_t a = std::abs(det) / b;
    std::int64_t c = c_raw % a;
    if (c < 0) c += a;
    return {a, c, b};
}

namespace {

// Eisenstein product in the (1, omega) basis, omega^2 = omega - 1.
LatticeVector eisenstein_mul(LatticeVector x, LatticeVector y) {
    return {x.u * y.u - x.v * y.v, x.u * y.v + x.v * y.u + x.v * y.v};
}

const double kRegularStep = std::sqrt(3.0) / 2.0;

Polygon regular_tile() { return regular_polygon(6, 0.5, kPi / 6.0); }

double regular_gap(LatticeVector g, std::span<const Point> doubled) {
    static const std::vector<LatticeVector> multipliers = [] {
        std::vector<LatticeVector> m;
        for (std::int64_t n : {1, 3, 4})
            for (LatticeVector w : vectors_of_norm(n)) m.push_back(w);
        return m;
    }();
    double best = kInf;
    for (LatticeVector alpha : multipliers)
        best = std::min(best, point_convex_distance(to_cartesian(eisenstein_mul(alpha, g), kRegularStep), doubled));
    return best;
}

}  // namespace

SublatticeColoring regular_sublattice_coloring(std::int64_t k) {
    if (k < 1 || !is_loeschian(k)) throw std::invalid_argument(std::to_string(k) + " is not a positive Loeschian number");
    const Polygon tile = regular_tile();
    std::vector<Point> doubled;
    for (const Point& v : tile.vertices()) doubled.push_back(2.0 * v);

    SublatticeColoring best;
    best.k = static_cast<int>(k);
    best.tile = tile;
    best.t1 = to_cartesian({1, 0}, kRegularStep);
    best.t2 = to_cartesian({0, 1}, kRegularStep);
    best.d = -1.0;
    for (LatticeVector g : vectors_of_norm(k)) {
        const double d = regular_gap(g, doubled);
        if (d > best.d + 1e-12) {
            best.d = d;
            best.hnf = hermite_normal_form(g, rotate60(g));
        }
    }
    return best;
}

double regular_sublattice_distance(std::int64_t k) { return regular_sublattice_coloring(k).d; }

double hexagon_objective(std::span<const double> v, const std::array<std::int64_t, 3>& hnf) {
    const Point v0{v[0], v[1]}, v1{v[2], v[3]}, v2{v[4], v[5]};
    const std::array<Point, 6> p{v0, v1, v2, -1.0 * v0, -1.0 * v1, -1.0 * v2};
    double area2 = 0.0;
    for (std::size_t i = 0; i < 6; ++i) {
        const Point e1 = p[(i + 1) % 6] - p[i];
        const Point e2 = p[(i + 2) % 6] - p[(i + 1) % 6];
        if (cross(e1, e2) < -1e-12) return -1.0;
        area2 += cross(p[i], p[(i + 1) % 6]);
    }
    if (!(area2 > 1e-9)) return -1.0;
    double diam = 0.0;
    for (std::size_t i = 0; i < 6; ++i)
        for (std::size_t j = i + 1; j < 6; ++j) diam = std::max(diam, distance(p[i], p[j]));

    const Point t1 = v0 + v1, t2 = v1 + v2;
    const auto [r1, r2] = reduce_basis(static_cast<double>(hnf[0]) * t1,
                                       static_cast<double>(hnf[1]) * t1 + static_cast<double>(hnf[2]) * t2);
    std::array<Point, 6> doubled;
    for (std::size_t i = 0; i < 6; ++i) doubled[i] = 2.0 * p[i];
    double best = kInf;
    for (int i = -3; i <= 3; ++i)
        for (int j = -3; j <= 3; ++j) {
            if (i == 0 && j == 0) continue;
            const Point s = static_cast<double>(i) * r1 + static_cast<double>(j) * r2;
            best = std::min(best, point_convex_distance(s, doubled));
        }
    return best / diam;
}

namespace {

struct HexCandidate {
    double d = -1.0;
    std::vector<double> v;
    std::array<std::int64_t, 3> hnf{1, 0, 1};
};

std::vector<double> random_hexagon(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> phase(0.0, kPi / 3.0), radius(0.35, 0.65), jitter(-0.3, 0.3);
    const double base = phase(rng);
    std::vector<double> v;
    for (int j = 0; j < 3; ++j) {
        const double th = base + j * kPi / 3.0 + jitter(rng);
        const double r = radius(rng);
        v.push_back(r * std::cos(th));
        v.push_back(r * std::sin(th));
    }
    return v;
}

HexCandidate refine_hexagon(std::vector<double> v, const std::array<std::int64_t, 3>& hnf) {
    const Objective f = [&hnf](std::span<const double> x) { return -hexagon_objective(x, hnf); };
    double value = f(v);
    for (double step : {0.05, 0.02, 0.005, 0.001}) {
        for (int round = 0; round < 4; ++round) {
            Minimum m = nelder_mead(f, v, step, 3000, 1e-12);
            if (!(m.value < value - 1e-13)) break;
            value = m.value;
            v = std::move(m.x);
        }
    }
    return {-value, std::move(v), hnf};
}

HexCandidate run_restart(std::int64_t k, std::uint64_t seed, int restart) {
    std::mt19937_64 rng(seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(restart));
    HexCandidate best;
    for (const auto& hnf : sublattices_of_index(k)) {
        std::vector<double> v = random_hexagon(rng);
        while (hexagon_objective(v, hnf) < 0.0) v = random_hexagon(rng);
        HexCandidate c = refine_hexagon(std::move(v), hnf);
        if (c.d > best.d + 1e-12) best = std::move(c);
    }
    return best;
}

SublatticeColoring from_hexagon(std::int64_t k, const HexCandidate& c) {
    const Point v0{c.v[0], c.v[1]}, v1{c.v[2], c.v[3]}, v2{c.v[4], c.v[5]};
    const Polygon raw({v0, v1, v2, -1.0 * v0, -1.0 * v1, -1.0 * v2});
    const double scale = 1.0 / diameter(raw);
    SublatticeColoring out;
    out.k = static_cast<int>(k);
    out.tile = raw.scaled(scale);
    out.t1 = scale * (v0 + v1);
    out.t2 = scale * (v1 + v2);
    out.hnf = c.hnf;
    out.d = c.d;
    return out;
}

}  // namespace

SublatticeColoring general_sublattice_coloring(std::int64_t k, int restarts, std::uint64_t seed) {
    if (k < 1) throw std::invalid_argument("k must be positive");
    if (restarts < 1) throw std::invalid_argument("restarts must be positive");

    std::vector<HexCandidate> results(static_cast<std::size_t>(restarts));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int r = next++; r < restarts; r = next++) results[static_cast<std::size_t>(r)] = run_restart(k, seed, r);
    };
    const unsigned threads = std::max(1u, std::min<unsigned>(std::thread::hardware_concurrency(), restarts));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    const HexCandidate* best = &results.front();
    for (const HexCandidate& c : results)
        if (c.d > best->d + 1e-12) best = &c;

    SublatticeColoring out = from_hexagon(k, *best);
    if (is_loeschian(k)) {
        SublatticeColoring regular = regular_sublattice_coloring(k);
        if (regular.d >= out.d) return regular;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Classes

std::string to_string(TilingClass c) {
    switch (c) {
        case TilingClass::l_plus: return "L+";
        case TilingClass::l_minus: return "L-";
        case TilingClass::lbar_plus: return "Lbar+";
        case TilingClass::lbar_minus: return "Lbar-";
    }
    throw std::logic_error("unknown tiling class");
}

Classification classify_k(std::int64_t k, std::span<const double> best, std::optional<double> regular) {
    if (k < 1 || static_cast<std::size_t>(k) > best.size())
        throw std::invalid_argument("classify_k needs distances for 1..k");
    constexpr double tol = 1e-6;
    double previous = 0.0;
    for (std::int64_t j = 1; j < k; ++j) previous = std::max(previous, best[static_cast<std::size_t>(j - 1)]);
    const double d = best[static_cast<std::size_t>(k - 1)];
    const bool grows = d > tol && d > previous + tol;

    if (!is_loeschian(k)) return {grows ? TilingClass::lbar_plus : TilingClass::lbar_minus, std::nullopt};
    if (!grows) return {TilingClass::l_minus, std::nullopt};
    const bool irregular_better = regular && d > *regular + tol;
    if (!irregular_better) return {TilingClass::l_plus, std::nullopt};
    const bool regular_grows = *regular > tol && *regular > previous + tol;
    if (regular_grows) return {TilingClass::l_plus, TilingClass::lbar_plus};
    return {TilingClass::lbar_plus, std::nullopt};
}

// ---------------------------------------------------------------------------
// Radial colourings

double sector_width(double theta, double d) {
    const double chord = theta >= kPi ? 2.0 * d : 2.0 * d * std::sin(theta / 2.0);
    const double diagonal = std::sqrt(std::max(0.0, 1.0 + d * d - 2.0 * d * std::cos(theta)));
    return std::max({chord, diagonal, d - 1.0});
}

double sector_width_cap(double theta) {
    const double chord = theta >= kPi ? 0.5 : 1.0 / (2.0 * std::sin(theta / 2.0));
    return std::min({chord, 2.0 * std::cos(theta), 2.0});
}

double radial_distance(std::span<const double> angles, int k) {
    const std::size_t n = angles.size();
    if (k < 1 || n == 0) throw std::invalid_argument("radial_distance needs k >= 1 and sectors");
    std::vector<double> prefix(n + 1, 0.0);
    for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + angles[i];
    const double total = prefix[n];

    double d = kInf;
    for (double theta : angles) d = std::min(d, sector_width_cap(theta));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + static_cast<std::size_t>(k); j < n; j += static_cast<std::size_t>(k)) {
            const double forward = prefix[j] - prefix[i + 1];
            const double backward = total - angles[i] - angles[j] - forward;
            const double phi = std::min(forward, backward);
            d = std::min(d, 2.0 * std::sin(std::max(0.0, phi) / 2.0));
        }
    return d;
}

namespace {

double refine_angles(std::vector<double>& angles, int k) {
    double best = radial_distance(angles, k);
    const std::size_t n = angles.size();
    for (double delta = 0.02; delta > 1e-13; delta /= 2.0) {
        for (int sweep = 0; sweep < 200; ++sweep) {
            bool improved = false;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = 0; j < n; ++j) {
                    if (i == j || angles[j] <= delta) continue;
                    angles[i] += delta;
                    angles[j] -= delta;
                    const double d = radial_distance(angles, k);
                    if (d > best + 1e-15) {
                        best = d;
                        improved = true;
                    } else {
                        angles[i] -= delta;
                        angles[j] += delta;
                    }
                }
            if (!improved) break;
        }
    }
    return best;
}

}  // namespace

RadialColoring radial_optimum(int k, int n_max) {
    if (k < 2) throw std::invalid_argument("radial colouring needs k >= 2");
    if (n_max < k) throw std::invalid_argument("n_max must be at least k");
    RadialColoring best;
    best.d = -kInf;
    for (int n = k; n <= n_max; n += k) {
        std::vector<double> angles(static_cast<std::size_t>(n), kTwoPi / n);
        const double d = refine_angles(angles, k);
        if (d > best.d + 1e-12) {
            best.k = k;
            best.n = n;
            best.angles = angles;
            best.d = d;
        }
    }
    best.colors.resize(static_cast<std::size_t>(best.n));
    for (int i = 0; i < best.n; ++i) best.colors[static_cast<std::size_t>(i)] = i % k;
    best.feasible = best.d >= 1.0;
    return best;
}

TilingSpec RadialColoring::to_spec(double phase) const {
    if (!feasible || !(d > 1.0)) throw std::domain_error("radial colouring with d <= 1 has an empty annulus");
    TilingSpec spec;
    spec.k = k;
    spec.region = AnnulusRegion{1.0, d};
    double at = phase;
    for (std::size_t i = 0; i < angles.size(); ++i) {
        spec.tiles.push_back({annular_sector(1.0, d, at, angles[i]), colors[i]});
        at += angles[i];
    }
    return spec;
}

}  // namespace cnp
