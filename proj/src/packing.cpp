#include "cnp/packing.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <limits>
#include <map>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "cnp/optimize.hpp"

namespace cnp {

PackingMeasure verify_packing(std::span<const Point> points) {
    if (points.size() < 2) throw std::invalid_argument("verify_packing needs at least two points");
    PackingMeasure m{std::numeric_limits<double>::infinity(), 0.0};
    for (std::size_t i = 0; i < points.size(); ++i)
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            const double d = distance(points[i], points[j]);
            m.min_dist = std::min(m.min_dist, d);
            m.width = std::max(m.width, d);
        }
    return m;
}

namespace {

double ratio(std::span<const Point> points) {
    const PackingMeasure m = verify_packing(points);
    return m.min_dist > 0.0 ? m.width / m.min_dist : std::numeric_limits<double>::infinity();
}

std::vector<Point> normalized(std::vector<Point> points) {
    const PackingMeasure m = verify_packing(points);
    if (!(m.min_dist > 0.0)) return points;
    Point c;
    for (const Point& p : points) c = c + p;
    c = (1.0 / static_cast<double>(points.size())) * c;
    for (Point& p : points) p = (1.0 / m.min_dist) * (p - c);
    return points;
}

// x = (x0, y0, x1, y1, ..., W).
double penalty(std::span<const double> x, std::span<double> grad, double mu) {
    const std::size_t q = (x.size() - 1) / 2;
    const double w = x.back();
    double value = w;
    std::fill(grad.begin(), grad.end(), 0.0);
    double dw = 1.0;
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = i + 1; j < q; ++j) {
            const double dx = x[2 * i] - x[2 * j];
            const double dy = x[2 * i + 1] - x[2 * j + 1];
            const double d2 = dx * dx + dy * dy;
            double coeff = 0.0;  // derivative of the pair penalty with respect to d2
            if (d2 < 1.0) {
                const double a = 1.0 - d2;
                value += mu * a * a;
                coeff -= 2.0 * mu * a;
            }
            if (d2 > w * w) {
                const double b = d2 - w * w;
                value += mu * b * b;
                coeff += 2.0 * mu * b;
                dw -= 4.0 * mu * b * w;
            }
            grad[2 * i] += coeff * 2.0 * dx;
            grad[2 * i + 1] += coeff * 2.0 * dy;
            grad[2 * j] -= coeff * 2.0 * dx;
            grad[2 * j + 1] -= coeff * 2.0 * dy;
        }
    grad.back() = dw;
    return value;
}

}  // namespace

std::vector<Point> refine_packing(std::vector<Point> points) {
    if (points.size() < 2) throw std::invalid_argument("refine_packing needs at least two points");
    std::vector<double> x;
    x.reserve(2 * points.size() + 1);
    for (const Point& p : points) {
        x.push_back(p.x);
        x.push_back(p.y);
    }
    x.push_back(verify_packing(points).width);
    for (double mu : {1e1, 1e2, 1e3, 1e4, 1e5, 1e6}) {
        const ObjectiveWithGradient f = [mu](std::span<const double> v, std::span<double> g) {
            return penalty(v, g, mu);
        };
        x = quasi_newton(f, std::move(x), 300, 1e-10).x;
    }
    std::vector<Point> out(points.size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = {x[2 * i], x[2 * i + 1]};
    return normalized(std::move(out));
}

namespace {

struct Restart {
    std::vector<Point> points;
    double ratio = std::numeric_limits<double>::infinity();
};

Restart run_restart(int q, const PackingOptions& o, int index) {
    std::mt19937_64 rng(o.seed * 0x9E3779B97F4A7C15ull + static_cast<std::uint64_t>(index));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    const double radius = std::sqrt(static_cast<double>(q));
    std::vector<Point> start;
    for (int i = 0; i < q; ++i) {
        const double r = radius * std::sqrt(unit(rng));
        const double t = kTwoPi * unit(rng);
        start.push_back({r * std::cos(t), r * std::sin(t)});
    }
    Restart best;
    best.points = refine_packing(std::move(start));
    best.ratio = ratio(best.points);

    auto consider = [&](std::vector<Point> trial) {
        trial = refine_packing(std::move(trial));
        const double r = ratio(trial);
        if (r < best.ratio - 1e-12) {
            best.ratio = r;
            best.points = std::move(trial);
        }
    };

    std::uniform_real_distribution<double> large(-o.large_step, o.large_step);
    std::uniform_real_distribution<double> small(-o.small_step, o.small_step);
    std::uniform_int_distribution<int> how_many(1, std::min(3, q));
    std::uniform_int_distribution<int> which(0, q - 1);
    for (int cycle = 0; cycle < o.cycles; ++cycle) {
        for (int it = 0; it < o.large_iterations; ++it) {
            std::vector<Point> trial = best.points;
            for (int m = how_many(rng); m > 0; --m) {
                Point& p = trial[static_cast<std::size_t>(which(rng))];
                p.x += large(rng);
                p.y += large(rng);
            }
            consider(std::move(trial));
        }
        for (int it = 0; it < o.small_iterations; ++it) {
            std::vector<Point> trial = best.points;
            for (Point& p : trial) {
                p.x += small(rng);
                p.y += small(rng);
            }
            consider(std::move(trial));
        }
    }
    return best;
}

}  // namespace

PackingResult pack(int q, const PackingOptions& o) {
    if (q < 2) throw std::invalid_argument("pack needs q >= 2");
    if (o.restarts < 1) throw std::invalid_argument("restarts must be positive");

    std::vector<Restart> results(static_cast<std::size_t>(o.restarts));
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int r = next++; r < o.restarts; r = next++) results[static_cast<std::size_t>(r)] = run_restart(q, o, r);
    };
    unsigned threads = o.threads ? o.threads : std::thread::hardware_concurrency();
    threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(o.restarts)));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    const Restart* best = &results.front();
    for (const Restart& r : results)
        if (r.ratio < best->ratio - 1e-12) best = &r;

    PackingResult out;
    out.q = q;
    out.points = best->points;
    const PackingMeasure m = verify_packing(out.points);
    out.width = m.width;
    out.min_dist = m.min_dist;
    out.seed = o.seed;
    out.restarts = o.restarts;
    return out;
}

PackingResult pack(int q, int restarts, std::uint64_t seed) {
    PackingOptions o;
    o.restarts = restarts;
    o.seed = seed;
    return pack(q, o);
}

int clique_chi_bound(int q) {
    if (q < 1) throw std::invalid_argument("clique size must be positive");
    return q + 3;
}

std::string packing_table_csv(std::span<const PackingResult> results) {
    std::map<int, double> width;
    for (const PackingResult& r : results) width[r.q] = r.width;
    std::ostringstream out;
    out << "q";
    for (int c = 1; c <= 10; ++c) out << ",+" << c;
    out << '\n';
    if (width.empty()) return out.str();
    const int last = width.rbegin()->first;
    out << std::fixed << std::setprecision(5);
    for (int row = 0; row <= (last - 1) / 10 * 10; row += 10) {
        out << '+' << row;
        for (int c = 1; c <= 10; ++c) {
            out << ',';
            if (auto it = width.find(row + c); it != width.end()) out << it->second;
        }
        out << '\n';
    }
    return out.str();
}

}  // namespace cnp
