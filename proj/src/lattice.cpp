#include "cnp/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "cnp/geometry.hpp"

namespace cnp {

namespace {

std::int64_t isqrt(std::int64_t n) {
    if (n < 0) return -1;
    auto r = static_cast<std::int64_t>(std::sqrt(static_cast<double>(n)));
    while (r * r > n) --r;
    while ((r + 1) * (r + 1) <= n) ++r;
    return r;
}

void check_range(LatticeVector w) {
    if (std::abs(w.u) > kMaxLatticeCoordinate || std::abs(w.v) > kMaxLatticeCoordinate)
        throw std::overflow_error("lattice coordinate out of range: (" + std::to_string(w.u) + ", " +
                                  std::to_string(w.v) + ")");
}

}  // namespace

std::int64_t loeschian_norm(LatticeVector w) {
    check_range(w);
    return w.u * w.u + w.u * w.v + w.v * w.v;
}

std::int64_t hex_ring(LatticeVector w) {
    check_range(w);
    return std::max({std::abs(w.u), std::abs(w.v), std::abs(w.u + w.v)});
}

Point to_cartesian(LatticeVector w, double step) {
    if (!(step > 0.0)) throw std::invalid_argument("lattice step must be positive");
    const double u = static_cast<double>(w.u);
    const double v = static_cast<double>(w.v);
    return {step * (u + 0.5 * v), step * v * (std::sqrt(3.0) / 2.0)};
}

LoeschianTable::LoeschianTable(std::int64_t limit) : limit_(limit) {
    if (limit < 0) throw std::invalid_argument("Loeschian table limit must be non-negative");
    if (limit > (std::int64_t{1} << 34)) throw std::invalid_argument("Loeschian table limit too large");
    std::vector<bool> hit(static_cast<std::size_t>(limit) + 1, false);
    for (std::int64_t u = 0; u * u <= limit; ++u) {
        for (std::int64_t v = u; u * u + u * v + v * v <= limit; ++v) hit[static_cast<std::size_t>(u * u + u * v + v * v)] = true;
    }
    for (std::int64_t n = 0; n <= limit; ++n)
        if (hit[static_cast<std::size_t>(n)]) members_.push_back(n);
}

bool LoeschianTable::contains(std::int64_t n) const {
    return std::binary_search(members_.begin(), members_.end(), n);
}

std::size_t LoeschianTable::count_in(std::int64_t a, std::int64_t b) const {
    if (b < a) return 0;
    auto lo = std::lower_bound(members_.begin(), members_.end(), a);
    auto hi = std::upper_bound(members_.begin(), members_.end(), b);
    return static_cast<std::size_t>(hi - lo);
}

LoeschianTable loeschian_upto(std::int64_t limit) { return LoeschianTable(limit); }

bool is_loeschian(std::int64_t n) {
    if (n < 0) return false;
    // v^2 + uv + u^2 - n = 0 has an integer root v >= 0 iff 4n - 3u^2 is a
    // perfect square s^2 with s >= u and s - u even.
    for (std::int64_t u = 0; 3 * u * u <= 4 * n; ++u) {
        const std::int64_t s = isqrt(4 * n - 3 * u * u);
        if (s * s == 4 * n - 3 * u * u && s >= u && (s - u) % 2 == 0) return true;
    }
    return false;
}

std::size_t loeschian_count_in(std::int64_t a, std::int64_t b) {
    if (a < 0 || b < a) throw std::invalid_argument("loeschian_count_in requires 0 <= a <= b");
    return LoeschianTable(b).count_in(a, b);
}

std::vector<LatticeVector> vectors_of_norm(std::int64_t n) {
    std::vector<LatticeVector> out;
    if (n < 0) return out;
    if (n == 0) return {{0, 0}};
    const std::int64_t reach = isqrt(4 * n / 3) + 1;
    for (std::int64_t u = -reach; u <= reach; ++u) {
        const std::int64_t disc = 4 * n - 3 * u * u;
        if (disc < 0) continue;
        const std::int64_t s = isqrt(disc);
        if (s * s != disc) continue;
        for (std::int64_t num : {-u + s, -u - s}) {
            if (num % 2 != 0) continue;
            LatticeVector w{u, num / 2};
            if (std::find(out.begin(), out.end(), w) == out.end()) out.push_back(w);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::int64_t previous_loeschian(std::int64_t n) {
    for (std::int64_t m = n - 1; m >= 0; --m)
        if (is_loeschian(m)) return m;
    return -1;
}

std::int64_t next_loeschian(std::int64_t n) {
    std::int64_t m = std::max<std::int64_t>(n + 1, 0);
    while (!is_loeschian(m)) ++m;
    return m;
}

std::int64_t loeschian_at_least(std::int64_t n) { return is_loeschian(n) && n >= 0 ? n : next_loeschian(n); }

}  // namespace cnp
