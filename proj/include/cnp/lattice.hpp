#pragma once

// Hexagonal (Eisenstein) lattice arithmetic.
//
// A LatticeVector (u, v) denotes u*e1 + v*e2 with e1 = (1, 0) and
// e2 = (1/2, sqrt(3)/2). Its squared length is the Loeschian norm
// u^2 + uv + v^2, always a non-negative integer.

#include <compare>
#include <cstdint>
#include <vector>

namespace cnp {

struct Point;

struct LatticeVector {
    std::int64_t u = 0;
    std::int64_t v = 0;

    friend constexpr LatticeVector operator+(LatticeVector a, LatticeVector b) { return {a.u + b.u, a.v + b.v}; }
    friend constexpr LatticeVector operator-(LatticeVector a, LatticeVector b) { return {a.u - b.u, a.v - b.v}; }
    friend constexpr LatticeVector operator-(LatticeVector a) { return {-a.u, -a.v}; }
    friend constexpr auto operator<=>(const LatticeVector&, const LatticeVector&) = default;
};

/// Largest |u| or |v| accepted anywhere; keeps every norm well inside int64.
inline constexpr std::int64_t kMaxLatticeCoordinate = std::int64_t{1} << 30;

/// u^2 + uv + v^2. Throws std::overflow_error for coordinates beyond
/// kMaxLatticeCoordinate rather than wrapping.
std::int64_t loeschian_norm(LatticeVector w);

/// Rotation by +60 degrees.
constexpr LatticeVector rotate60(LatticeVector w) { return {-w.v, w.u + w.v}; }

/// Mirror across the e1 axis.
constexpr LatticeVector reflect(LatticeVector w) { return {w.u + w.v, -w.v}; }

/// Hexagonal ("ring") distance from the origin: max(|u|, |v|, |u+v|).
std::int64_t hex_ring(LatticeVector w);

Point to_cartesian(LatticeVector w, double step);

class LoeschianTable {
public:
    explicit LoeschianTable(std::int64_t limit);

    std::int64_t limit() const { return limit_; }
    const std::vector<std::int64_t>& members() const { return members_; }
    bool contains(std::int64_t n) const;
    std::size_t count() const { return members_.size(); }
    /// Members in [a, b], both inclusive and clamped to the table limit.
    std::size_t count_in(std::int64_t a, std::int64_t b) const;

private:
    std::int64_t limit_;
    std::vector<std::int64_t> members_;
};

LoeschianTable loeschian_upto(std::int64_t limit);

bool is_loeschian(std::int64_t n);

std::size_t loeschian_count_in(std::int64_t a, std::int64_t b);

/// All lattice vectors of the given norm (every sign and orientation).
std::vector<LatticeVector> vectors_of_norm(std::int64_t norm);

/// Largest member of L strictly below n, or -1 if none.
std::int64_t previous_loeschian(std::int64_t n);
/// Smallest member of L strictly above n.
std::int64_t next_loeschian(std::int64_t n);
/// Smallest member of L that is >= n.
std::int64_t loeschian_at_least(std::int64_t n);

}  // namespace cnp
