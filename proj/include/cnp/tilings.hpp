#pragma once

// Colourings of the plane and of the annulus 1 <= r <= d by tiles of width at
// most 1. The quality of a colouring is d, the smallest gap between two tiles
// of the same colour.

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "cnp/geometry.hpp"
#include "cnp/lattice.hpp"

namespace cnp {

struct PeriodicRegion {
    Point period1;
    Point period2;
};

struct AnnulusRegion {
    double inner = 1.0;
    double outer = 1.0;
};

struct ColoredTile {
    Polygon shape;
    int color = 0;
};

struct TilingSpec {
    std::variant<PeriodicRegion, AnnulusRegion> region;
    int k = 0;
    std::vector<ColoredTile> tiles;

    bool periodic() const { return std::holds_alternative<PeriodicRegion>(region); }
    TilingSpec scaled(double factor) const;
};

/// Tile j shifted by `offset` against tile i.
struct TilePair {
    int i = -1;
    int j = -1;
    Point offset;
    double gap = 0.0;
};

struct TilingReport {
    double max_width = 0.0;
    double min_same_color_gap = 0.0;  // +inf when no colour repeats
    std::optional<TilePair> closest;
    std::vector<TilePair> touching;  // same-colour pairs with gap <= tolerance
    std::vector<int> oversized;      // tiles wider than 1 + tolerance
    double tolerance = kGeomTol;

    bool proper() const { return touching.empty() && oversized.empty(); }
};

/// Raised when tiles overlap, fail to cover the region, or leave it.
class TilingError : public std::runtime_error {
public:
    TilingError(const std::string& what, std::vector<int> tiles)
        : std::runtime_error(what), tiles_(std::move(tiles)) {}
    const std::vector<int>& tiles() const { return tiles_; }

private:
    std::vector<int> tiles_;
};

/// Periodic regions are searched over translates within `shell` periods of
/// the reduced period basis.
TilingReport verify_tiling(const TilingSpec& spec, int shell = 2);

/// One tile shape translated over a lattice; colours are the cosets of the
/// sublattice spanned by a*t1 and c*t1 + b*t2 (Hermite normal form, ab = k).
struct SublatticeColoring {
    int k = 1;
    Polygon tile;
    Point t1;
    Point t2;
    std::array<std::int64_t, 3> hnf{1, 0, 1};  // a, c, b
    double d = 0.0;

    Point s1() const;
    Point s2() const;
    TilingSpec to_spec() const;
};

/// All index-k sublattices of Z^2 as (a, c, b) with ab = k and 0 <= c < a.
std::vector<std::array<std::int64_t, 3>> sublattices_of_index(std::int64_t k);

/// Hermite normal form (a, c, b) of the sublattice spanned by two integer vectors.
std::array<std::int64_t, 3> hermite_normal_form(LatticeVector g1, LatticeVector g2);

/// Regular hexagons of side 1/2 on the lattice of step sqrt(3)/2, coloured by
/// the best hexagonal sublattice of norm k. Throws std::invalid_argument
/// unless k is a positive Loeschian number.
SublatticeColoring regular_sublattice_coloring(std::int64_t k);
double regular_sublattice_distance(std::int64_t k);

/// Best gap over centrally symmetric hexagon tiles and all index-k
/// sublattices. Each restart draws a random hexagon for every sublattice and
/// refines it; restarts run in parallel. For Loeschian k the regular colouring
/// is a candidate, so the result never falls below it.
SublatticeColoring general_sublattice_coloring(std::int64_t k, int restarts, std::uint64_t seed);

/// Gap/diameter ratio of the hexagon V0, V1, V2, -V0, -V1, -V2 under the
/// given sublattice; -1 for non-convex or clockwise hexagons.
double hexagon_objective(std::span<const double> v, const std::array<std::int64_t, 3>& hnf);

enum class TilingClass { l_plus, l_minus, lbar_plus, lbar_minus };
std::string to_string(TilingClass c);

struct Classification {
    TilingClass primary;
    std::optional<TilingClass> secondary;  // set when both tiling variants set a record
};

/// `best[j-1]` is the best distance for j colours, j = 1..k. `regular` is the
/// regular-hexagon distance when k is Loeschian. A record needs d > 0 and a
/// strict increase over every smaller k.
Classification classify_k(std::int64_t k, std::span<const double> best, std::optional<double> regular);

struct RadialColoring {
    int k = 0;
    int n = 0;
    std::vector<double> angles;  // sector sweeps, summing to 2*pi
    std::vector<int> colors;
    double d = 0.0;
    bool feasible = false;  // d >= 1, i.e. the annulus is non-empty

    TilingSpec to_spec(double phase = 0.0) const;
};

/// Diameter of the annular sector 1 <= r <= d of angle theta.
double sector_width(double theta, double d);
/// Largest d for which the sector of angle theta keeps width <= 1.
double sector_width_cap(double theta);
/// d attained by the given sector angles with colours i mod k.
double radial_distance(std::span<const double> angles, int k);

/// Best d over n = k, 2k, ... <= n_max sectors, starting from equal angles
/// and refined by pairwise angle transfers. Throws for k < 2 or n_max < k.
RadialColoring radial_optimum(int k, int n_max);

}  // namespace cnp
