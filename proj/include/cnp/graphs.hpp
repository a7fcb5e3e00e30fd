#pragma once

// Finite graphs whose colorability bounds the chromatic number of the plane
// with forbidden distances [1, d]:
//
//   e-graph  vertices of the hexagonal lattice inside a hexagon of radius m,
//            edges at squared lattice distance in [a, b] (ratio d = sqrt(b/a)).
//   w-graph  c concentric circles of p evenly spaced vertices in the annulus
//            1 <= r <= d, edges at Euclidean distance in [1, d].
//
// Poly-chromatic vertices are modelled by multiplicity: a vertex with
// multiplicity t expands to t coincident, pairwise adjacent copies that share
// the neighbourhood of their position.

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "cnp/geometry.hpp"
#include "cnp/lattice.hpp"

namespace cnp {

struct Budget {
    std::chrono::milliseconds time{std::chrono::minutes(10)};
    std::uint64_t node_limit = 0;  // 0 = unlimited
};

enum class GraphKind { egraph, wgraph, custom };

std::string to_string(GraphKind kind);
GraphKind graph_kind_from_string(const std::string& s);

struct EGraphSpec {
    int m = 1;
    std::int64_t a = 1;
    std::int64_t b = 1;

    double ratio() const;
    friend bool operator==(const EGraphSpec&, const EGraphSpec&) = default;
};

struct WGraphSpec {
    int p = 3;
    int c = 1;
    double d = 1.0;
    std::vector<double> radii;    // empty = evenly spaced from 1 to d
    std::vector<double> offsets;  // empty = all zero
    friend bool operator==(const WGraphSpec&, const WGraphSpec&) = default;
};

/// c evenly spaced radii from 1 to d inclusive; a single circle gets radius 1.
std::vector<double> default_radii(int c, double d);

struct DistanceWindow {
    double lo = 1.0;
    double hi = 1.0;
    // Exact squared bounds for lattice instances.
    std::optional<std::int64_t> lo_squared;
    std::optional<std::int64_t> hi_squared;
};

struct ColoringInstance {
    GraphKind kind = GraphKind::custom;
    std::optional<EGraphSpec> egraph;
    std::optional<WGraphSpec> wgraph;

    std::vector<Point> positions;
    std::vector<LatticeVector> lattice;  // parallel to positions for e-graphs
    std::vector<int> multiplicity;
    std::vector<std::pair<int, int>> edges;  // base vertices, i < j, sorted
    DistanceWindow window;
    std::vector<int> precolored;  // expanded vertex indices

    std::optional<int> tri_vertex;
    std::optional<int> bi_vertex;

    std::size_t vertex_count() const { return positions.size(); }
    std::size_t expanded_count() const;
    /// First expanded index of every base vertex.
    std::vector<int> expanded_offsets() const;
    /// Expanded indices of all copies of multiplicity > 1 vertices.
    std::vector<int> poly_copies() const;
};

/// Lattice window test, exact for e-graphs and 1e-9 tolerant otherwise.
bool in_window(const ColoringInstance& g, int i, int j);

struct ExpandedGraph {
    int n = 0;
    std::vector<int> base_of;
    std::vector<std::pair<int, int>> edges;  // lexicographic, i < j
};

ExpandedGraph expand(const ColoringInstance& g);

/// Dense adjacency with bitset rows.
class BitGraph {
public:
    explicit BitGraph(int n = 0);
    explicit BitGraph(const ExpandedGraph& g);

    int size() const { return n_; }
    void add_edge(int i, int j);
    bool adjacent(int i, int j) const { return (rows_[row(i) + j / 64] >> (j % 64)) & 1u; }
    std::size_t words() const { return words_; }
    const std::uint64_t* row_bits(int i) const { return rows_.data() + row(i); }
    int degree(int i) const;

private:
    std::size_t row(int i) const { return static_cast<std::size_t>(i) * words_; }
    int n_;
    std::size_t words_;
    std::vector<std::uint64_t> rows_;
};

/// Vertex cap for e-graphs (3m^2+3m+1 vertices).
inline constexpr std::size_t kMaxGraphVertices = 20000;

/// Throws std::invalid_argument when a or b is not Loeschian, when the spec
/// is malformed, or when the ball exceeds kMaxGraphVertices.
ColoringInstance build_egraph(const EGraphSpec& spec);

/// Throws std::invalid_argument for a radius outside [1, d] or bad sizes.
ColoringInstance build_wgraph(const WGraphSpec& spec);

/// Distance from the tri-chromatic centre to the bi-chromatic vertex.
struct BiPlacement {
    std::optional<std::int64_t> s_squared;  // e-graphs
    std::optional<double> s;                // w-graphs / custom
    std::optional<double> angle;            // w-graphs / custom, radians; default pi/2
};

/// Representative lattice vector of the given norm, pointing "up": the
/// direction closest to +90 degrees, ties broken towards positive x.
LatticeVector upward_representative(std::int64_t norm);

/// Returns a copy of g with a multiplicity-3 vertex at the centre and/or a
/// multiplicity-2 vertex at distance s above it (at `angle` off the
/// lattice). A vertex already at that position is promoted; otherwise one is
/// appended with edges recomputed from the window. Throws std::invalid_argument if s lies outside the window.
ColoringInstance attach_polychromatic(const ColoringInstance& g, bool tri_at_center, std::optional<BiPlacement> bi);

struct CliqueResult {
    std::vector<int> vertices;  // expanded indices, ascending
    bool exact = true;          // false: budget ran out, vertices is a lower bound
};

/// Maximum clique of the expanded graph.
CliqueResult max_clique(const ColoringInstance& g, Budget budget = {});

/// Maximum clique of the subgraph induced by `candidates`.
CliqueResult max_clique(const BitGraph& g, const std::vector<int>& candidates, Budget budget = {});

/// Maximum clique among plain (multiplicity 1) vertices, reported as q.
CliqueResult base_clique(const ColoringInstance& g, Budget budget = {});

/// Fills g.precolored. With poly-chromatic vertices present the set is their
/// copies plus a maximum clique of their common neighbourhood; otherwise it is
/// a maximum clique of the graph. Returns the q of base_clique.
int assign_precoloring(ColoringInstance& g, Budget budget = {});

/// Candidate squared distances {s^2 in L : a <= s^2 <= b} of an e-graph.
std::vector<std::int64_t> bichromatic_candidates(const EGraphSpec& spec);

/// One instance per candidate placement, each with a tri-chromatic centre.
std::vector<std::pair<BiPlacement, ColoringInstance>> sweep_bichromatic(const ColoringInstance& base,
                                                                        const std::vector<BiPlacement>& candidates);

}  // namespace cnp
