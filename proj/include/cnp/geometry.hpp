#pragma once

// Planar primitives shared by the tiling verifier and the point packer.
//
// Polygons may carry arc edges: circular arcs centred at the origin. They
// appear only in annulus tilings, where tiles are bounded by the circles of
// radius 1 and d. All tests use a 1e-9 absolute tolerance.

#include <cmath>
#include <optional>
#include <span>
#include <vector>

namespace cnp {

inline constexpr double kGeomTol = 1e-9;
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Point {
    double x = 0.0;
    double y = 0.0;

    friend Point operator+(Point a, Point b) { return {a.x + b.x, a.y + b.y}; }
    friend Point operator-(Point a, Point b) { return {a.x - b.x, a.y - b.y}; }
    friend Point operator*(double s, Point a) { return {s * a.x, s * a.y}; }
    friend bool operator==(const Point&, const Point&) = default;
};

inline double dot(Point a, Point b) { return a.x * b.x + a.y * b.y; }
inline double cross(Point a, Point b) { return a.x * b.y - a.y * b.x; }
inline double norm(Point a) { return std::hypot(a.x, a.y); }
inline double distance(Point a, Point b) { return norm(a - b); }
Point rotate(Point p, double angle);

/// Origin-centred arc from angle `start` sweeping counterclockwise by `sweep`.
struct Arc {
    double radius = 1.0;
    double start = 0.0;
    double sweep = 0.0;

    Point point_at(double angle) const { return {radius * std::cos(angle), radius * std::sin(angle)}; }
    Point first() const { return point_at(start); }
    Point last() const { return point_at(start + sweep); }
    bool spans(double angle) const;
};

struct Segment {
    Point a;
    Point b;
};

/// Edge i of a polygon runs from vertex i to vertex i+1. An arc descriptor
/// turns it into an origin-centred arc; `ccw` gives the travel direction.
struct ArcEdge {
    std::size_t after_vertex = 0;
    double radius = 1.0;
    bool ccw = true;
};

class Polygon {
public:
    Polygon() = default;
    /// Throws std::invalid_argument for fewer than three vertices, non-finite
    /// coordinates, or arc endpoints that do not sit on their circle.
    explicit Polygon(std::vector<Point> vertices, std::vector<ArcEdge> arcs = {});

    const std::vector<Point>& vertices() const { return vertices_; }
    const std::vector<ArcEdge>& arcs() const { return arcs_; }
    std::size_t edge_count() const { return vertices_.size(); }
    bool is_arc(std::size_t edge) const;
    /// Arc geometry of an arc edge (undefined for straight edges).
    Arc arc(std::size_t edge) const;
    Segment segment(std::size_t edge) const;

    /// Signed area (positive for counterclockwise boundaries).
    double signed_area() const;
    double area() const { return std::abs(signed_area()); }

    Polygon translated(Point offset) const;
    /// Rigid motion; arc edges keep their meaning only for rotations about
    /// the origin, so translating a polygon with arcs throws.
    Polygon rotated(double angle) const;
    Polygon scaled(double factor) const;

    /// Boundary approximation with straight pieces no longer than `max_step`
    /// along each arc.
    std::vector<Point> flattened(double max_step = 0.01) const;
    bool contains(Point p) const;
    Point centroid_hint() const;

private:
    std::vector<Point> vertices_;
    std::vector<ArcEdge> arcs_;
};

Polygon regular_polygon(std::size_t sides, double circumradius, double phase = 0.0, Point centre = {});
/// Annular sector between radii `inner` and `outer`, from angle `from` ccw by `sweep`.
Polygon annular_sector(double inner, double outer, double from, double sweep);

double point_segment_distance(Point p, const Segment& s);
double segment_segment_distance(const Segment& s, const Segment& t);
double point_arc_distance(Point p, const Arc& a);
double segment_arc_distance(const Segment& s, const Arc& a);
double arc_arc_distance(const Arc& a, const Arc& b);

/// Largest distance from p to any point of the arc.
double point_arc_farthest(Point p, const Arc& a);
double arc_arc_farthest(const Arc& a, const Arc& b);

/// Largest distance between two points of the closed region. Throws
/// std::domain_error for polygons of zero area.
double diameter(const Polygon& p);

/// Smallest distance between the two closed regions; 0 when they touch.
/// Throws std::domain_error when the interiors overlap.
double min_distance(const Polygon& p, const Polygon& q);

/// True when the interiors intersect in a set of positive area.
bool interiors_overlap(const Polygon& p, const Polygon& q);

/// Distance from a point to a convex counterclockwise straight-edged
/// polygon (0 inside).
double point_convex_distance(Point p, std::span<const Point> convex_ccw);

/// Lagrange-Gauss reduction of a planar lattice basis.
std::pair<Point, Point> reduce_basis(Point b1, Point b2);

}  // namespace cnp
