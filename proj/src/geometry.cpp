#include "cnp/geometry.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace cnp {

namespace {

double wrap_angle(double a) {
    a = std::fmod(a, kTwoPi);
    if (a < 0.0) a += kTwoPi;
    return a;
}

double angle_of(Point p) { return wrap_angle(std::atan2(p.y, p.x)); }

bool finite(Point p) { return std::isfinite(p.x) && std::isfinite(p.y); }

// Intersection parameters of the segment a + t(b-a), t in [0,1], with the
// circle |x| = r.
std::vector<double> segment_circle_params(const Segment& s, double r) {
    const Point d = s.b - s.a;
    const double qa = dot(d, d);
    const double qb = 2.0 * dot(s.a, d);
    const double qc = dot(s.a, s.a) - r * r;
    std::vector<double> out;
    if (qa <= 0.0) return out;
    const double disc = qb * qb - 4.0 * qa * qc;
    if (disc < 0.0) return out;
    const double root = std::sqrt(disc);
    for (double t : {(-qb - root) / (2.0 * qa), (-qb + root) / (2.0 * qa)})
        if (t >= -kGeomTol && t <= 1.0 + kGeomTol) out.push_back(std::clamp(t, 0.0, 1.0));
    return out;
}

bool proper_crossing(const Segment& s, const Segment& t) {
    const double d1 = cross(s.b - s.a, t.a - s.a);
    const double d2 = cross(s.b - s.a, t.b - s.a);
    const double d3 = cross(t.b - t.a, s.a - t.a);
    const double d4 = cross(t.b - t.a, s.b - t.a);
    const double eps = 1e-12;
    return ((d1 > eps && d2 < -eps) || (d1 < -eps && d2 > eps)) &&
           ((d3 > eps && d4 < -eps) || (d3 < -eps && d4 > eps));
}

double boundary_distance(Point p, const Polygon& poly) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t e = 0; e < poly.edge_count(); ++e) {
        const double d = poly.is_arc(e) ? point_arc_distance(p, poly.arc(e)) : point_segment_distance(p, poly.segment(e));
        best = std::min(best, d);
    }
    return best;
}

// Points just inside the region, one per edge, offset from each edge midpoint.
std::vector<Point> interior_probes(const Polygon& poly) {
    std::vector<Point> probes;
    const double sign = poly.signed_area() >= 0.0 ? 1.0 : -1.0;
    const auto& v = poly.vertices();
    double scale = 0.0;
    for (const Point& p : v) scale = std::max(scale, norm(p - v.front()));
    const double delta = 1e-5 * std::max(scale, 1e-3);
    for (std::size_t e = 0; e < poly.edge_count(); ++e) {
        Point mid;
        Point tangent;
        if (poly.is_arc(e)) {
            const Arc a = poly.arc(e);
            const double th = a.start + 0.5 * a.sweep;
            mid = a.point_at(th);
            tangent = {-std::sin(th), std::cos(th)};
            const bool forward = poly.arcs().end() != std::find_if(poly.arcs().begin(), poly.arcs().end(),
                                                                    [&](const ArcEdge& ae) { return ae.after_vertex == e && ae.ccw; });
            if (!forward) tangent = -1.0 * tangent;
        } else {
            const Segment s = poly.segment(e);
            mid = 0.5 * (s.a + s.b);
            tangent = s.b - s.a;
            const double len = norm(tangent);
            if (len <= 0.0) continue;
            tangent = (1.0 / len) * tangent;
        }
        const Point inward{-tangent.y * sign, tangent.x * sign};
        probes.push_back(mid + delta * inward);
    }
    return probes;
}

bool strictly_inside(Point p, const Polygon& poly) {
    return poly.contains(p) && boundary_distance(p, poly) > 1e-7;
}

}  // namespace

Point rotate(Point p, double angle) {
    const double c = std::cos(angle);
    const double s = std::sin(angle);
    return {c * p.x - s * p.y, s * p.x + c * p.y};
}

bool Arc::spans(double angle) const {
    const double diff = wrap_angle(angle - start);
    const double tol = 1e-12 + kGeomTol / std::max(radius, 1e-9);
    return diff <= sweep + tol || diff >= kTwoPi - tol;
}

Polygon::Polygon(std::vector<Point> vertices, std::vector<ArcEdge> arcs)
    : vertices_(std::move(vertices)), arcs_(std::move(arcs)) {
    if (vertices_.size() < 3) throw std::invalid_argument("polygon needs at least 3 vertices");
    for (const Point& p : vertices_)
        if (!finite(p)) throw std::invalid_argument("polygon vertex is not finite");
    std::sort(arcs_.begin(), arcs_.end(), [](const ArcEdge& a, const ArcEdge& b) { return a.after_vertex < b.after_vertex; });
    for (std::size_t i = 0; i < arcs_.size(); ++i) {
        const ArcEdge& ae = arcs_[i];
        if (ae.after_vertex >= vertices_.size()) throw std::invalid_argument("arc edge index out of range");
        if (i > 0 && arcs_[i - 1].after_vertex == ae.after_vertex) throw std::invalid_argument("duplicate arc edge");
        if (!(ae.radius > 0.0)) throw std::invalid_argument("arc radius must be positive");
        const Point a = vertices_[ae.after_vertex];
        const Point b = vertices_[(ae.after_vertex + 1) % vertices_.size()];
        const double tol = 1e-6 * std::max(1.0, ae.radius);
        if (std::abs(norm(a) - ae.radius) > tol || std::abs(norm(b) - ae.radius) > tol)
            throw std::invalid_argument("arc endpoints must lie on the circle of radius " + std::to_string(ae.radius));
        if (distance(a, b) <= kGeomTol) throw std::invalid_argument("arc edge endpoints coincide");
    }
}

bool Polygon::is_arc(std::size_t edge) const {
    return std::any_of(arcs_.begin(), arcs_.end(), [edge](const ArcEdge& a) { return a.after_vertex == edge; });
}

Arc Polygon::arc(std::size_t edge) const {
    auto it = std::find_if(arcs_.begin(), arcs_.end(), [edge](const ArcEdge& a) { return a.after_vertex == edge; });
    if (it == arcs_.end()) throw std::logic_error("edge " + std::to_string(edge) + " is not an arc");
    const Point a = vertices_[edge];
    const Point b = vertices_[(edge + 1) % vertices_.size()];
    const double ta = angle_of(a);
    const double tb = angle_of(b);
    if (it->ccw) return {it->radius, ta, wrap_angle(tb - ta)};
    return {it->radius, tb, wrap_angle(ta - tb)};
}

Segment Polygon::segment(std::size_t edge) const {
    return {vertices_[edge], vertices_[(edge + 1) % vertices_.size()]};
}

double Polygon::signed_area() const {
    double twice = 0.0;
    for (std::size_t e = 0; e < edge_count(); ++e) {
        if (is_arc(e)) {
            const Arc a = arc(e);
            const bool ccw = std::find_if(arcs_.begin(), arcs_.end(), [e](const ArcEdge& ae) { return ae.after_vertex == e; })->ccw;
            twice += (ccw ? 1.0 : -1.0) * a.radius * a.radius * a.sweep;
        } else {
            const Segment s = segment(e);
            twice += cross(s.a, s.b);
        }
    }
    return 0.5 * twice;
}

Polygon Polygon::translated(Point offset) const {
    if (!arcs_.empty()) throw std::logic_error("polygons with origin-centred arcs cannot be translated");
    std::vector<Point> moved = vertices_;
    for (Point& p : moved) p = p + offset;
    return Polygon(std::move(moved));
}

Polygon Polygon::rotated(double angle) const {
    std::vector<Point> moved = vertices_;
    for (Point& p : moved) p = rotate(p, angle);
    return Polygon(std::move(moved), arcs_);
}

Polygon Polygon::scaled(double factor) const {
    if (!(factor > 0.0)) throw std::invalid_argument("scale factor must be positive");
    std::vector<Point> moved = vertices_;
    for (Point& p : moved) p = factor * p;
    std::vector<ArcEdge> arcs = arcs_;
    for (ArcEdge& a : arcs) a.radius *= factor;
    return Polygon(std::move(moved), std::move(arcs));
}

std::vector<Point> Polygon::flattened(double max_step) const {
    std::vector<Point> out;
    for (std::size_t e = 0; e < edge_count(); ++e) {
        out.push_back(vertices_[e]);
        if (!is_arc(e)) continue;
        const Arc a = arc(e);
        const bool ccw = std::find_if(arcs_.begin(), arcs_.end(), [e](const ArcEdge& ae) { return ae.after_vertex == e; })->ccw;
        const auto pieces = static_cast<std::size_t>(std::ceil(a.radius * a.sweep / max_step));
        for (std::size_t i = 1; i < pieces; ++i) {
            const double f = static_cast<double>(i) / static_cast<double>(pieces);
            out.push_back(a.point_at(ccw ? a.start + f * a.sweep : a.start + (1.0 - f) * a.sweep));
        }
    }
    return out;
}

bool Polygon::contains(Point p) const {
    const std::vector<Point> ring = arcs_.empty() ? vertices_ : flattened(0.002);
    bool inside = false;
    for (std::size_t i = 0, j = ring.size() - 1; i < ring.size(); j = i++) {
        const Point a = ring[i];
        const Point b = ring[j];
        if ((a.y > p.y) != (b.y > p.y)) {
            const double x = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
            if (p.x < x) inside = !inside;
        }
    }
    return inside;
}

Point Polygon::centroid_hint() const {
    Point c;
    for (const Point& p : vertices_) c = c + p;
    return (1.0 / static_cast<double>(vertices_.size())) * c;
}

Polygon regular_polygon(std::size_t sides, double circumradius, double phase, Point centre) {
    std::vector<Point> v;
    for (std::size_t j = 0; j < sides; ++j) {
        const double th = phase + kTwoPi * static_cast<double>(j) / static_cast<double>(sides);
        v.push_back(centre + Point{circumradius * std::cos(th), circumradius * std::sin(th)});
    }
    return Polygon(std::move(v));
}

Polygon annular_sector(double inner, double outer, double from, double sweep) {
    if (!(inner > 0.0 && outer > inner)) throw std::invalid_argument("annular sector needs 0 < inner < outer");
    if (!(sweep > 0.0 && sweep < kTwoPi)) throw std::invalid_argument("annular sector sweep must be in (0, 2pi)");
    const double to = from + sweep;
    std::vector<Point> v{{inner * std::cos(from), inner * std::sin(from)},
                         {outer * std::cos(from), outer * std::sin(from)},
                         {outer * std::cos(to), outer * std::sin(to)},
                         {inner * std::cos(to), inner * std::sin(to)}};
    return Polygon(std::move(v), {{1, outer, true}, {3, inner, false}});
}

double point_segment_distance(Point p, const Segment& s) {
    const Point d = s.b - s.a;
    const double len2 = dot(d, d);
    if (len2 <= 0.0) return distance(p, s.a);
    const double t = std::clamp(dot(p - s.a, d) / len2, 0.0, 1.0);
    return distance(p, s.a + t * d);
}

double segment_segment_distance(const Segment& s, const Segment& t) {
    if (proper_crossing(s, t)) return 0.0;
    return std::min({point_segment_distance(s.a, t), point_segment_distance(s.b, t), point_segment_distance(t.a, s),
                     point_segment_distance(t.b, s)});
}

double point_arc_distance(Point p, const Arc& a) {
    const double r = norm(p);
    if (r <= kGeomTol) return a.radius;
    if (a.spans(std::atan2(p.y, p.x))) return std::abs(r - a.radius);
    return std::min(distance(p, a.first()), distance(p, a.last()));
}

double segment_arc_distance(const Segment& s, const Arc& a) {
    double best = std::min({point_arc_distance(s.a, a), point_arc_distance(s.b, a), point_segment_distance(a.first(), s),
                            point_segment_distance(a.last(), s)});
    const Point d = s.b - s.a;
    for (double t : segment_circle_params(s, a.radius)) {
        const Point x = s.a + t * d;
        if (a.spans(std::atan2(x.y, x.x))) return 0.0;
    }
    const double len2 = dot(d, d);
    if (len2 > 0.0) {
        const double t = -dot(s.a, d) / len2;
        if (t > 0.0 && t < 1.0) {
            const Point foot = s.a + t * d;
            if (norm(foot) > kGeomTol && a.spans(std::atan2(foot.y, foot.x)))
                best = std::min(best, std::abs(norm(foot) - a.radius));
        }
    }
    return best;
}

double arc_arc_distance(const Arc& a, const Arc& b) {
    if (a.spans(b.start) || b.spans(a.start)) return std::abs(a.radius - b.radius);
    return std::min({point_arc_distance(a.first(), b), point_arc_distance(a.last(), b), point_arc_distance(b.first(), a),
                     point_arc_distance(b.last(), a)});
}

double point_arc_farthest(Point p, const Arc& a) {
    const double r = norm(p);
    if (r <= kGeomTol) return a.radius;
    if (a.spans(std::atan2(-p.y, -p.x))) return r + a.radius;
    return std::max(distance(p, a.first()), distance(p, a.last()));
}

double arc_arc_farthest(const Arc& a, const Arc& b) {
    const Arc flipped{b.radius, b.start + kPi, b.sweep};
    if (a.spans(flipped.start) || flipped.spans(a.start)) return a.radius + b.radius;
    return std::max({point_arc_farthest(a.first(), b), point_arc_farthest(a.last(), b), point_arc_farthest(b.first(), a),
                     point_arc_farthest(b.last(), a)});
}

double diameter(const Polygon& p) {
    if (p.area() <= kGeomTol * kGeomTol) throw std::domain_error("degenerate polygon (zero area)");
    const auto& v = p.vertices();
    double best = 0.0;
    for (std::size_t i = 0; i < v.size(); ++i)
        for (std::size_t j = i + 1; j < v.size(); ++j) best = std::max(best, distance(v[i], v[j]));
    std::vector<Arc> arcs;
    for (std::size_t e = 0; e < p.edge_count(); ++e)
        if (p.is_arc(e)) arcs.push_back(p.arc(e));
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        for (const Point& q : v) best = std::max(best, point_arc_farthest(q, arcs[i]));
        for (std::size_t j = i; j < arcs.size(); ++j) best = std::max(best, arc_arc_farthest(arcs[i], arcs[j]));
    }
    return best;
}

bool interiors_overlap(const Polygon& p, const Polygon& q) {
    const std::vector<Point> fp = p.arcs().empty() ? p.vertices() : p.flattened(0.002);
    const std::vector<Point> fq = q.arcs().empty() ? q.vertices() : q.flattened(0.002);
    for (std::size_t i = 0; i < fp.size(); ++i) {
        const Segment s{fp[i], fp[(i + 1) % fp.size()]};
        for (std::size_t j = 0; j < fq.size(); ++j)
            if (proper_crossing(s, {fq[j], fq[(j + 1) % fq.size()]})) return true;
    }
    for (const Point& x : p.vertices())
        if (strictly_inside(x, q)) return true;
    for (const Point& x : q.vertices())
        if (strictly_inside(x, p)) return true;
    for (const Point& x : interior_probes(p))
        if (strictly_inside(x, q)) return true;
    for (const Point& x : interior_probes(q))
        if (strictly_inside(x, p)) return true;
    return false;
}

double min_distance(const Polygon& p, const Polygon& q) {
    if (interiors_overlap(p, q)) throw std::domain_error("polygons overlap");
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < p.edge_count(); ++i) {
        for (std::size_t j = 0; j < q.edge_count(); ++j) {
            double d;
            if (p.is_arc(i) && q.is_arc(j)) d = arc_arc_distance(p.arc(i), q.arc(j));
            else if (p.is_arc(i)) d = segment_arc_distance(q.segment(j), p.arc(i));
            else if (q.is_arc(j)) d = segment_arc_distance(p.segment(i), q.arc(j));
            else d = segment_segment_distance(p.segment(i), q.segment(j));
            best = std::min(best, d);
            if (best <= 0.0) return 0.0;
        }
    }
    return best;
}

double point_convex_distance(Point p, std::span<const Point> poly) {
    bool inside = true;
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point a = poly[i];
        const Point b = poly[(i + 1) % poly.size()];
        if (cross(b - a, p - a) < 0.0) inside = false;
        best = std::min(best, point_segment_distance(p, {a, b}));
    }
    return inside ? 0.0 : best;
}

std::pair<Point, Point> reduce_basis(Point b1, Point b2) {
    if (std::abs(cross(b1, b2)) <= kGeomTol * kGeomTol) throw std::invalid_argument("degenerate lattice basis");
    for (int guard = 0; guard < 1000; ++guard) {
        if (dot(b1, b1) > dot(b2, b2)) std::swap(b1, b2);
        const double mu = std::round(dot(b1, b2) / dot(b1, b1));
        if (mu == 0.0) break;
        b2 = b2 - mu * b1;
    }
    return {b1, b2};
}

}  // namespace cnp
