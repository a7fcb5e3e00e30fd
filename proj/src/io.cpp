#include "cnp/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace cnp {

using nlohmann::json;

namespace {

json point(Point p) { return json::array({p.x, p.y}); }

Point point_from(const json& j) {
    if (!j.is_array() || j.size() != 2) throw std::invalid_argument("expected a point [x, y], got " + j.dump());
    return {j[0].get<double>(), j[1].get<double>()};
}

json polygon_fields(const Polygon& p) {
    json vertices = json::array();
    for (const Point& v : p.vertices()) vertices.push_back(point(v));
    json arcs = json::array();
    for (const ArcEdge& a : p.arcs()) arcs.push_back({{"after_vertex", a.after_vertex}, {"radius", a.radius}, {"ccw", a.ccw}});
    return {{"vertices", vertices}, {"arcs", arcs}};
}

Polygon polygon_from(const json& j) {
    std::vector<Point> vertices;
    for (const json& v : j.at("vertices")) vertices.push_back(point_from(v));
    std::vector<ArcEdge> arcs;
    if (j.contains("arcs"))
        for (const json& a : j.at("arcs"))
            arcs.push_back({a.at("after_vertex").get<std::size_t>(), a.at("radius").get<double>(), a.value("ccw", true)});
    return Polygon(std::move(vertices), std::move(arcs));
}

void check_version(const json& j) {
    if (j.contains("schema_version") && j.at("schema_version").get<int>() != kSchemaVersion)
        throw std::invalid_argument("unsupported schema_version " + j.at("schema_version").dump());
}

}  // namespace

json graph_to_json(const ColoringInstance& g) {
    json j;
    j["schema_version"] = kSchemaVersion;
    j["kind"] = to_string(g.kind);
    if (g.egraph) j["spec"] = {{"m", g.egraph->m}, {"a", g.egraph->a}, {"b", g.egraph->b}};
    if (g.wgraph)
        j["spec"] = {{"p", g.wgraph->p}, {"c", g.wgraph->c}, {"d", g.wgraph->d}, {"radii", g.wgraph->radii},
                     {"offsets", g.wgraph->offsets}};
    json window{{"lo", g.window.lo}, {"hi", g.window.hi}};
    if (g.window.lo_squared) window["lo_squared"] = *g.window.lo_squared;
    if (g.window.hi_squared) window["hi_squared"] = *g.window.hi_squared;
    j["window"] = window;

    json vertices = json::array();
    const bool lattice = g.kind == GraphKind::egraph;
    for (std::size_t i = 0; i < g.vertex_count(); ++i) {
        if (lattice && i < g.lattice.size()) vertices.push_back({g.lattice[i].u, g.lattice[i].v});
        else vertices.push_back(point(g.positions[i]));
    }
    j["vertices"] = vertices;
    j["multiplicity"] = g.multiplicity;
    json edges = json::array();
    for (auto [a, b] : g.edges) edges.push_back({a, b});
    j["edges"] = edges;
    j["precolored"] = g.precolored;
    j["tri_vertex"] = g.tri_vertex ? json(*g.tri_vertex) : json(nullptr);
    j["bi_vertex"] = g.bi_vertex ? json(*g.bi_vertex) : json(nullptr);
    return j;
}

ColoringInstance graph_from_json(const json& j) {
    check_version(j);
    ColoringInstance g;
    g.kind = graph_kind_from_string(j.at("kind").get<std::string>());
    const json& vertices = j.at("vertices");
    if (g.kind == GraphKind::egraph) {
        const json& s = j.at("spec");
        g.egraph = EGraphSpec{s.at("m").get<int>(), s.at("a").get<std::int64_t>(), s.at("b").get<std::int64_t>()};
        g.window = {std::sqrt(static_cast<double>(g.egraph->a)), std::sqrt(static_cast<double>(g.egraph->b)), g.egraph->a,
                    g.egraph->b};
        for (const json& v : vertices) {
            const LatticeVector w{v.at(0).get<std::int64_t>(), v.at(1).get<std::int64_t>()};
            g.lattice.push_back(w);
            g.positions.push_back(to_cartesian(w, 1.0));
        }
    } else {
        if (g.kind == GraphKind::wgraph) {
            const json& s = j.at("spec");
            WGraphSpec w;
            w.p = s.at("p").get<int>();
            w.c = s.at("c").get<int>();
            w.d = s.at("d").get<double>();
            w.radii = s.value("radii", std::vector<double>{});
            w.offsets = s.value("offsets", std::vector<double>{});
            g.wgraph = w;
            g.window = {1.0, w.d, std::nullopt, std::nullopt};
        } else {
            const json& win = j.at("window");
            g.window = {win.at("lo").get<double>(), win.at("hi").get<double>(), std::nullopt, std::nullopt};
        }
        for (const json& v : vertices) g.positions.push_back(point_from(v));
    }
    const std::size_t n = g.positions.size();
    g.multiplicity = j.contains("multiplicity") ? j.at("multiplicity").get<std::vector<int>>() : std::vector<int>(n, 1);
    if (g.multiplicity.size() != n) throw std::invalid_argument("multiplicity has the wrong length");
    for (int m : g.multiplicity)
        if (m < 1) throw std::invalid_argument("multiplicities must be positive");
    for (const json& e : j.at("edges")) {
        int a = e.at(0).get<int>(), b = e.at(1).get<int>();
        if (a > b) std::swap(a, b);
        if (a < 0 || static_cast<std::size_t>(b) >= n || a == b)
            throw std::invalid_argument("edge " + e.dump() + " is out of range");
        if (g.kind != GraphKind::custom && !in_window(g, a, b))
            throw std::invalid_argument("edge " + e.dump() + " is outside the distance window");
        g.edges.emplace_back(a, b);
    }
    std::sort(g.edges.begin(), g.edges.end());
    g.edges.erase(std::unique(g.edges.begin(), g.edges.end()), g.edges.end());
    if (j.contains("precolored")) g.precolored = j.at("precolored").get<std::vector<int>>();
    const int expanded = static_cast<int>(g.expanded_count());
    for (int v : g.precolored)
        if (v < 0 || v >= expanded) throw std::invalid_argument("precoloured vertex " + std::to_string(v) + " is out of range");
    if (j.contains("tri_vertex") && !j.at("tri_vertex").is_null()) g.tri_vertex = j.at("tri_vertex").get<int>();
    if (j.contains("bi_vertex") && !j.at("bi_vertex").is_null()) g.bi_vertex = j.at("bi_vertex").get<int>();
    return g;
}

json tiling_to_json(const TilingSpec& spec) {
    json region;
    if (const auto* p = std::get_if<PeriodicRegion>(&spec.region))
        region = {{"type", "periodic"}, {"period", {point(p->period1), point(p->period2)}}};
    else {
        const auto& a = std::get<AnnulusRegion>(spec.region);
        region = {{"type", "annulus"}, {"inner", a.inner}, {"outer", a.outer}};
    }
    json tiles = json::array();
    for (const ColoredTile& t : spec.tiles) {
        json tile = polygon_fields(t.shape);
        tile["color"] = t.color;
        tiles.push_back(tile);
    }
    return {{"schema_version", kSchemaVersion}, {"region", region}, {"k", spec.k}, {"tiles", tiles}};
}

TilingSpec tiling_from_json(const json& j) {
    check_version(j);
    TilingSpec spec;
    const json& region = j.at("region");
    const std::string type = region.at("type").get<std::string>();
    if (type == "periodic") {
        const json& period = region.at("period");
        if (!period.is_array() || period.size() != 2) throw std::invalid_argument("periodic region needs two period vectors");
        spec.region = PeriodicRegion{point_from(period[0]), point_from(period[1])};
    } else if (type == "annulus") {
        spec.region = AnnulusRegion{region.value("inner", 1.0), region.at("outer").get<double>()};
    } else {
        throw std::invalid_argument("unknown region type '" + type + "'");
    }
    spec.k = j.at("k").get<int>();
    for (const json& t : j.at("tiles")) spec.tiles.push_back({polygon_from(t), t.at("color").get<int>()});
    return spec;
}

json report_to_json(const TilingReport& r) {
    auto pair = [](const TilePair& p) {
        return json{{"i", p.i}, {"j", p.j}, {"offset", point(p.offset)}, {"gap", p.gap}};
    };
    json touching = json::array();
    for (const TilePair& p : r.touching) touching.push_back(pair(p));
    json j{{"schema_version", kSchemaVersion},
           {"max_width", r.max_width},
           {"min_same_color_gap", std::isfinite(r.min_same_color_gap) ? json(r.min_same_color_gap) : json(nullptr)},
           {"touching", touching},
           {"oversized", r.oversized},
           {"tolerance", r.tolerance},
           {"proper", r.proper()}};
    j["closest"] = r.closest ? pair(*r.closest) : json(nullptr);
    return j;
}

json sublattice_to_json(const SublatticeColoring& c) {
    json tile = polygon_fields(c.tile);
    return {{"schema_version", kSchemaVersion},
            {"k", c.k},
            {"d", c.d},
            {"tile", tile},
            {"tile_lattice", {point(c.t1), point(c.t2)}},
            {"hnf", {{"a", c.hnf[0]}, {"c", c.hnf[1]}, {"b", c.hnf[2]}}},
            {"color_sublattice", {point(c.s1()), point(c.s2())}}};
}

json radial_to_json(const RadialColoring& c) {
    return {{"schema_version", kSchemaVersion}, {"k", c.k},           {"n", c.n},
            {"d", c.d},                         {"feasible", c.feasible}, {"angles", c.angles},
            {"colors", c.colors}};
}

json packing_to_json(const PackingResult& p) {
    json points = json::array();
    for (const Point& x : p.points) points.push_back(point(x));
    return {{"schema_version", kSchemaVersion}, {"q", p.q},         {"width", p.width}, {"min_dist", p.min_dist},
            {"points", points},                 {"seed", p.seed}, {"restarts", p.restarts}};
}

PackingResult packing_from_json(const json& j) {
    check_version(j);
    PackingResult p;
    for (const json& x : j.at("points")) p.points.push_back(point_from(x));
    p.q = j.value("q", static_cast<int>(p.points.size()));
    if (static_cast<std::size_t>(p.q) != p.points.size()) throw std::invalid_argument("q does not match the point count");
    const PackingMeasure m = verify_packing(p.points);
    p.width = m.width;
    p.min_dist = m.min_dist;
    p.seed = j.value("seed", std::uint64_t{0});
    p.restarts = j.value("restarts", 0);
    return p;
}

json outcome_to_json(const SolveOutcome& o, bool with_model) {
    json j{{"schema_version", kSchemaVersion}, {"status", to_string(o.status)}, {"solver", o.solver}};
    j["wall_time"] = o.wall_time.count();
    if (with_model) j["model"] = o.colors ? json(*o.colors) : json(nullptr);
    return j;
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << text;
}

}  // namespace cnp
