#include "cnp/graphs.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>
#include <stdexcept>

namespace cnp {

namespace {

using Clock = std::chrono::steady_clock;

double angle_key(Point p) {
    double a = std::atan2(p.y, p.x);
    if (a < 0.0) a += kTwoPi;
    // Snap -0/2pi noise so the ring order starts at the +x axis.
    if (a > kTwoPi - 1e-12) a = 0.0;
    return a;
}

void sort_edges(std::vector<std::pair<int, int>>& edges) {
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
}

// Index of the vertex at a lattice position, -1 when absent.
int find_lattice(const ColoringInstance& g, LatticeVector w) {
    for (std::size_t i = 0; i < g.lattice.size(); ++i)
        if (g.lattice[i] == w) return static_cast<int>(i);
    return -1;
}

int find_point(const ColoringInstance& g, Point p) {
    for (std::size_t i = 0; i < g.positions.size(); ++i)
        if (distance(g.positions[i], p) <= kGeomTol) return static_cast<int>(i);
    return -1;
}

// Adds (or promotes) a vertex of multiplicity t at the given position and
// returns its index.
int place_poly(ColoringInstance& g, Point where, std::optional<LatticeVector> lattice_pos, int t) {
    int idx = lattice_pos ? find_lattice(g, *lattice_pos) : find_point(g, where);
    if (idx >= 0) {
        if (g.multiplicity[static_cast<std::size_t>(idx)] != 1)
            throw std::invalid_argument("a poly-chromatic vertex already sits at this position");
        g.multiplicity[static_cast<std::size_t>(idx)] = t;
        return idx;
    }
    idx = static_cast<int>(g.positions.size());
    g.positions.push_back(where);
    if (lattice_pos) g.lattice.push_back(*lattice_pos);
    g.multiplicity.push_back(t);
    for (int j = 0; j < idx; ++j)
        if (in_window(g, j, idx)) g.edges.emplace_back(j, idx);
    sort_edges(g.edges);
    return idx;
}

// Branch and bound maximum clique with greedy colouring bounds.
class CliqueSearch {
public:
    CliqueSearch(const BitGraph& g, Budget budget) : g_(g), budget_(budget), start_(Clock::now()) {}

    std::vector<int> run(std::vector<std::uint64_t> candidates) {
        expand(std::move(candidates));
        return best_;
    }
    bool aborted() const { return aborted_; }

private:
    bool out_of_budget() {
        if (aborted_) return true;
        ++nodes_;
        if (budget_.node_limit != 0 && nodes_ > budget_.node_limit) aborted_ = true;
        if ((nodes_ & 1023u) == 0 && Clock::now() - start_ > budget_.time) aborted_ = true;
        return aborted_;
    }

    void expand(std::vector<std::uint64_t> p) {
        if (out_of_budget()) return;
        const std::size_t words = g_.words();
        std::vector<int> order;
        std::vector<int> bound;
        std::vector<std::uint64_t> uncolored = p;
        int color = 0;
        auto any = [](const std::vector<std::uint64_t>& s) {
            return std::any_of(s.begin(), s.end(), [](std::uint64_t w) { return w != 0; });
        };
        while (any(uncolored)) {
            ++color;
            std::vector<std::uint64_t> q = uncolored;
            for (std::size_t w = 0; w < words; ++w) {
                while (q[w] != 0) {
                    const int bit = std::countr_zero(q[w]);
                    const int v = static_cast<int>(w * 64) + bit;
                    q[w] &= q[w] - 1;
                    uncolored[w] &= ~(std::uint64_t{1} << bit);
                    const std::uint64_t* nv = g_.row_bits(v);
                    for (std::size_t x = w; x < words; ++x) q[x] &= ~nv[x];
                    order.push_back(v);
                    bound.push_back(color);
                }
            }
        }
        for (std::size_t i = order.size(); i-- > 0;) {
            if (current_.size() + static_cast<std::size_t>(bound[i]) <= best_.size()) return;
            const int v = order[i];
            current_.push_back(v);
            std::vector<std::uint64_t> next(words);
            const std::uint64_t* nv = g_.row_bits(v);
            bool empty = true;
            for (std::size_t w = 0; w < words; ++w) {
                next[w] = p[w] & nv[w];
                empty = empty && next[w] == 0;
            }
            if (empty) {
                if (current_.size() > best_.size()) best_ = current_;
            } else {
                expand(std::move(next));
            }
            current_.pop_back();
            p[static_cast<std::size_t>(v) / 64] &= ~(std::uint64_t{1} << (v % 64));
            if (aborted_) return;
        }
    }

    const BitGraph& g_;
    Budget budget_;
    Clock::time_point start_;
    std::uint64_t nodes_ = 0;
    bool aborted_ = false;
    std::vector<int> current_;
    std::vector<int> best_;
};

}  // namespace

std::string to_string(GraphKind kind) {
    switch (kind) {
    case GraphKind::egraph: return "egraph";
    case GraphKind::wgraph: return "wgraph";
    case GraphKind::custom: return "custom";
    }
    return "custom";
}

GraphKind graph_kind_from_string(const std::string& s) {
    if (s == "egraph") return GraphKind::egraph;
    if (s == "wgraph") return GraphKind::wgraph;
    if (s == "custom") return GraphKind::custom;
    throw std::invalid_argument("unknown graph kind: " + s);
}

double EGraphSpec::ratio() const { return std::sqrt(static_cast<double>(b) / static_cast<double>(a)); }

std::vector<double> default_radii(int c, double d) {
    if (c < 1) throw std::invalid_argument("circle count must be >= 1");
    if (c == 1) return {1.0};
    std::vector<double> r;
    for (int i = 0; i < c; ++i) r.push_back(1.0 + (d - 1.0) * static_cast<double>(i) / static_cast<double>(c - 1));
    return r;
}

std::size_t ColoringInstance::expanded_count() const {
    return static_cast<std::size_t>(std::accumulate(multiplicity.begin(), multiplicity.end(), 0));
}

std::vector<int> ColoringInstance::expanded_offsets() const {
    std::vector<int> off(multiplicity.size());
    int at = 0;
    for (std::size_t i = 0; i < multiplicity.size(); ++i) {
        off[i] = at;
        at += multiplicity[i];
    }
    return off;
}

std::vector<int> ColoringInstance::poly_copies() const {
    std::vector<int> out;
    const auto off = expanded_offsets();
    for (std::size_t i = 0; i < multiplicity.size(); ++i)
        if (multiplicity[i] > 1)
            for (int c = 0; c < multiplicity[i]; ++c) out.push_back(off[i] + c);
    return out;
}

bool in_window(const ColoringInstance& g, int i, int j) {
    const auto ui = static_cast<std::size_t>(i);
    const auto uj = static_cast<std::size_t>(j);
    if (g.window.lo_squared && g.window.hi_squared && ui < g.lattice.size() && uj < g.lattice.size()) {
        const std::int64_t n = loeschian_norm(g.lattice[ui] - g.lattice[uj]);
        return *g.window.lo_squared <= n && n <= *g.window.hi_squared;
    }
    const double dist = distance(g.positions[ui], g.positions[uj]);
    return dist >= g.window.lo - kGeomTol && dist <= g.window.hi + kGeomTol;
}

ExpandedGraph expand(const ColoringInstance& g) {
    ExpandedGraph out;
    const auto off = g.expanded_offsets();
    out.n = static_cast<int>(g.expanded_count());
    out.base_of.resize(static_cast<std::size_t>(out.n));
    for (std::size_t i = 0; i < g.multiplicity.size(); ++i)
        for (int c = 0; c < g.multiplicity[i]; ++c) out.base_of[static_cast<std::size_t>(off[i] + c)] = static_cast<int>(i);
    for (std::size_t i = 0; i < g.multiplicity.size(); ++i)
        for (int c = 0; c < g.multiplicity[i]; ++c)
            for (int e = c + 1; e < g.multiplicity[i]; ++e) out.edges.emplace_back(off[i] + c, off[i] + e);
    for (auto [i, j] : g.edges) {
        const auto ui = static_cast<std::size_t>(i);
        const auto uj = static_cast<std::size_t>(j);
        for (int c = 0; c < g.multiplicity[ui]; ++c)
            for (int e = 0; e < g.multiplicity[uj]; ++e) {
                int x = off[ui] + c;
                int y = off[uj] + e;
                if (x > y) std::swap(x, y);
                out.edges.emplace_back(x, y);
            }
    }
    std::sort(out.edges.begin(), out.edges.end());
    return out;
}

BitGraph::BitGraph(int n)
    : n_(n), words_(static_cast<std::size_t>((n + 63) / 64)), rows_(static_cast<std::size_t>(n) * words_, 0) {}

BitGraph::BitGraph(const ExpandedGraph& g) : BitGraph(g.n) {
    for (auto [i, j] : g.edges) add_edge(i, j);
}

void BitGraph::add_edge(int i, int j) {
    rows_[row(i) + static_cast<std::size_t>(j) / 64] |= std::uint64_t{1} << (j % 64);
    rows_[row(j) + static_cast<std::size_t>(i) / 64] |= std::uint64_t{1} << (i % 64);
}

int BitGraph::degree(int i) const {
    int d = 0;
    for (std::size_t w = 0; w < words_; ++w) d += std::popcount(rows_[row(i) + w]);
    return d;
}

ColoringInstance build_egraph(const EGraphSpec& spec) {
    if (spec.m < 1) throw std::invalid_argument("e-graph radius m must be >= 1");
    if (spec.a < 1 || spec.b < spec.a) throw std::invalid_argument("e-graph window needs 1 <= a <= b");
    if (!is_loeschian(spec.a)) throw std::invalid_argument("a = " + std::to_string(spec.a) + " is not a Loeschian number");
    if (!is_loeschian(spec.b)) throw std::invalid_argument("b = " + std::to_string(spec.b) + " is not a Loeschian number");
    const auto m = static_cast<std::int64_t>(spec.m);
    if (3 * m * m + 3 * m + 1 > static_cast<std::int64_t>(kMaxGraphVertices))
        throw std::invalid_argument("e-graph with m = " + std::to_string(spec.m) + " exceeds the vertex cap");

    std::vector<LatticeVector> pts;
    for (std::int64_t u = -m; u <= m; ++u)
        for (std::int64_t v = -m; v <= m; ++v)
            if (hex_ring({u, v}) <= m) pts.push_back({u, v});
    std::sort(pts.begin(), pts.end(), [](LatticeVector x, LatticeVector y) {
        const auto rx = hex_ring(x);
        const auto ry = hex_ring(y);
        if (rx != ry) return rx < ry;
        return angle_key(to_cartesian(x, 1.0)) < angle_key(to_cartesian(y, 1.0));
    });

    ColoringInstance g;
    g.kind = GraphKind::egraph;
    g.egraph = spec;
    g.lattice = pts;
    for (LatticeVector w : pts) g.positions.push_back(to_cartesian(w, 1.0));
    g.multiplicity.assign(pts.size(), 1);
    g.window = {std::sqrt(static_cast<double>(spec.a)), std::sqrt(static_cast<double>(spec.b)), spec.a, spec.b};

    std::map<LatticeVector, int> index;
    for (std::size_t i = 0; i < pts.size(); ++i) index.emplace(pts[i], static_cast<int>(i));
    std::vector<LatticeVector> offsets;
    const auto reach = static_cast<std::int64_t>(std::ceil(2.0 * std::sqrt(static_cast<double>(spec.b) / 3.0))) + 1;
    for (std::int64_t u = -reach; u <= reach; ++u)
        for (std::int64_t v = -reach; v <= reach; ++v) {
            const auto n = loeschian_norm({u, v});
            if (n >= spec.a && n <= spec.b) offsets.push_back({u, v});
        }
    for (std::size_t i = 0; i < pts.size(); ++i)
        for (LatticeVector off : offsets) {
            auto it = index.find(pts[i] + off);
            if (it != index.end() && it->second > static_cast<int>(i)) g.edges.emplace_back(static_cast<int>(i), it->second);
        }
    sort_edges(g.edges);
    return g;
}

ColoringInstance build_wgraph(const WGraphSpec& spec) {
    if (spec.p < 3) throw std::invalid_argument("w-graph needs p >= 3");
    if (spec.c < 1) throw std::invalid_argument("w-graph needs c >= 1");
    if (!(spec.d >= 1.0)) throw std::invalid_argument("w-graph needs d >= 1");
    const std::vector<double> radii = spec.radii.empty() ? default_radii(spec.c, spec.d) : spec.radii;
    const std::vector<double> offsets = spec.offsets.empty() ? std::vector<double>(static_cast<std::size_t>(spec.c), 0.0) : spec.offsets;
    if (radii.size() != static_cast<std::size_t>(spec.c) || offsets.size() != static_cast<std::size_t>(spec.c))
        throw std::invalid_argument("w-graph radii/offsets must have c entries");
    for (double r : radii)
        if (r < 1.0 - kGeomTol || r > spec.d + kGeomTol)
            throw std::invalid_argument("w-graph radius " + std::to_string(r) + " outside [1, d]");

    ColoringInstance g;
    g.kind = GraphKind::wgraph;
    g.wgraph = spec;
    g.wgraph->radii = radii;
    g.wgraph->offsets = offsets;
    g.window = {1.0, spec.d, std::nullopt, std::nullopt};
    for (int c = 0; c < spec.c; ++c)
        for (int j = 0; j < spec.p; ++j) {
            const double th = offsets[static_cast<std::size_t>(c)] + kTwoPi * static_cast<double>(j) / static_cast<double>(spec.p);
            const double r = radii[static_cast<std::size_t>(c)];
            g.positions.push_back({r * std::cos(th), r * std::sin(th)});
        }
    g.multiplicity.assign(g.positions.size(), 1);
    const int n = static_cast<int>(g.positions.size());
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (in_window(g, i, j)) g.edges.emplace_back(i, j);
    return g;
}

LatticeVector upward_representative(std::int64_t norm_value) {
    const auto all = vectors_of_norm(norm_value);
    if (all.empty()) throw std::invalid_argument(std::to_string(norm_value) + " is not a Loeschian number");
    LatticeVector best = all.front();
    double best_gap = 1e9;
    double best_x = 0.0;
    for (LatticeVector w : all) {
        const Point p = to_cartesian(w, 1.0);
        const double gap = std::abs(std::atan2(p.y, p.x) - kPi / 2.0);
        if (gap < best_gap - 1e-12 || (std::abs(gap - best_gap) <= 1e-12 && p.x > best_x)) {
            best = w;
            best_gap = gap;
            best_x = p.x;
        }
    }
    return best;
}

ColoringInstance attach_polychromatic(const ColoringInstance& base, bool tri_at_center, std::optional<BiPlacement> bi) {
    ColoringInstance g = base;
    g.precolored.clear();
    const bool lattice = base.kind == GraphKind::egraph && base.window.lo_squared.has_value();
    if (tri_at_center) {
        if (g.tri_vertex) throw std::invalid_argument("instance already has a tri-chromatic vertex");
        g.tri_vertex = place_poly(g, {0.0, 0.0}, lattice ? std::optional<LatticeVector>(LatticeVector{0, 0}) : std::nullopt, 3);
    }
    if (bi) {
        if (g.bi_vertex) throw std::invalid_argument("instance already has a bi-chromatic vertex");
        if (lattice) {
            const std::int64_t s2 = bi->s_squared ? *bi->s_squared
                                    : bi->s      ? static_cast<std::int64_t>(std::llround(*bi->s * *bi->s))
                                                 : *g.window.lo_squared;
            if (s2 < *g.window.lo_squared || s2 > *g.window.hi_squared)
                throw std::invalid_argument("bi-chromatic distance s^2 = " + std::to_string(s2) + " outside [a, b]");
            if (!is_loeschian(s2)) throw std::invalid_argument("s^2 = " + std::to_string(s2) + " is not a lattice distance");
            const LatticeVector w = upward_representative(s2);
            g.bi_vertex = place_poly(g, to_cartesian(w, 1.0), w, 2);
        } else {
            const double s = bi->s ? *bi->s : bi->s_squared ? std::sqrt(static_cast<double>(*bi->s_squared)) : g.window.lo;
            if (s < g.window.lo - kGeomTol || s > g.window.hi + kGeomTol)
                throw std::invalid_argument("bi-chromatic distance s = " + std::to_string(s) + " outside the window");
            const double angle = bi->angle.value_or(kPi / 2.0);
            g.bi_vertex = place_poly(g, {s * std::cos(angle), s * std::sin(angle)}, std::nullopt, 2);
        }
        // Indices may have shifted only by appending, so tri_vertex stays valid.
    }
    return g;
}

CliqueResult max_clique(const BitGraph& g, const std::vector<int>& candidates, Budget budget) {
    // Relabel the candidates by decreasing degree inside the candidate set.
    const int n = static_cast<int>(candidates.size());
    std::vector<int> order(candidates);
    std::vector<int> deg(static_cast<std::size_t>(g.size()), 0);
    for (int v : candidates)
        for (int w : candidates)
            if (v != w && g.adjacent(v, w)) ++deg[static_cast<std::size_t>(v)];
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return deg[static_cast<std::size_t>(x)] > deg[static_cast<std::size_t>(y)]; });
    BitGraph local(n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (g.adjacent(order[static_cast<std::size_t>(i)], order[static_cast<std::size_t>(j)])) local.add_edge(i, j);
    std::vector<std::uint64_t> all(local.words(), 0);
    for (int i = 0; i < n; ++i) all[static_cast<std::size_t>(i) / 64] |= std::uint64_t{1} << (i % 64);
    CliqueSearch search(local, budget);
    CliqueResult out;
    for (int v : search.run(std::move(all))) out.vertices.push_back(order[static_cast<std::size_t>(v)]);
    std::sort(out.vertices.begin(), out.vertices.end());
    out.exact = !search.aborted();
    return out;
}

CliqueResult max_clique(const ColoringInstance& g, Budget budget) {
    const ExpandedGraph x = expand(g);
    std::vector<int> all(static_cast<std::size_t>(x.n));
    std::iota(all.begin(), all.end(), 0);
    return max_clique(BitGraph(x), all, budget);
}

CliqueResult base_clique(const ColoringInstance& g, Budget budget) {
    const ExpandedGraph x = expand(g);
    std::vector<int> plain;
    for (int v = 0; v < x.n; ++v)
        if (g.multiplicity[static_cast<std::size_t>(x.base_of[static_cast<std::size_t>(v)])] == 1) plain.push_back(v);
    return max_clique(BitGraph(x), plain, budget);
}

int assign_precoloring(ColoringInstance& g, Budget budget) {
    const ExpandedGraph x = expand(g);
    const BitGraph bits(x);
    std::vector<int> plain;
    for (int v = 0; v < x.n; ++v)
        if (g.multiplicity[static_cast<std::size_t>(x.base_of[static_cast<std::size_t>(v)])] == 1) plain.push_back(v);
    const CliqueResult q = max_clique(bits, plain, budget);
    const std::vector<int> poly = g.poly_copies();
    for (std::size_t i = 0; i < poly.size(); ++i)
        for (std::size_t j = i + 1; j < poly.size(); ++j)
            if (!bits.adjacent(poly[i], poly[j]))
                throw std::invalid_argument("poly-chromatic copies are not pairwise adjacent; s must lie in the window");
    if (poly.empty()) {
        g.precolored = q.vertices;
        return static_cast<int>(q.vertices.size());
    }
    std::vector<int> common;
    for (int v : plain)
        if (std::all_of(poly.begin(), poly.end(), [&](int p) { return bits.adjacent(v, p); })) common.push_back(v);
    const CliqueResult joint = max_clique(bits, common, budget);
    g.precolored = poly;
    g.precolored.insert(g.precolored.end(), joint.vertices.begin(), joint.vertices.end());
    return static_cast<int>(q.vertices.size());
}

std::vector<std::int64_t> bichromatic_candidates(const EGraphSpec& spec) {
    const LoeschianTable table(spec.b);
    std::vector<std::int64_t> out;
    for (std::int64_t n : table.members())
        if (n >= spec.a && n <= spec.b) out.push_back(n);
    return out;
}

std::vector<std::pair<BiPlacement, ColoringInstance>> sweep_bichromatic(const ColoringInstance& base,
                                                                        const std::vector<BiPlacement>& candidates) {
    std::vector<std::pair<BiPlacement, ColoringInstance>> out;
    out.reserve(candidates.size());
    for (const BiPlacement& bi : candidates) out.emplace_back(bi, attach_polychromatic(base, !base.tri_vertex.has_value(), bi));
    return out;
}

}  // namespace cnp
