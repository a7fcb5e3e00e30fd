#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>

#include "cnp/datasets.hpp"
#include "cnp/io.hpp"
#include "cnp/store.hpp"
#include "cnp/sweep.hpp"

using namespace cnp;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir() {
        std::random_device rd;
        path = fs::temp_directory_path() / ("cnp-test-" + std::to_string(rd()));
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
};

TaskSpec wheel_task(int colors) {
    TaskSpec t;
    t.family = GraphKind::egraph;
    t.egraph = EGraphSpec{1, 1, 1};
    t.colors = colors;
    return t;
}

}  // namespace

TEST_CASE("graph JSON round trip") {
    ColoringInstance g = attach_polychromatic(build_egraph({3, 3, 7}), true, BiPlacement{});
    assign_precoloring(g);
    const nlohmann::json j = graph_to_json(g);
    CHECK(j.at("schema_version") == kSchemaVersion);
    const ColoringInstance back = graph_from_json(j);
    CHECK(back.edges == g.edges);
    CHECK(back.multiplicity == g.multiplicity);
    CHECK(back.precolored == g.precolored);
    CHECK(back.tri_vertex == g.tri_vertex);
    CHECK(back.bi_vertex == g.bi_vertex);
    CHECK(instance_hash(back, 6) == instance_hash(g, 6));

    const ColoringInstance w = build_wgraph({18, 1, 1.2856, {}, {}});
    CHECK(graph_from_json(graph_to_json(w)).edges == w.edges);
}

TEST_CASE("graph JSON rejects edges outside the window") {
    nlohmann::json j = graph_to_json(build_egraph({2, 1, 1}));
    j["edges"].push_back({0, 18});
    CHECK_THROWS(graph_from_json(j));
}

TEST_CASE("custom graphs from JSON") {
    const nlohmann::json j = {{"schema_version", 1},
                              {"kind", "custom"},
                              {"vertices", {{0.0, 0.0}, {1.0, 0.0}, {0.5, 0.8660254037844386}}},
                              {"edges", {{0, 1}, {0, 2}, {1, 2}}},
                              {"window", {{"lo", 1.0}, {"hi", 1.0}}}};
    const ColoringInstance g = graph_from_json(j);
    CHECK(g.vertex_count() == 3);
    CHECK(exact_color(g, 2).status == SolveStatus::unsat);
}

TEST_CASE("tiling and packing JSON round trips") {
    const TilingSpec spec = regular_sublattice_coloring(7).to_spec();
    const TilingSpec back = tiling_from_json(tiling_to_json(spec));
    CHECK(back.k == 7);
    CHECK(back.tiles.size() == spec.tiles.size());
    CHECK(verify_tiling(back).min_same_color_gap == doctest::Approx(verify_tiling(spec).min_same_color_gap));
    const TilingSpec radial = radial_optimum(3, 9).to_spec();
    CHECK(verify_tiling(tiling_from_json(tiling_to_json(radial))).min_same_color_gap ==
          doctest::Approx(verify_tiling(radial).min_same_color_gap));

    PackingResult p;
    p.q = 3;
    p.points = {{0, 0}, {1, 0}, {0.5, 0.8660254037844386}};
    p.width = 42.0;  // recomputed on load
    p.seed = 4;
    p.restarts = 2;
    const PackingResult q = packing_from_json(packing_to_json(p));
    CHECK(q.width == doctest::Approx(1.0));
    CHECK(q.min_dist == doctest::Approx(1.0));
    CHECK(q.seed == 4);
    CHECK(q.restarts == 2);
}

TEST_CASE("outcome JSON") {
    SolveOutcome o;
    o.status = SolveStatus::sat;
    o.colors = std::vector<int>{0, 1, 2};
    o.solver = "internal";
    const nlohmann::json with = outcome_to_json(o);
    CHECK(with.at("status") == "SAT");
    CHECK(with.at("model").size() == 3);
    CHECK_FALSE(outcome_to_json(o, false).contains("model"));
}

TEST_CASE("task specs") {
    TaskSpec t = wheel_task(4);
    t.tri = true;
    t.bi = BiPlacement{1, {}, {}};
    const TaskSpec back = TaskSpec::from_json(t.to_json());
    CHECK(back.hash() == t.hash());
    CHECK(wheel_task(4).hash() != wheel_task(5).hash());
    TaskSpec w;
    w.family = GraphKind::wgraph;
    w.wgraph = WGraphSpec{18, 1, 1.2856, {}, {}};
    w.tri = true;
    w.bi = BiPlacement{std::nullopt, 1.0, 80.0 * kPi / 180.0};
    w.colors = 6;
    const TaskSpec wb = TaskSpec::from_json(w.to_json());
    REQUIRE(wb.bi);
    CHECK(*wb.bi->angle == doctest::Approx(*w.bi->angle));
    CHECK(wb.hash() == w.hash());
    int q = 0;
    const ColoringInstance g = TaskSpec::from_json(t.to_json()).build({}, &q);
    CHECK(q == 2);  // the centre is poly-chromatic, leaving ring edges
    CHECK(g.tri_vertex.has_value());
    CHECK_FALSE(g.precolored.empty());
}

TEST_CASE("result store keeps the last outcome per hash and survives reloads") {
    TempDir dir;
    const fs::path file = dir.path / "results.jsonl";
    StoredOutcome a;
    a.task = wheel_task(3);
    a.hash = a.task.hash();
    a.status = SolveStatus::unknown;
    a.solver = "internal";
    {
        ResultStore store(file);
        CHECK(store.size() == 0);
        store.append(a);
        a.status = SolveStatus::sat;
        store.append(a);
        CHECK(store.size() == 1);
    }
    ResultStore again(file);
    CHECK(again.size() == 1);
    const auto found = again.find(a.hash);
    REQUIRE(found);
    CHECK(found->status == SolveStatus::sat);
    CHECK(again.outcomes().size() == 1);
    std::ifstream in(file);
    int lines = 0;
    for (std::string line; std::getline(in, line);) ++lines;
    CHECK(lines == 2);
}

TEST_CASE("cached solving is idempotent") {
    TempDir dir;
    ResultStore store(dir.path / "results.jsonl");
    SolveOptions opt;
    opt.internal = true;
    const TaskResult first = solve_cached(wheel_task(3), store, opt);
    CHECK_FALSE(first.cached);
    CHECK(first.outcome.status == SolveStatus::sat);
    const TaskResult second = solve_cached(wheel_task(3), store, opt);
    CHECK(second.cached);
    CHECK(second.outcome.status == SolveStatus::sat);
    CHECK(store.size() == 1);
    opt.force = true;
    CHECK_FALSE(solve_cached(wheel_task(3), store, opt).cached);
    const TaskResult two = solve_cached(wheel_task(2), store, opt);
    CHECK(two.outcome.status == SolveStatus::unsat);
    CHECK(two.outcome.solver == "clique");
}

TEST_CASE("configuration files and environment overrides") {
    TempDir dir;
    const fs::path file = dir.path / "cnp.conf";
    {
        std::ofstream out(file);
        out << "# comment\nsolver = kissat -q\ntimeout = 12.5  # seconds\n\nexact_cap = 60\n";
    }
    Config c = Config::load(file);
    CHECK(c.solver == "kissat -q");
    CHECK(c.timeout == 12.5);
    CHECK(c.exact_cap == 60);
    CHECK(c.solver_config().command == "kissat -q");
    CHECK(c.solver_config().timeout.count() == doctest::Approx(12.5));
    ::setenv("CNP_TIMEOUT", "3", 1);
    CHECK(Config::load(file).timeout == 3.0);
    ::unsetenv("CNP_TIMEOUT");
    CHECK_THROWS_AS(c.set("colour", "blue"), std::invalid_argument);
    CHECK_THROWS_AS(c.set("timeout", "soon"), std::invalid_argument);
    {
        std::ofstream out(file);
        out << "solver kissat\n";
    }
    CHECK_THROWS_AS(Config::load(file), std::runtime_error);
    CHECK_THROWS_AS(Config::load(dir.path / "missing.conf"), std::runtime_error);
    CHECK(Config{}.workers() >= 1);
}

TEST_CASE("sweep plans") {
    const SweepPlan plan = SweepPlan::from_json(
        {{"family", "egraph"}, {"m", {3, 4}}, {"a", {7, 8, 13}}, {"b", {13, 21}}, {"colors", {5, 6}}, {"bi", true}});
    const auto tasks = plan.tasks(1000);
    // a = 8 is not Loeschian; a = b is a valid single-distance window.
    CHECK(tasks.size() == 2 * 2 * 2 * 2);
    for (const TaskSpec& t : tasks) {
        CHECK(t.egraph->a <= t.egraph->b);
        CHECK(t.bi.has_value());
    }
    CHECK_THROWS_AS(plan.tasks(5), std::length_error);

    const SweepPlan w = SweepPlan::from_json(
        {{"family", "wgraph"}, {"p", {18, 20}}, {"c", {1, 2}}, {"d", {1.2856}}, {"radii", {{1.0}, {1.0, 1.2}}}, {"colors", {6}}});
    CHECK(w.tasks(100).size() == 2 * 2);  // radii must match c
}

TEST_CASE("sweeps solve every task and reuse the store") {
    TempDir dir;
    ResultStore store(dir.path / "results.jsonl");
    SweepPlan plan;
    plan.m = {1, 2};
    plan.a = {1};
    plan.b = {1, 3};
    plan.colors = {3, 4};
    plan.tri = false;
    const auto tasks = plan.tasks(100);
    SolveOptions opt;
    opt.internal = true;
    const SweepSummary first = run_sweep(tasks, store, opt, 2);
    CHECK(first.results.size() == tasks.size());
    CHECK(first.solved == tasks.size());
    const SweepSummary second = run_sweep(tasks, store, opt, 2);
    CHECK(second.cached == tasks.size());
    for (std::size_t i = 0; i < tasks.size(); ++i)
        CHECK(first.results[i].outcome.status == second.results[i].outcome.status);
}

TEST_CASE("hunt driver walks the frontier") {
    HuntDriver driver({6, 13, 21, 5, 0.0, true, true, 50, 40});
    auto probe = driver.next();
    REQUIRE(probe);
    CHECK(probe->a == 13);
    CHECK(probe->b == 21);
    driver.report(SolveStatus::unsat, 3, 0.1);
    probe = driver.next();
    REQUIRE(probe);
    CHECK(probe->a == 13);
    CHECK(probe->b == 19);
    driver.report(SolveStatus::sat, 3, 0.1);
    // Record 21/13; grow a to the next Loeschian number at the same ratio.
    REQUIRE(driver.frontier().size() == 1);
    CHECK(driver.frontier()[0].b == 21);
    CHECK(driver.frontier()[0].l == 4);
    probe = driver.next();
    REQUIRE(probe);
    CHECK(probe->a == 16);
    CHECK(probe->b * 13 >= 21 * 16);
    CHECK(probe->b == loeschian_at_least((21 * 16 + 12) / 13));
    driver.finish();
    CHECK(driver.done());
    CHECK_FALSE(driver.next());
    CHECK_THROWS_AS(driver.report(SolveStatus::sat, 3, 0.0), std::logic_error);
    CHECK_THROWS_AS(HuntDriver({6, 14, 21, 5, 0.0, true, true, 50, 40}), std::invalid_argument);
}

TEST_CASE("property: hunt records strictly improve") {
    std::mt19937_64 rng(13);
    std::bernoulli_distribution coin(0.5);
    for (int trial = 0; trial < 50; ++trial) {
        HuntDriver driver({6, 13, 21, 5, 0.0, true, true, 40, 2000});
        while (auto p = driver.next()) {
            CHECK(p->a < p->b);
            CHECK(is_loeschian(p->a));
            CHECK(is_loeschian(p->b));
            driver.report(coin(rng) ? SolveStatus::unsat : SolveStatus::sat, 3, 0.0);
        }
        const auto& f = driver.frontier();
        for (std::size_t i = 1; i < f.size(); ++i) CHECK(f[i].d < f[i - 1].d);
        CHECK(driver.probes() <= 40);
    }
}

TEST_CASE("frontier export") {
    const std::vector<FrontierRow> rows{{6, 13, 21, std::sqrt(21.0 / 13.0), 4, 5, 3, 0.1}};
    const std::string csv = frontier_csv(rows);
    CHECK(csv.rfind("k,a,b,d,l,m,q,time", 0) == 0);
    CHECK(csv.find("6,13,21,1.27098,4,5,3") != std::string::npos);
    CHECK(frontier_text(rows).find("1.27098") != std::string::npos);
}

TEST_CASE("datasets") {
    const fs::path dir = default_data_dir();
    CHECK(read_sublattice_table(dir / "table2.csv").size() == 200);
    const auto clique = read_clique_table(dir / "table5.csv");
    CHECK(clique.size() == 40);
    CHECK(clique[4].d == doctest::Approx(1.61803));
    const auto annulus = read_annulus_table(dir / "table4.csv");
    CHECK(annulus.front().k == 3);
    CHECK(annulus.front().p == 18);
    const auto frontier = read_frontier_csv(dir / "table6.csv");
    CHECK(frontier.size() >= 20);
    for (const FrontierRow& r : frontier) {
        INFO("a = " << r.a << ", b = " << r.b);
        CHECK(r.l == loeschian_count_in(r.a, r.b));
        CHECK(r.d == doctest::Approx(std::sqrt(static_cast<double>(r.b) / static_cast<double>(r.a))).epsilon(1e-5));
    }
    const auto bounds = reference_bounds(dir);
    CHECK_FALSE(bounds.empty());
    for (const BoundEntry& e : bounds) CHECK(e.provenance == Provenance::paper_import);
}

TEST_CASE("ragged CSV rows name their line") {
    TempDir dir;
    const fs::path file = dir.path / "bad.csv";
    {
        std::ofstream out(file);
        out << "q,d\n1,0\n2\n";
    }
    try {
        read_csv(file);
        FAIL("expected an error");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find("3") != std::string::npos);
    }
    CHECK_THROWS(read_csv(dir.path / "missing.csv").column("q"));
}
