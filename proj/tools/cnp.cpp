// cnp: command-line front end. Every command prints one JSON document with a
// "schema_version" field (CSV and text tables on request). Usage errors exit
// with status 2, failures with status 1.

#include <csignal>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "cnp/bounds.hpp"
#include "cnp/colorsat.hpp"
#include "cnp/datasets.hpp"
#include "cnp/graphs.hpp"
#include "cnp/io.hpp"
#include "cnp/lattice.hpp"
#include "cnp/packing.hpp"
#include "cnp/store.hpp"
#include "cnp/sweep.hpp"
#include "cnp/tilings.hpp"

using nlohmann::json;
using namespace cnp;

namespace {

constexpr int kUsageError = 2;

// Raised for command lines that parse but do not make sense.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

void emit(const json& j) { std::cout << j.dump(2) << '\n'; }

json document() { return json{{"schema_version", kSchemaVersion}}; }

extern "C" void on_interrupt(int) {
    request_stop();
    std::signal(SIGINT, SIG_DFL);
}

struct Common {
    std::optional<std::string> config_file;
    std::optional<std::string> solver;
    std::optional<double> timeout;
    std::optional<unsigned> workers;
    std::optional<std::string> data_dir;

    Config config() const {
        Config c = Config::load(config_file ? std::optional<std::filesystem::path>(*config_file) : std::nullopt);
        if (solver) c.solver = *solver;
        if (timeout) c.timeout = *timeout;
        if (workers) c.parallelism = *workers;
        return c;
    }
    std::filesystem::path data() const { return data_dir ? std::filesystem::path(*data_dir) : default_data_dir(); }
};

Budget clique_budget(const Config& c) {
    return Budget{std::chrono::milliseconds(static_cast<long long>(c.clique_seconds * 1000.0)), 0};
}

SolveOptions solve_options(const Config& c, bool internal, bool force) {
    SolveOptions o;
    o.internal = internal;
    o.solver = c.solver_config();
    o.exact_cap = c.exact_cap;
    o.budget = clique_budget(c);
    o.force = force;
    if (!internal && o.solver.command.empty())
        throw UsageError("no external solver configured; pass --solver, set CNP_SOLVER, or use --internal");
    return o;
}

// ---------------------------------------------------------------------------
// egraph / wgraph

struct GraphArgs {
    GraphKind kind = GraphKind::egraph;
    int m = 1;
    std::int64_t a = 1;
    std::int64_t b = 1;
    int p = 3;
    int c = 1;
    double d = 1.0;
    std::vector<double> radii;
    std::vector<double> offsets;
    bool tri = false;
    bool bi = false;
    std::optional<std::int64_t> bi_s2;
    std::optional<double> bi_s;
    std::optional<double> bi_angle;  // degrees
    int colors = 0;

    TaskSpec task() const {
        TaskSpec t;
        t.family = kind;
        t.tri = tri;
        t.colors = colors;
        if (kind == GraphKind::egraph) {
            t.egraph = EGraphSpec{m, a, b};
            if (bi_s || bi_angle) throw UsageError("--bi-s and --bi-angle apply to w-graphs");
        } else {
            t.wgraph = WGraphSpec{p, c, d, radii, offsets};
            if (bi_s2) throw UsageError("--bi-s2 applies to e-graphs");
        }
        if (bi || bi_s2 || bi_s || bi_angle) {
            BiPlacement placement;
            placement.s_squared = bi_s2;
            placement.s = bi_s;
            if (bi_angle) placement.angle = *bi_angle * std::acos(-1.0) / 180.0;
            t.bi = placement;
        }
        return t;
    }
};

void add_graph_flags(CLI::App* cmd, GraphArgs& g) {
    if (g.kind == GraphKind::egraph) {
        cmd->add_option("--m", g.m, "hexagon radius of the lattice ball")->required()->check(CLI::PositiveNumber);
        cmd->add_option("--a", g.a, "smallest forbidden squared distance (Loeschian)")->required();
        cmd->add_option("--b", g.b, "largest forbidden squared distance (Loeschian)")->required();
        cmd->add_option("--bi-s2", g.bi_s2, "squared distance of the bi-chromatic vertex (implies --bi)");
    } else {
        cmd->add_option("--p", g.p, "vertices per circle")->required()->check(CLI::PositiveNumber);
        cmd->add_option("--c", g.c, "number of circles")->required()->check(CLI::PositiveNumber);
        cmd->add_option("--d", g.d, "outer radius and largest forbidden distance")->required();
        cmd->add_option("--radii", g.radii, "circle radii, comma separated")->delimiter(',');
        cmd->add_option("--offsets", g.offsets, "angular offsets in radians, comma separated")->delimiter(',');
        cmd->add_option("--bi-s", g.bi_s, "distance of the bi-chromatic vertex (implies --bi)");
        cmd->add_option("--bi-angle", g.bi_angle, "direction of the bi-chromatic vertex in degrees (default 90)");
    }
    cmd->add_flag("--tri", g.tri, "tri-chromatic vertex at the centre");
    cmd->add_flag("--bi", g.bi, "bi-chromatic vertex at the default distance");
}

json task_header(const TaskSpec& t) {
    json j = document();
    j["task"] = t.to_json();
    j["hash"] = t.hash();
    return j;
}

void cmd_build(const GraphArgs& args, const Common& common) {
    const Config cfg = common.config();
    const TaskSpec t = args.task();
    int q = 0;
    const ColoringInstance g = t.build(clique_budget(cfg), &q);
    json j = task_header(t);
    j["q"] = q;
    j["vertices"] = g.vertex_count();
    j["expanded_vertices"] = g.expanded_count();
    j["edges"] = g.edges.size();
    j["graph"] = graph_to_json(g);
    emit(j);
}

void cmd_encode(const GraphArgs& args, const Common& common, const std::optional<std::string>& output) {
    const Config cfg = common.config();
    const TaskSpec t = args.task();
    const ColoringInstance g = t.build(clique_budget(cfg));
    const CnfInstance cnf = encode(g, args.colors);
    const std::string text = to_dimacs(cnf, "cnp " + t.hash());
    json j = task_header(t);
    j["variables"] = cnf.variable_count;
    j["clauses"] = cnf.clauses.size();
    j["precolored"] = g.precolored.size();
    if (output) {
        write_text_file(*output, text);
        j["output"] = *output;
    } else {
        j["dimacs"] = text;
    }
    emit(j);
}

struct SolveFlags {
    bool internal = false;
    bool exit_status = false;
    bool force = false;
    bool no_model = false;
    std::optional<std::string> store;
};

int exit_code(SolveStatus s, bool mirror) {
    if (!mirror) return 0;
    return s == SolveStatus::sat ? 10 : s == SolveStatus::unsat ? 20 : 0;
}

int cmd_solve(const GraphArgs& args, const Common& common, const SolveFlags& flags) {
    const Config cfg = common.config();
    const SolveOptions options = solve_options(cfg, flags.internal, flags.force);
    const TaskSpec t = args.task();
    std::optional<ResultStore> store;
    if (flags.store) store.emplace(*flags.store);

    json j = task_header(t);
    if (store && !flags.force)
        if (auto hit = store->find(t.hash()); hit && hit->status != SolveStatus::unknown) {
            j.update(hit->to_json());
            j["schema_version"] = kSchemaVersion;
            j["cached"] = true;
            emit(j);
            return exit_code(hit->status, flags.exit_status);
        }

    int q = 0;
    const ColoringInstance g = t.build(options.budget, &q);
    const SolveOutcome o = solve_instance(g, t.colors, options);
    if (store) store->append({t.hash(), t, o.status, o.wall_time.count(), o.solver, q, now_iso8601()});
    j.update(outcome_to_json(o, !flags.no_model));
    j["q"] = q;
    j["cached"] = false;
    emit(j);
    return exit_code(o.status, flags.exit_status);
}

json result_json(const TaskResult& r) {
    return {{"hash", r.outcome.hash},     {"task", r.outcome.task.to_json()}, {"status", to_string(r.outcome.status)},
            {"q", r.outcome.q},           {"wall_time", r.outcome.wall_time}, {"solver", r.outcome.solver},
            {"cached", r.cached}};
}

int cmd_sweep(GraphKind family, const Common& common, const std::string& plan_file, const SolveFlags& flags) {
    const Config cfg = common.config();
    json plan_json = read_json_file(plan_file);
    if (!plan_json.contains("family")) plan_json["family"] = to_string(family);
    const SweepPlan plan = SweepPlan::from_json(plan_json);
    if (plan.family != family) throw UsageError("plan family does not match the command");
    const std::vector<TaskSpec> tasks = plan.tasks(cfg.max_grid);
    ResultStore store(flags.store.value_or("results.jsonl"));
    const SweepSummary summary = run_sweep(tasks, store, solve_options(cfg, flags.internal, flags.force), cfg.workers());
    json j = document();
    j["tasks"] = tasks.size();
    j["solved"] = summary.solved;
    j["cached"] = summary.cached;
    j["interrupted"] = summary.interrupted;
    j["store"] = store.path().string();
    json results = json::array();
    for (const TaskResult& r : summary.results) results.push_back(result_json(r));
    j["results"] = results;
    emit(j);
    return summary.interrupted ? 130 : 0;
}

void add_graph_family(CLI::App& app, GraphKind kind, Common& common, std::function<void(std::function<int()>)> run) {
    const bool e = kind == GraphKind::egraph;
    CLI::App* family = app.add_subcommand(e ? "egraph" : "wgraph",
                                          e ? "hexagonal lattice graphs" : "concentric circle graphs");
    family->require_subcommand(1);

    auto args = std::make_shared<GraphArgs>();
    args->kind = kind;
    auto flags = std::make_shared<SolveFlags>();
    auto output = std::make_shared<std::optional<std::string>>();
    auto plan = std::make_shared<std::string>();

    CLI::App* build = family->add_subcommand("build", "graph JSON with poly-chromatic vertices and precolouring");
    add_graph_flags(build, *args);
    build->callback([=, &common] { run([=, &common] { cmd_build(*args, common); return 0; }); });

    CLI::App* enc = family->add_subcommand("encode", "DIMACS CNF of K-colourability");
    add_graph_flags(enc, *args);
    enc->add_option("--colors", args->colors, "total number of colours K")->required()->check(CLI::PositiveNumber);
    enc->add_option("-o,--output", *output, "CNF file (default: embedded in the JSON)");
    enc->callback([=, &common] { run([=, &common] { cmd_encode(*args, common, *output); return 0; }); });

    CLI::App* solve = family->add_subcommand("solve", "decide K-colourability");
    add_graph_flags(solve, *args);
    solve->add_option("--colors", args->colors, "total number of colours K")->required()->check(CLI::PositiveNumber);
    solve->add_flag("--internal", flags->internal, "exact DSATUR colourer instead of the SAT solver");
    solve->add_flag("--exit-status", flags->exit_status, "exit 10 on SAT and 20 on UNSAT");
    solve->add_flag("--force", flags->force, "solve even when the store has the task");
    solve->add_flag("--no-model", flags->no_model, "omit the colouring");
    solve->add_option("--store", flags->store, "result store (JSONL)");
    solve->callback([=, &common] { run([=, &common] { return cmd_solve(*args, common, *flags); }); });

    CLI::App* sweep = family->add_subcommand("sweep", "solve a grid of instances on a worker pool");
    sweep->add_option("--plan", *plan, "sweep plan JSON")->required()->check(CLI::ExistingFile);
    sweep->add_flag("--internal", flags->internal, "exact DSATUR colourer instead of the SAT solver");
    sweep->add_flag("--force", flags->force, "re-solve tasks found in the store");
    sweep->add_option("--store", flags->store, "result store (default results.jsonl)");
    sweep->callback([=, &common] { run([=, &common] { return cmd_sweep(kind, common, *plan, *flags); }); });
}

// ---------------------------------------------------------------------------
// hunt

json frontier_json(const std::vector<FrontierRow>& rows) {
    json out = json::array();
    for (const FrontierRow& r : rows)
        out.push_back({{"k", r.k}, {"a", r.a}, {"b", r.b}, {"d", r.d}, {"l", r.l}, {"m", r.m}, {"q", r.q},
                       {"time", r.time}});
    return out;
}

int cmd_hunt(const HuntPlan& plan, const Common& common, const SolveFlags& flags, const std::string& format) {
    const Config cfg = common.config();
    ResultStore store(flags.store.value_or("results.jsonl"));
    const HuntResult r = run_hunt(plan, store, solve_options(cfg, flags.internal, flags.force));
    if (format == "text") {
        std::cout << frontier_text(r.frontier);
    } else if (format == "csv") {
        std::cout << frontier_csv(r.frontier);
    } else {
        json j = document();
        j["frontier"] = frontier_json(r.frontier);
        json probes = json::array();
        for (const TaskResult& p : r.probes) probes.push_back(result_json(p));
        j["probes"] = probes;
        j["aborted"] = r.aborted;
        j["error"] = r.aborted ? json(r.error) : json(nullptr);
        j["store"] = store.path().string();
        emit(j);
    }
    if (r.aborted) std::cerr << "cnp: hunt aborted: " << r.error << '\n';
    return r.aborted ? 1 : 0;
}

// ---------------------------------------------------------------------------
// tiling and pack

json verified(const TilingSpec& spec) {
    const TilingReport report = verify_tiling(spec);
    json j = report_to_json(report);
    j["k"] = spec.k;
    j["tiles"] = spec.tiles.size();
    j["periodic"] = spec.periodic();
    return j;
}

void cmd_tiling_verify(const std::string& file) {
    const TilingSpec spec = tiling_from_json(read_json_file(file));
    try {
        emit(verified(spec));
    } catch (const TilingError& e) {
        json j = document();
        j["error"] = e.what();
        j["tiles"] = e.tiles();
        emit(j);
        throw;
    }
}

void cmd_tiling_sublattice(std::int64_t k, bool general, int restarts, std::uint64_t seed,
                           const std::optional<std::string>& output) {
    if (k < 1) throw UsageError("--k must be positive");
    const bool regular = !general && is_loeschian(k);
    const SublatticeColoring c =
        regular ? regular_sublattice_coloring(k) : general_sublattice_coloring(k, restarts, seed);
    json j = sublattice_to_json(c);
    j["method"] = regular ? "regular" : "general";
    if (!regular) {
        j["restarts"] = restarts;
        j["seed"] = seed;
    }
    const TilingSpec spec = c.to_spec();
    j["verification"] = verified(spec);
    if (output) {
        write_text_file(*output, tiling_to_json(spec).dump(2) + "\n");
        j["output"] = *output;
    }
    emit(j);
}

void cmd_tiling_radial(int k, std::optional<int> n_max, const std::optional<std::string>& output) {
    const RadialColoring c = radial_optimum(k, n_max.value_or(4 * k));
    json j = radial_to_json(c);
    if (c.feasible) {
        const TilingSpec spec = c.to_spec();
        j["verification"] = verified(spec);
        if (output) {
            write_text_file(*output, tiling_to_json(spec).dump(2) + "\n");
            j["output"] = *output;
        }
    }
    emit(j);
}

void cmd_pack(int q, std::optional<int> q_max, const PackingOptions& options, bool csv,
              const std::optional<std::string>& output) {
    const int last = q_max.value_or(q);
    if (q < 1 || last < q) throw UsageError("need 1 <= --q <= --q-max");
    std::vector<PackingResult> results;
    for (int i = q; i <= last; ++i) results.push_back(pack(i, options));
    if (csv) {
        std::cout << packing_table_csv(results);
        return;
    }
    json j = results.size() == 1 ? packing_to_json(results.front()) : document();
    if (results.size() > 1) {
        json all = json::array();
        for (const PackingResult& r : results) all.push_back(packing_to_json(r));
        j["packings"] = all;
    }
    if (output) {
        write_text_file(*output, j.dump(2) + "\n");
        j["output"] = *output;
    }
    emit(j);
}

// ---------------------------------------------------------------------------
// ledger

struct LedgerArgs {
    std::string ledger = "ledger.jsonl";
    bool paper = false;
    std::vector<std::string> entries;
    std::vector<std::string> tilings;
    std::vector<std::string> packings;
    std::vector<std::string> stores;
    std::string format = "json";
    std::optional<int> k;
    std::vector<std::string> points;
    bool envelope = false;
    std::optional<std::string> svg;
    std::string kind = "chi";
    std::optional<std::string> output;
};

std::vector<BoundEntry> ledger_entries(const LedgerArgs& a, const Common& common) {
    std::vector<BoundEntry> out;
    if (a.paper) out = reference_bounds(common.data());
    if (std::filesystem::exists(a.ledger)) {
        std::vector<BoundEntry> more = read_ledger_file(a.ledger);
        out.insert(out.end(), more.begin(), more.end());
    }
    return out;
}

std::vector<BoundEntry> witness_entries(const LedgerArgs& a, const Config& cfg) {
    std::vector<BoundEntry> out;
    const std::string stamp = now_iso8601();
    for (const std::string& f : a.entries) {
        std::vector<BoundEntry> more = read_ledger_file(f);
        out.insert(out.end(), more.begin(), more.end());
    }
    for (const std::string& f : a.tilings) {
        const TilingSpec spec = tiling_from_json(read_json_file(f));
        BoundEntry e = record_from_witness(spec, verify_tiling(spec));
        e.source = f;
        out.push_back(e);
    }
    for (const std::string& f : a.packings) {
        BoundEntry e = record_from_witness(packing_from_json(read_json_file(f)));
        e.source = f;
        out.push_back(e);
    }
    for (const std::string& f : a.stores) {
        for (const StoredOutcome& o : ResultStore(f).outcomes()) {
            if (o.status != SolveStatus::unsat) continue;
            const ColoringInstance g = o.task.build(clique_budget(cfg));
            SolveOutcome outcome;
            outcome.status = o.status;
            outcome.solver = o.solver;
            const Provenance p = (o.solver == "internal" || o.solver == "clique") ? Provenance::computed : Provenance::external_unverified;
            BoundEntry e = record_from_witness(g, o.task.colors, outcome, p);
            e.source = o.hash;
            out.push_back(e);
        }
    }
    for (BoundEntry& e : out)
        if (e.timestamp.empty()) e.timestamp = stamp;
    return out;
}

void cmd_ledger_import(const LedgerArgs& a, const Common& common) {
    const Config cfg = common.config();
    BoundsLedger ledger;
    if (std::filesystem::exists(a.ledger)) ledger.add_all(read_ledger_file(a.ledger));
    std::vector<BoundEntry> incoming = a.paper ? reference_bounds(common.data()) : std::vector<BoundEntry>{};
    std::vector<BoundEntry> witnesses = witness_entries(a, cfg);
    incoming.insert(incoming.end(), witnesses.begin(), witnesses.end());
    if (incoming.empty()) throw UsageError("nothing to import; pass --paper, --entries, --tiling, --packing or --store");
    std::size_t improved = 0;
    for (const BoundEntry& e : incoming) improved += ledger.add(e);
    append_ledger_file(a.ledger, incoming);
    json j = document();
    j["ledger"] = a.ledger;
    j["imported"] = incoming.size();
    j["improved"] = improved;
    j["monotonicity_violations"] = ledger.monotonicity_violations();
    emit(j);
}

std::map<int, ExtrapolationFit> reference_fits(const Common& common) {
    std::map<int, std::vector<std::pair<double, double>>> points;
    for (const FrontierRow& r : read_frontier_csv(common.data() / "table6.csv"))
        points[r.k].push_back(egraph_point(r.a, r.b));
    std::map<int, ExtrapolationFit> fits;
    for (const auto& [k, p] : points)
        if (p.size() >= 2) fits[k] = extrapolate(p);
    return fits;
}

json bound_json(const std::optional<BoundValue>& v) {
    if (!v) return nullptr;
    return {{"d", v->d}, {"provenance", to_string(v->provenance)}, {"source", v->source}};
}

void cmd_ledger_islands(const LedgerArgs& a, const Common& common) {
    BoundsLedger ledger;
    ledger.add_all(ledger_entries(a, common));
    const std::vector<BoundsRecord> records = ledger.records();
    const std::map<int, ExtrapolationFit> fits = a.paper ? reference_fits(common) : std::map<int, ExtrapolationFit>{};
    if (a.format == "csv") {
        std::cout << islands_csv(records, fits);
        return;
    }
    if (a.format == "text") {
        std::cout << islands_text(records, fits);
        return;
    }
    std::map<int, const BoundsRecord*> by_chi;
    for (const BoundsRecord& r : records) by_chi[r.chi] = &r;
    json rows = json::array();
    for (const IslandRow& row : compute_islands(records)) {
        json r{{"chi", row.chi},
               {"status", to_string(row.status)},
               {"d_min", row.d_min ? json(*row.d_min) : json(nullptr)},
               {"d_max", row.d_max ? json(*row.d_max) : json(nullptr)}};
        if (auto it = by_chi.find(row.chi); it != by_chi.end()) {
            r["d_lb"] = bound_json(it->second->d_lb);
            r["d_ub"] = bound_json(it->second->d_ub);
            r["d_ub_clique"] = bound_json(it->second->d_ub_clique);
        }
        rows.push_back(r);
    }
    json j = document();
    j["islands"] = rows;
    j["monotonicity_violations"] = ledger.monotonicity_violations();
    emit(j);
}

std::vector<std::pair<double, double>> read_points(const std::string& file) {
    const CsvTable t = read_csv(file);
    const bool lattice = std::find(t.header.begin(), t.header.end(), "a") != t.header.end();
    std::vector<std::pair<double, double>> out;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        const auto& row = t.rows[i];
        try {
            if (lattice) out.push_back(egraph_point(std::stoll(row[t.column("a")]), std::stoll(row[t.column("b")])));
            else out.emplace_back(std::stod(row[t.column("r")]), std::stod(row[t.column("d")]));
        } catch (const std::logic_error& e) {
            throw std::runtime_error(file + ": line " + std::to_string(t.line_numbers[i]) + ": " + e.what());
        }
    }
    return out;
}

std::vector<std::pair<double, double>> fit_points(const LedgerArgs& a, const Common& common) {
    std::vector<std::pair<double, double>> pts;
    if (a.k) {
        for (const FrontierRow& r : read_frontier_csv(common.data() / "table6.csv"))
            if (r.k == *a.k) pts.push_back(egraph_point(r.a, r.b));
        if (pts.empty()) throw UsageError("no reference records for k=" + std::to_string(*a.k));
    }
    for (const std::string& f : a.points) {
        auto more = read_points(f);
        pts.insert(pts.end(), more.begin(), more.end());
    }
    for (const std::string& f : a.stores)
        for (const StoredOutcome& o : ResultStore(f).outcomes())
            if (o.status == SolveStatus::unsat && o.task.egraph && (!a.k || o.task.colors == *a.k))
                pts.push_back(egraph_point(o.task.egraph->a, o.task.egraph->b));
    if (a.envelope) pts = lower_envelope(pts);
    return pts;
}

void cmd_ledger_extrapolate(const LedgerArgs& a, const Common& common) {
    const ExtrapolationFit fit = extrapolate(fit_points(a, common));
    json j = document();
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["residual"] = fit.residual;
    json pts = json::array();
    for (auto [r, d] : fit.points) pts.push_back({r, d});
    j["points"] = pts;
    if (a.svg) {
        write_text_file(*a.svg, extrapolation_svg(fit, a.k ? "k = " + std::to_string(*a.k) : std::string()));
        j["svg"] = *a.svg;
    }
    emit(j);
}

void cmd_ledger_plot(const LedgerArgs& a, const Common& common) {
    if (!a.output) throw UsageError("--output is required");
    std::string svg;
    if (a.kind == "chi") {
        BoundsLedger ledger;
        ledger.add_all(ledger_entries(a, common));
        const std::vector<BoundsRecord> records = ledger.records();
        if (records.empty()) throw UsageError("the ledger is empty; import bounds or pass --paper");
        svg = chi_step_svg(records);
    } else {
        const ExtrapolationFit fit = extrapolate(fit_points(a, common));
        svg = extrapolation_svg(fit, a.k ? "k = " + std::to_string(*a.k) : std::string());
    }
    write_text_file(*a.output, svg);
    json j = document();
    j["kind"] = a.kind;
    j["output"] = *a.output;
    emit(j);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bounds on the chromatic number of the plane with forbidden distances [1, d]"};
    app.require_subcommand(1);
    Common common;
    app.add_option("--config", common.config_file, "key = value configuration file")->check(CLI::ExistingFile);
    app.add_option("--solver", common.solver, "external SAT solver command; the CNF path is appended");
    app.add_option("--timeout", common.timeout, "seconds per external solve")->check(CLI::NonNegativeNumber);
    app.add_option("--workers", common.workers, "worker threads for sweeps")->check(CLI::PositiveNumber);
    app.add_option("--data-dir", common.data_dir, "reference datasets directory");

    int status = 0;
    std::function<void(std::function<int()>)> run = [&](std::function<int()> f) { status = f(); };

    add_graph_family(app, GraphKind::egraph, common, run);
    add_graph_family(app, GraphKind::wgraph, common, run);

    HuntPlan hunt_plan;
    SolveFlags hunt_flags;
    std::string hunt_format = "json";
    bool no_tri = false, no_bi = false;
    CLI::App* hunt = app.add_subcommand("hunt", "record search over e-graphs: shrink b, then grow a at the record ratio");
    hunt->add_option("--colors", hunt_plan.colors, "total number of colours K")->check(CLI::PositiveNumber);
    hunt->add_option("--a", hunt_plan.a, "starting a");
    hunt->add_option("--b", hunt_plan.b, "starting b");
    hunt->add_option("--m", hunt_plan.m, "smallest ball radius")->check(CLI::PositiveNumber);
    hunt->add_option("--m-scale", hunt_plan.m_scale, "ball radius as a multiple of sqrt(a)");
    hunt->add_flag("--no-tri", no_tri, "omit the tri-chromatic vertex");
    hunt->add_flag("--no-bi", no_bi, "omit the bi-chromatic vertex");
    hunt->add_option("--max-probes", hunt_plan.max_probes, "probe budget");
    hunt->add_option("--max-a", hunt_plan.max_a, "largest a tried while growing");
    hunt->add_flag("--internal", hunt_flags.internal, "exact DSATUR colourer instead of the SAT solver");
    hunt->add_flag("--force", hunt_flags.force, "re-solve tasks found in the store");
    hunt->add_option("--store", hunt_flags.store, "result store (default results.jsonl)");
    hunt->add_option("--format", hunt_format, "json, text or csv")->check(CLI::IsMember({"json", "text", "csv"}));
    hunt->callback([&] {
        run([&] {
            hunt_plan.tri = !no_tri;
            hunt_plan.bi = !no_bi;
            return cmd_hunt(hunt_plan, common, hunt_flags, hunt_format);
        });
    });

    CLI::App* tiling = app.add_subcommand("tiling", "plane and annulus colourings");
    tiling->require_subcommand(1);
    std::string tiling_file;
    CLI::App* tverify = tiling->add_subcommand("verify", "check a tiling JSON and measure its gap");
    tverify->add_option("file", tiling_file, "tiling JSON")->required()->check(CLI::ExistingFile);
    tverify->callback([&] { run([&] { cmd_tiling_verify(tiling_file); return 0; }); });

    std::int64_t sub_k = 0;
    bool sub_general = false;
    int sub_restarts = 64;
    std::uint64_t sub_seed = 1;
    std::optional<std::string> tiling_output;
    CLI::App* tsub = tiling->add_subcommand("sublattice", "lattice-sublattice colouring with k colours");
    tsub->add_option("--k", sub_k, "number of colours")->required();
    tsub->add_flag("--general", sub_general, "optimize a centrally symmetric hexagon over all sublattices");
    tsub->add_option("--restarts", sub_restarts, "restarts of the general search")->check(CLI::PositiveNumber);
    tsub->add_option("--seed", sub_seed, "seed of the general search");
    tsub->add_option("-o,--output", tiling_output, "write the tiling JSON here");
    tsub->callback([&] {
        run([&] { cmd_tiling_sublattice(sub_k, sub_general, sub_restarts, sub_seed, tiling_output); return 0; });
    });

    int radial_k = 0;
    std::optional<int> radial_n;
    CLI::App* trad = tiling->add_subcommand("radial", "best radial colouring of the annulus with k colours");
    trad->add_option("--k", radial_k, "number of colours")->required();
    trad->add_option("--n-max", radial_n, "largest sector count (default 4k)");
    trad->add_option("-o,--output", tiling_output, "write the tiling JSON here");
    trad->callback([&] { run([&] { cmd_tiling_radial(radial_k, radial_n, tiling_output); return 0; }); });

    int pack_q = 0;
    std::optional<int> pack_q_max;
    PackingOptions pack_options;
    bool pack_csv = false;
    std::optional<std::string> pack_output;
    CLI::App* packc = app.add_subcommand("pack", "q points at mutual distance >= 1 with the smallest width");
    packc->add_option("--q", pack_q, "number of points")->required();
    packc->add_option("--q-max", pack_q_max, "pack every count from --q to this one");
    packc->add_option("--restarts", pack_options.restarts, "independent restarts")->check(CLI::PositiveNumber);
    packc->add_option("--seed", pack_options.seed, "random seed");
    packc->add_option("--cycles", pack_options.cycles, "perturbation cycles per restart")->check(CLI::PositiveNumber);
    packc->add_option("--threads", pack_options.threads, "worker threads (0 = all cores)");
    packc->add_flag("--csv", pack_csv, "print the width table as CSV");
    packc->add_option("-o,--output", pack_output, "write the packing JSON here");
    packc->callback([&] {
        run([&] { cmd_pack(pack_q, pack_q_max, pack_options, pack_csv, pack_output); return 0; });
    });

    LedgerArgs la;
    CLI::App* ledger = app.add_subcommand("ledger", "bounds ledger, islands of certainty, extrapolation");
    ledger->require_subcommand(1);
    auto ledger_opt = [&](CLI::App* c) {
        c->add_option("--ledger", la.ledger, "ledger JSONL (default ledger.jsonl)");
        c->add_flag("--paper", la.paper, "include the bundled reference bounds");
    };
    CLI::App* limport = ledger->add_subcommand("import", "append bounds to the ledger");
    ledger_opt(limport);
    limport->add_option("--entries", la.entries, "ledger JSONL files")->check(CLI::ExistingFile);
    limport->add_option("--tiling", la.tilings, "plane tiling JSON files (verified, lb at k + 1)")->check(CLI::ExistingFile);
    limport->add_option("--packing", la.packings, "packing JSON files (ub_clique at q + 3)")->check(CLI::ExistingFile);
    limport->add_option("--store", la.stores, "result stores; UNSAT outcomes give ub at K")->check(CLI::ExistingFile);
    limport->callback([&] { run([&] { cmd_ledger_import(la, common); return 0; }); });

    CLI::App* lislands = ledger->add_subcommand("islands", "islands of certainty from the ledger");
    ledger_opt(lislands);
    lislands->add_option("--format", la.format, "json, csv or text")->check(CLI::IsMember({"json", "csv", "text"}));
    lislands->callback([&] { run([&] { cmd_ledger_islands(la, common); return 0; }); });

    CLI::App* lextra = ledger->add_subcommand("extrapolate", "least-squares line d(r) and its value at r = 0");
    lextra->add_option("--k", la.k, "use the reference record e-graphs with k colours");
    lextra->add_option("--points", la.points, "CSV with columns r,d or a,b")->check(CLI::ExistingFile);
    lextra->add_option("--store", la.stores, "UNSAT e-graph outcomes of a result store")->check(CLI::ExistingFile);
    lextra->add_flag("--envelope", la.envelope, "fit the smallest d of every r only");
    lextra->add_option("--svg", la.svg, "write the scatter plot here");
    lextra->callback([&] { run([&] { cmd_ledger_extrapolate(la, common); return 0; }); });

    CLI::App* lplot = ledger->add_subcommand("plot", "SVG of chi(d) or of an extrapolation");
    ledger_opt(lplot);
    lplot->add_option("--kind", la.kind, "chi or fit")->check(CLI::IsMember({"chi", "fit"}));
    lplot->add_option("--k", la.k, "fit: reference record e-graphs with k colours");
    lplot->add_option("--points", la.points, "fit: CSV with columns r,d or a,b")->check(CLI::ExistingFile);
    lplot->add_flag("--envelope", la.envelope, "fit: smallest d of every r only");
    lplot->add_option("-o,--output", la.output, "SVG file")->required();
    lplot->callback([&] { run([&] { cmd_ledger_plot(la, common); return 0; }); });

    std::signal(SIGINT, on_interrupt);
    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kUsageError;
    } catch (const std::invalid_argument& e) {
        std::cerr << "cnp: " << e.what() << '\n';
        return kUsageError;
    } catch (const std::exception& e) {
        std::cerr << "cnp: " << e.what() << '\n';
        return 1;
    }
    return status;
}
