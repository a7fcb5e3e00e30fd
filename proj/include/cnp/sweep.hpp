#pragma once

// Batch solving: grids of instances on a worker pool, and the record hunt
// (fix a and shrink b until SAT, then grow a at the record ratio until UNSAT).

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

#include "cnp/store.hpp"

namespace cnp {

struct SolveOptions {
    bool internal = false;  // exact colourer instead of the external solver
    SolverConfig solver;
    int exact_cap = kDefaultExactCap;
    Budget budget;  // internal search and clique search
    bool force = false;  // solve even when the store has the hash
};

struct TaskResult {
    StoredOutcome outcome;
    bool cached = false;
};

/// Internal or external solve of a built instance. A precoloured clique
/// larger than K is reported UNSAT with solver "clique".
SolveOutcome solve_instance(const ColoringInstance& g, int colors, const SolveOptions& options);
/// Builds and solves one task. SAT models are verified by the solve paths.
StoredOutcome solve_task(const TaskSpec& task, const SolveOptions& options);
/// Returns the stored outcome when present (unless forced), otherwise solves
/// and appends.
TaskResult solve_cached(const TaskSpec& task, ResultStore& store, const SolveOptions& options);

/// Cooperative cancellation: workers finish their current task and stop
/// taking new ones.
void request_stop();
void clear_stop();
bool stop_requested();

struct SweepPlan {
    GraphKind family = GraphKind::egraph;
    // e-graph grids
    std::vector<int> m;
    std::vector<std::int64_t> a;
    std::vector<std::int64_t> b;
    std::vector<std::int64_t> bi_s2;  // empty with bi = default placement
    // w-graph grids
    std::vector<int> p;
    std::vector<int> c;
    std::vector<double> d;
    std::vector<std::vector<double>> radii;  // empty = evenly spaced
    std::vector<int> colors;
    bool tri = true;
    bool bi = false;

    /// Cartesian product in a fixed order. Invalid combinations (a > b, a
    /// non-Loeschian value, radii of the wrong length) are skipped; throws
    /// std::length_error past `max_tasks`.
    std::vector<TaskSpec> tasks(std::size_t max_tasks) const;
    static SweepPlan from_json(const nlohmann::json& j);
};

struct SweepSummary {
    std::vector<TaskResult> results;  // task order; tasks not reached are absent
    std::size_t solved = 0;
    std::size_t cached = 0;
    bool interrupted = false;
};

SweepSummary run_sweep(const std::vector<TaskSpec>& tasks, ResultStore& store, const SolveOptions& options,
                       unsigned workers);

struct HuntPlan {
    int colors = 6;
    std::int64_t a = 13;
    std::int64_t b = 21;
    int m = 5;
    double m_scale = 0.0;  // m = max(m, ceil(m_scale * sqrt(a)))
    bool tri = true;
    bool bi = true;
    int max_probes = 50;
    std::int64_t max_a = 1000;
};

struct Probe {
    std::int64_t a = 0;
    std::int64_t b = 0;
    int m = 0;
};

/// One record of the hunt, in the columns k a b d l m q time.
struct FrontierRow {
    int k = 0;
    std::int64_t a = 0;
    std::int64_t b = 0;
    double d = 0.0;
    std::size_t l = 0;  // Loeschian numbers in [a, b]
    int m = 0;
    int q = 0;
    double time = 0.0;
};

/// State machine of the hunt; the caller solves each probe and reports back.
class HuntDriver {
public:
    explicit HuntDriver(HuntPlan plan);

    std::optional<Probe> next() const;
    void report(SolveStatus status, int q, double seconds);
    /// Closes the running phase (recording its best UNSAT) and stops.
    void finish();
    bool done() const { return phase_ == Phase::done; }
    const std::vector<FrontierRow>& frontier() const { return frontier_; }
    int probes() const { return probes_; }
    TaskSpec task(const Probe& p) const;

private:
    enum class Phase { verify, shrink, grow, done };
    int m_for(std::int64_t a) const;
    void close_phase();
    void advance_shrink();
    void start_grow();
    void advance_grow();
    FrontierRow row(int q, double seconds) const;

    HuntPlan plan_;
    Phase phase_ = Phase::verify;
    Probe current_;
    std::optional<FrontierRow> best_;  // record of the running phase
    std::int64_t grow_a_ = 0;
    int probes_ = 0;
    std::vector<FrontierRow> frontier_;
};

struct HuntResult {
    std::vector<FrontierRow> frontier;
    std::vector<TaskResult> probes;
    bool aborted = false;
    std::string error;
};

/// Runs the hunt to its probe budget. A solver failure aborts the hunt and
/// keeps every outcome stored so far.
HuntResult run_hunt(const HuntPlan& plan, ResultStore& store, const SolveOptions& options);

std::string frontier_text(std::span<const FrontierRow> rows);
std::string frontier_csv(std::span<const FrontierRow> rows);

}  // namespace cnp
