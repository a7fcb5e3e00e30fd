#include "cnp/sweep.hpp"

#include <atomic>
#include <cmath>
#include <exception>
#include <iomanip>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "cnp/bounds.hpp"

namespace cnp {

using nlohmann::json;

namespace {
std::atomic<bool> g_stop{false};
}

void request_stop() { g_stop = true; }
void clear_stop() { g_stop = false; }
bool stop_requested() { return g_stop.load(); }

SolveOutcome solve_instance(const ColoringInstance& g, int colors, const SolveOptions& options) {
    if (g.precolored.size() > static_cast<std::size_t>(colors)) {
        // The precoloured set is a clique, so fewer colours cannot work.
        SolveOutcome o;
        o.status = SolveStatus::unsat;
        o.solver = "clique";
        return o;
    }
    if (options.internal) return exact_color(g, colors, options.budget, options.exact_cap);
    if (options.solver.command.empty()) throw std::runtime_error("no external solver configured");
    return run_external(g, encode(g, colors), options.solver);
}

StoredOutcome solve_task(const TaskSpec& task, const SolveOptions& options) {
    int q = 0;
    const ColoringInstance g = task.build(options.budget, &q);
    const SolveOutcome o = solve_instance(g, task.colors, options);
    return {task.hash(), task, o.status, o.wall_time.count(), o.solver, q, now_iso8601()};
}

TaskResult solve_cached(const TaskSpec& task, ResultStore& store, const SolveOptions& options) {
    if (!options.force)
        if (auto hit = store.find(task.hash()); hit && hit->status != SolveStatus::unknown) return {*hit, true};
    StoredOutcome o = solve_task(task, options);
    store.append(o);
    return {std::move(o), false};
}

// ---------------------------------------------------------------------------

namespace {

template <class T>
const std::vector<T>& require(const std::vector<T>& grid, const char* name) {
    if (grid.empty()) throw std::invalid_argument(std::string("sweep grid '") + name + "' is empty");
    return grid;
}

}  // namespace

std::vector<TaskSpec> SweepPlan::tasks(std::size_t max_tasks) const {
    std::vector<TaskSpec> out;
    auto push = [&](TaskSpec t) {
        if (out.size() >= max_tasks) throw std::length_error("sweep exceeds " + std::to_string(max_tasks) + " tasks");
        out.push_back(std::move(t));
    };
    if (family == GraphKind::egraph) {
        for (int mm : require(m, "m"))
            for (std::int64_t aa : require(a, "a"))
                for (std::int64_t bb : require(b, "b")) {
                    if (aa < 1 || aa > bb || !is_loeschian(aa) || !is_loeschian(bb)) continue;
                    for (int k : require(colors, "colors")) {
                        TaskSpec t;
                        t.family = GraphKind::egraph;
                        t.egraph = EGraphSpec{mm, aa, bb};
                        t.tri = tri;
                        t.colors = k;
                        if (!bi) {
                            push(t);
                        } else if (bi_s2.empty()) {
                            t.bi = BiPlacement{};
                            push(t);
                        } else {
                            for (std::int64_t s2 : bi_s2) {
                                if (s2 < aa || s2 > bb || !is_loeschian(s2)) continue;
                                t.bi = BiPlacement{s2, std::nullopt, std::nullopt};
                                push(t);
                            }
                        }
                    }
                }
    } else if (family == GraphKind::wgraph) {
        const std::vector<std::vector<double>> radius_grid = radii.empty() ? std::vector<std::vector<double>>{{}} : radii;
        for (int pp : require(p, "p"))
            for (int cc : require(c, "c"))
                for (double dd : require(d, "d"))
                    for (const auto& rr : radius_grid) {
                        if (!rr.empty() && rr.size() != static_cast<std::size_t>(cc)) continue;
                        for (int k : require(colors, "colors")) {
                            TaskSpec t;
                            t.family = GraphKind::wgraph;
                            t.wgraph = WGraphSpec{pp, cc, dd, rr, {}};
                            t.tri = tri;
                            if (bi) t.bi = BiPlacement{};
                            t.colors = k;
                            push(t);
                        }
                    }
    } else {
        throw std::invalid_argument("sweeps take e-graphs or w-graphs only");
    }
    return out;
}

SweepPlan SweepPlan::from_json(const json& j) {
    SweepPlan p;
    p.family = graph_kind_from_string(j.at("family").get<std::string>());
    p.m = j.value("m", std::vector<int>{});
    p.a = j.value("a", std::vector<std::int64_t>{});
    p.b = j.value("b", std::vector<std::int64_t>{});
    p.bi_s2 = j.value("bi_s2", std::vector<std::int64_t>{});
    p.p = j.value("p", std::vector<int>{});
    p.c = j.value("c", std::vector<int>{});
    p.d = j.value("d", std::vector<double>{});
    p.radii = j.value("radii", std::vector<std::vector<double>>{});
    p.colors = j.value("colors", std::vector<int>{});
    p.tri = j.value("tri", true);
    p.bi = j.value("bi", false);
    return p;
}

SweepSummary run_sweep(const std::vector<TaskSpec>& tasks, ResultStore& store, const SolveOptions& options,
                       unsigned workers) {
    std::vector<std::optional<TaskResult>> slots(tasks.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (std::size_t i = next++; i < tasks.size(); i = next++) {
            if (stop_requested() || failed) return;
            try {
                slots[i] = solve_cached(tasks[i], store, options);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                failed = true;
                return;
            }
        }
    };
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(std::max<std::size_t>(1, tasks.size()))));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < workers; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);

    SweepSummary summary;
    for (auto& slot : slots) {
        if (!slot) {
            summary.interrupted = true;
            continue;
        }
        (slot->cached ? summary.cached : summary.solved) += 1;
        summary.results.push_back(std::move(*slot));
    }
    return summary;
}

// ---------------------------------------------------------------------------

HuntDriver::HuntDriver(HuntPlan plan) : plan_(plan) {
    if (plan_.colors < 1) throw std::invalid_argument("hunt needs a positive colour count");
    if (plan_.a < 1 || plan_.b <= plan_.a) throw std::invalid_argument("hunt needs 1 <= a < b");
    if (!is_loeschian(plan_.a) || !is_loeschian(plan_.b)) throw std::invalid_argument("hunt seeds must be Loeschian");
    if (plan_.m < 1) throw std::invalid_argument("hunt needs m >= 1");
    current_ = {plan_.a, plan_.b, m_for(plan_.a)};
    if (plan_.max_probes < 1) phase_ = Phase::done;
}

int HuntDriver::m_for(std::int64_t a) const {
    const int scaled = static_cast<int>(std::ceil(plan_.m_scale * std::sqrt(static_cast<double>(a))));
    return std::max(plan_.m, scaled);
}

TaskSpec HuntDriver::task(const Probe& p) const {
    TaskSpec t;
    t.family = GraphKind::egraph;
    t.egraph = EGraphSpec{p.m, p.a, p.b};
    t.tri = plan_.tri;
    if (plan_.bi) t.bi = BiPlacement{};
    t.colors = plan_.colors;
    return t;
}

std::optional<Probe> HuntDriver::next() const {
    if (phase_ == Phase::done) return std::nullopt;
    return current_;
}

FrontierRow HuntDriver::row(int q, double seconds) const {
    return {plan_.colors,
            current_.a,
            current_.b,
            std::sqrt(static_cast<double>(current_.b) / static_cast<double>(current_.a)),
            loeschian_count_in(current_.a, current_.b),
            current_.m,
            q,
            seconds};
}

void HuntDriver::close_phase() {
    if (best_ && (frontier_.empty() || best_->d < frontier_.back().d)) frontier_.push_back(*best_);
    best_.reset();
}

void HuntDriver::advance_shrink() {
    const std::int64_t b = previous_loeschian(best_->b);
    if (b <= best_->a) {
        start_grow();
        return;
    }
    current_ = {best_->a, b, m_for(best_->a)};
}

void HuntDriver::start_grow() {
    const std::int64_t a = best_ ? best_->a : current_.a;
    close_phase();
    if (frontier_.empty()) {
        phase_ = Phase::done;
        return;
    }
    phase_ = Phase::grow;
    grow_a_ = a;
    advance_grow();
}

void HuntDriver::advance_grow() {
    grow_a_ = next_loeschian(grow_a_);
    if (grow_a_ > plan_.max_a) {
        phase_ = Phase::done;
        return;
    }
    const FrontierRow& record = frontier_.back();
    // Smallest b with b / a' >= record.b / record.a.
    const std::int64_t target = (record.b * grow_a_ + record.a - 1) / record.a;
    current_ = {grow_a_, loeschian_at_least(target), m_for(grow_a_)};
}

void HuntDriver::report(SolveStatus status, int q, double seconds) {
    if (phase_ == Phase::done) throw std::logic_error("hunt is finished");
    ++probes_;
    switch (phase_) {
        case Phase::verify:
            if (status == SolveStatus::unsat) {
                best_ = row(q, seconds);
                phase_ = Phase::shrink;
                advance_shrink();
            } else if (status == SolveStatus::sat) {
                current_.b = next_loeschian(current_.b);
            } else {
                phase_ = Phase::done;
            }
            break;
        case Phase::shrink:
            if (status == SolveStatus::unsat) {
                best_ = row(q, seconds);
                advance_shrink();
            } else {
                start_grow();
            }
            break;
        case Phase::grow:
            if (status == SolveStatus::unsat) {
                best_ = row(q, seconds);
                phase_ = Phase::shrink;
                advance_shrink();
            } else {
                advance_grow();
            }
            break;
        case Phase::done: break;
    }
    if (probes_ >= plan_.max_probes) finish();
}

void HuntDriver::finish() {
    close_phase();
    phase_ = Phase::done;
}

HuntResult run_hunt(const HuntPlan& plan, ResultStore& store, const SolveOptions& options) {
    HuntDriver driver(plan);
    HuntResult result;
    while (auto probe = driver.next()) {
        if (stop_requested()) {
            result.aborted = true;
            result.error = "interrupted";
            break;
        }
        try {
            TaskResult r = solve_cached(driver.task(*probe), store, options);
            driver.report(r.outcome.status, r.outcome.q, r.outcome.wall_time);
            result.probes.push_back(std::move(r));
        } catch (const std::exception& e) {
            result.aborted = true;
            result.error = e.what();
            break;
        }
    }
    driver.finish();
    result.frontier = driver.frontier();
    return result;
}

std::string frontier_text(std::span<const FrontierRow> rows) {
    std::ostringstream out;
    out << std::setw(3) << "k" << std::setw(6) << "a" << std::setw(6) << "b" << std::setw(9) << "d" << std::setw(6) << "l"
        << std::setw(5) << "m" << std::setw(4) << "q" << std::setw(12) << "time, s" << '\n';
    for (const FrontierRow& r : rows)
        out << std::setw(3) << r.k << std::setw(6) << r.a << std::setw(6) << r.b << std::setw(9) << std::fixed
            << std::setprecision(5) << r.d << std::setw(6) << r.l << std::setw(5) << r.m << std::setw(4) << r.q
            << std::setw(12) << std::setprecision(1) << r.time << '\n';
    return out.str();
}

std::string frontier_csv(std::span<const FrontierRow> rows) {
    std::ostringstream out;
    out << "k,a,b,d,l,m,q,time\n";
    for (const FrontierRow& r : rows)
        out << r.k << ',' << r.a << ',' << r.b << ',' << std::fixed << std::setprecision(5) << r.d << ',' << r.l << ','
            << r.m << ',' << r.q << ',' << std::setprecision(3) << r.time << '\n';
    return out.str();
}

}  // namespace cnp
