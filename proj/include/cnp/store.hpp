#pragma once

// Solve tasks, the append-only result store, and the key=value configuration.

#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"

#include "cnp/colorsat.hpp"
#include "cnp/graphs.hpp"

namespace cnp {

/// Everything needed to rebuild and solve one instance.
struct TaskSpec {
    GraphKind family = GraphKind::egraph;
    std::optional<EGraphSpec> egraph;
    std::optional<WGraphSpec> wgraph;
    bool tri = false;
    std::optional<BiPlacement> bi;
    int colors = 0;

    nlohmann::json to_json() const;
    static TaskSpec from_json(const nlohmann::json& j);
    /// FNV-1a of the canonical JSON form.
    std::string hash() const;
    /// Builds the graph, attaches the poly-chromatic vertices and assigns the
    /// precolouring. `q` receives the base clique size.
    ColoringInstance build(Budget clique_budget = {}, int* q = nullptr) const;
};

struct StoredOutcome {
    std::string hash;
    TaskSpec task;
    SolveStatus status = SolveStatus::unknown;
    double wall_time = 0.0;
    std::string solver;
    int q = 0;
    std::string timestamp;

    nlohmann::json to_json() const;
    static StoredOutcome from_json(const nlohmann::json& j);
};

/// Append-only JSONL file of outcomes keyed by task hash. Loading keeps the
/// last line of every hash; appends are serialized and flushed per line.
class ResultStore {
public:
    ResultStore() = default;  // in-memory only
    explicit ResultStore(std::filesystem::path path);

    std::optional<StoredOutcome> find(const std::string& hash) const;
    void append(const StoredOutcome& outcome);
    std::size_t size() const;
    /// Latest outcome of every hash, ordered by hash.
    std::vector<StoredOutcome> outcomes() const;
    const std::filesystem::path& path() const { return path_; }

private:
    std::filesystem::path path_;
    std::map<std::string, StoredOutcome> by_hash_;
    mutable std::mutex mutex_;
};

/// Settings read from "key = value" lines ('#' starts a comment). Every key
/// can be overridden by the environment variable CNP_<KEY> (upper case).
struct Config {
    std::string solver;            // solver command template; empty = none
    std::string solver_flags;      // passed through verbatim
    double timeout = 300.0;        // seconds per external solve
    unsigned parallelism = 0;      // 0 = hardware concurrency
    int exact_cap = kDefaultExactCap;
    double clique_seconds = 600.0;
    std::size_t max_grid = 100000;

    static Config load(const std::optional<std::filesystem::path>& file);
    /// Applies one key; throws std::invalid_argument for unknown keys or bad values.
    void set(const std::string& key, const std::string& value);
    SolverConfig solver_config() const;
    unsigned workers() const;
};

}  // namespace cnp
