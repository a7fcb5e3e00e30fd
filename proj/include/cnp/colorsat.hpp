#pragma once

// K-colourability of a ColoringInstance: direct CNF encoding for external
// SAT solvers, an exact DSATUR colourer for small instances, and a checker
// for colourings.

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cnp/graphs.hpp"

namespace cnp {

struct CnfInstance {
    int colors = 0;
    int vertices = 0;  // expanded vertex count
    std::int64_t variable_count = 0;
    std::vector<std::vector<std::int64_t>> clauses;

    /// Variable of (expanded vertex, colour), both 0-based.
    std::int64_t variable(int vertex, int color) const {
        return static_cast<std::int64_t>(vertex) * colors + color + 1;
    }
};

/// Clause order: one at-least-one clause per expanded vertex (ascending),
/// K conflict clauses per expanded edge (lexicographic), then a unit clause
/// fixing the i-th precoloured vertex to colour i. At-most-one clauses are
/// omitted. Throws std::invalid_argument when K is smaller than the
/// precoloured set.
CnfInstance encode(const ColoringInstance& g, int colors);

/// DIMACS CNF text. The optional comment goes on a leading "c" line.
void write_dimacs(const CnfInstance& cnf, std::ostream& out, const std::string& comment = {});
std::string to_dimacs(const CnfInstance& cnf, const std::string& comment = {});

enum class SolveStatus { sat, unsat, unknown };
std::string to_string(SolveStatus s);

struct SolveOutcome {
    SolveStatus status = SolveStatus::unknown;
    std::optional<std::vector<int>> colors;  // per expanded vertex, present iff SAT
    std::chrono::duration<double> wall_time{0.0};
    std::string solver;                       // "internal" or the command line
};

struct Violation {
    enum class Kind { monochromatic_edge, precolor_mismatch, color_out_of_range } kind;
    int i = -1;
    int j = -1;
};

/// Every monochromatic edge, precolouring mismatch, and out-of-range colour.
std::vector<Violation> verify_coloring(const ColoringInstance& g, const std::vector<int>& colors, int palette = 0);

/// Colour of every expanded vertex from a satisfying assignment: the smallest
/// true colour variable of each vertex.
std::vector<int> decode_model(const CnfInstance& cnf, const std::vector<std::int64_t>& true_literals);

struct SolverConfig {
    std::string command;  // e.g. "kissat -q"; the CNF path is appended
    std::chrono::duration<double> timeout{300.0};
    std::string extra_flags;  // passed through verbatim before the CNF path
};

/// Parsed contents of a solver's standard output.
struct SolverReport {
    std::optional<SolveStatus> status;
    std::vector<std::int64_t> literals;
    bool saw_model_end = false;
};
SolverReport parse_solver_output(const std::string& text);

/// Writes the CNF to a temporary file, runs the solver with the file path as
/// last argument and parses "s" and "v" lines, falling back to exit codes
/// 10/20. Timeouts yield UNKNOWN. A SAT model is decoded and verified before
/// it is returned. Throws std::runtime_error on malformed solver output.
SolveOutcome run_external(const ColoringInstance& g, const CnfInstance& cnf, const SolverConfig& config);

inline constexpr int kDefaultExactCap = 80;

/// Exact DSATUR branch and bound. Throws std::length_error when the expanded
/// instance exceeds `cap` vertices; budget exhaustion yields UNKNOWN.
SolveOutcome exact_color(const ColoringInstance& g, int colors, Budget budget = {}, int cap = kDefaultExactCap);

/// Stable 64-bit hash of the instance structure and K (FNV-1a).
std::uint64_t instance_hash(const ColoringInstance& g, int colors);
std::string hash_hex(std::uint64_t h);

}  // namespace cnp
