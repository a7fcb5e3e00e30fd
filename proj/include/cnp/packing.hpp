#pragma once

// Point packing: q points with pairwise distances >= 1 and the smallest
// possible width (largest pairwise distance). A packing of width d is a
// q-clique of the distance graph with window [1, d].

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "cnp/geometry.hpp"

namespace cnp {

struct PackingResult {
    int q = 0;
    std::vector<Point> points;
    double width = 0.0;
    double min_dist = 0.0;
    std::uint64_t seed = 0;
    int restarts = 0;
};

struct PackingOptions {
    int restarts = 64;
    std::uint64_t seed = 1;
    int cycles = 3;
    int large_iterations = 400;  // strategy (i): +-2 kicks on one to three points
    int small_iterations = 400;  // strategy (ii): +-0.05 shake of every point
    double large_step = 2.0;
    double small_step = 0.05;
    unsigned threads = 0;  // 0 = hardware concurrency
};

struct PackingMeasure {
    double min_dist = 0.0;
    double width = 0.0;
};

/// Exact pairwise extremes. Coincident points give min_dist 0.
PackingMeasure verify_packing(std::span<const Point> points);

/// Best packing over independent restarts. Each restart starts from random
/// points in a disk of radius ~sqrt(q), then alternates the two perturbation
/// strategies, refining every candidate with a penalty descent and keeping
/// it when the rescaled width improves. Results are rescaled so that
/// min_dist = 1 and do not depend on the thread count.
PackingResult pack(int q, const PackingOptions& options);
PackingResult pack(int q, int restarts, std::uint64_t seed);

/// Penalty descent followed by rescaling to min_dist = 1; returns the points.
std::vector<Point> refine_packing(std::vector<Point> points);

/// The (q+3)-argument: a q-clique of width d with the tri- and bi-chromatic
/// points forces chi >= q + 3. Throws for q < 1.
int clique_chi_bound(int q);

/// Table-style CSV: one row per decade ("+0", "+10", ...) and columns +1..+10.
std::string packing_table_csv(std::span<const PackingResult> results);

}  // namespace cnp
