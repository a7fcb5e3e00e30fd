#pragma once

// Reference datasets shipped in data/: published bounds, sublattice
// distances, annulus estimates, clique widths and record e-graphs.

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "cnp/bounds.hpp"
#include "cnp/sweep.hpp"

namespace cnp {

/// Comma-separated table with a header line. No quoting; blank cells are kept.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<int> line_numbers;  // source line of every row

    std::size_t column(const std::string& name) const;
};

/// Throws std::runtime_error with the line number on ragged rows.
CsvTable read_csv(const std::filesystem::path& path);

struct SublatticeRow {
    int k = 0;
    double d = 0.0;
    bool loeschian = false;
};

struct AnnulusRow {
    int k = 0;
    double radial = 0.0;
    double arbitrary = 0.0;
    bool arbitrary_checked = true;
    double graph_d = 0.0;
    int p = 0;
    int c = 0;
    int q = 0;
};

struct CliqueRow {
    int q = 0;
    double d = 0.0;
};

/// data/ next to the sources, overridden by the CNP_DATA_DIR environment variable.
std::filesystem::path default_data_dir();

std::vector<SublatticeRow> read_sublattice_table(const std::filesystem::path& path);
std::vector<AnnulusRow> read_annulus_table(const std::filesystem::path& path);
std::vector<CliqueRow> read_clique_table(const std::filesystem::path& path);
/// Record e-graphs in the frontier columns k a b d l m q time.
std::vector<FrontierRow> read_frontier_csv(const std::filesystem::path& path);

/// Every bound the reference tables certify, tagged paper-import: the
/// summary ledger first, then sublattice records (lb at k + 1, only where d
/// grows), annulus graphs (ub at k + 3), clique widths (ub_clique at q + 3)
/// and record e-graphs (ub at k).
std::vector<BoundEntry> reference_bounds(const std::filesystem::path& dir);

}  // namespace cnp
